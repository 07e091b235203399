// SPDX-License-Identifier: Apache-2.0

#include "selbeam/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace selbeam {

double sinr(const ProblemInstance& instance, const CMatrix& w, int m_idx) {
    const int m = instance.config.m;
    if (m_idx < 0 || m_idx >= m) throw std::invalid_argument("sinr: user index out of range");
    if (w.rows() != instance.config.n_t || w.cols() != m)
        throw std::invalid_argument("sinr: beamformer shape mismatch");
    const CVector h_m = instance.channel.h.col(m_idx);
    double signal = std::norm(Complex(h_m.adjoint() * w.col(m_idx)));
    double interference = 0.0;
    for (int j = 0; j < m; ++j) {
        if (j == m_idx) continue;
        interference += std::norm(Complex(h_m.adjoint() * w.col(j)));
    }
    return signal / (interference + instance.config.sigma_c2);
}

double user_rate(double gamma) {
    if (!(gamma >= 0)) throw std::invalid_argument("user_rate: gamma must be >= 0");
    return std::log2(1.0 + gamma);
}

double radar_mutual_information(const CMatrix& r, const CMatrix& w, double sigma_r2) {
    if (!(sigma_r2 > 0)) throw std::invalid_argument("radar_mutual_information: sigma_r2 <= 0");
    if (r.rows() != r.cols() || r.rows() != w.rows())
        throw std::invalid_argument("radar_mutual_information: shape mismatch");
    const int n = static_cast<int>(r.rows());

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(r);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("radar_mutual_information: eigendecomposition failed");
    const double trace = r.trace().real();
    if (eig.eigenvalues().minCoeff() < -1e-8 * std::max(trace, 1.0))
        throw std::domain_error("radar_mutual_information: R is not PSD");

    // R^{1/2} with small negative eigenvalues clamped to zero.
    RVector lam = eig.eigenvalues().cwiseMax(0.0);
    CMatrix r_sqrt = eig.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
                     eig.eigenvectors().adjoint();

    CMatrix b = r_sqrt * w;
    CMatrix hermitian = CMatrix::Identity(n, n) + (1.0 / sigma_r2) * (b * b.adjoint());
    Eigen::LLT<CMatrix> llt(hermitian);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("radar_mutual_information: factorization failed");
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i).real());
    return std::max(logdet, 0.0);
}

double power_lhs(const CMatrix& w, double eta_pa, double p_a) {
    if (!(eta_pa > 0)) throw std::invalid_argument("power_lhs: eta_pa must be > 0");
    if (!(p_a >= 0)) throw std::invalid_argument("power_lhs: p_a must be >= 0");
    const double transmit = w.squaredNorm() / eta_pa;
    double overhead = 0.0;
    for (int i = 0; i < w.rows(); ++i) overhead += w.row(i).norm();
    return transmit + p_a * overhead;
}

namespace {

// Active-row mask under the relative row-norm threshold.
std::vector<int> active_rows(const CMatrix& w, double epsilon_rel) {
    RVector norms(w.rows());
    for (int i = 0; i < w.rows(); ++i) norms[i] = w.row(i).norm();
    const double max_norm = norms.size() > 0 ? norms.maxCoeff() : 0.0;
    std::vector<int> active;
    if (max_norm == 0.0) return active;
    for (int i = 0; i < norms.size(); ++i)
        if (norms[i] > epsilon_rel * max_norm) active.push_back(i);
    return active;
}

}  // namespace

double row_density(const CMatrix& w, double epsilon_rel) {
    if (!(epsilon_rel > 0)) throw std::invalid_argument("row_density: epsilon_rel must be > 0");
    if (w.rows() == 0) return 0.0;
    return 100.0 * static_cast<double>(active_rows(w, epsilon_rel).size()) /
           static_cast<double>(w.rows());
}

double reliability_score(const CMatrix& w, const RVector& beta, double epsilon_rel) {
    if (beta.size() != w.rows())
        throw std::invalid_argument("reliability_score: beta length must equal row count");
    const auto active = active_rows(w, epsilon_rel);
    if (active.empty()) return 100.0;
    double sum = 0.0;
    for (int i : active) sum += beta[i];
    return 100.0 * sum / static_cast<double>(active.size());
}

MetricsRow summarize(const ProblemInstance& instance, const CMatrix& w, double rho_s,
                     RateAggregation aggregation) {
    const int m = instance.config.m;
    double se_sum = 0.0;
    double rate_sum = 0.0;
    for (int j = 0; j < m; ++j) {
        const double se = user_rate(sinr(instance, w, j));
        se_sum += se;
        rate_sum += instance.config.bandwidths[j] * se;
    }
    MetricsRow row;
    row.avg_se = se_sum / m;
    row.avg_rate = aggregation == RateAggregation::kMean ? rate_sum / m : rate_sum;
    row.reliability_pct = reliability_score(w, instance.reliability.beta);
    row.mui = radar_mutual_information(instance.radar_covariance, w, instance.config.sigma_r2);
    row.density_pct = row_density(w);
    row.power_w = power_lhs(w, instance.config.eta_pa, instance.config.p_a);
    row.rho_s = rho_s;
    return row;
}

}  // namespace selbeam
