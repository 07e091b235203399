// SPDX-License-Identifier: Apache-2.0

#include "selbeam/solver.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace selbeam {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double rate_nats(double gamma) { return std::log1p(gamma); }

// Global rescale of W so that power_lhs hits `target`. The power LHS is
// a quadratic in the scale c: (||W||_F^2/eta) c^2 + (p_a sum_i ||w_i^r||) c.
CMatrix rescale_to_power(const CMatrix& w, double eta_pa, double p_a, double target) {
    const double quad = w.squaredNorm() / eta_pa;
    double lin = 0.0;
    for (int i = 0; i < w.rows(); ++i) lin += p_a * w.row(i).norm();
    if (quad <= 0.0) return w;
    const double c = (-lin + std::sqrt(lin * lin + 4.0 * quad * target)) / (2.0 * quad);
    return c * w;
}

CMatrix initial_beamformer(const ProblemInstance& instance, const SolverOptions& options) {
    const auto& cfg = instance.config;
    CMatrix w(cfg.n_t, cfg.m);
    if (options.init_scheme == InitScheme::kMatchedFilter) {
        for (int j = 0; j < cfg.m; ++j) {
            const CVector h_j = instance.channel.h.col(j);
            const double norm = h_j.norm();
            w.col(j) = norm > 0 ? CVector(h_j / norm) : CVector::Zero(cfg.n_t);
        }
    } else {
        std::mt19937_64 rng(options.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int j = 0; j < cfg.m; ++j)
            for (int i = 0; i < cfg.n_t; ++i) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                w(i, j) = Complex(re, im);
            }
    }
    return rescale_to_power(w, cfg.eta_pa, cfg.p_a, 0.9 * cfg.p_tot);
}

}  // namespace

void SolverOptions::validate() const {
    if (!(step_primal > 0)) throw std::invalid_argument("SolverOptions: step_primal must be > 0");
    if (!(step_dual > 0)) throw std::invalid_argument("SolverOptions: step_dual must be > 0");
    if (!(step_decay > 0 && step_decay <= 1.0))
        throw std::invalid_argument("SolverOptions: step_decay must be in (0, 1]");
    if (decay_start < 0) throw std::invalid_argument("SolverOptions: decay_start must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("SolverOptions: max_iters must be >= 1");
    if (!(tol_primal > 0)) throw std::invalid_argument("SolverOptions: tol_primal must be > 0");
    if (!(tol_constraint > 0))
        throw std::invalid_argument("SolverOptions: tol_constraint must be > 0");
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::kConverged: return "converged";
        case SolveStatus::kMaxIters: return "max-iters";
        case SolveStatus::kDiverged: return "diverged";
    }
    return "unknown";
}

CMatrix grad_radar(const CMatrix& w, const CMatrix& r, double sigma_r2, double rho_r) {
    if (r.rows() != r.cols() || r.rows() != w.rows())
        throw std::invalid_argument("grad_radar: shape mismatch");
    const double c = 1.0 / sigma_r2;
    const int n = static_cast<int>(r.rows());
    const CMatrix rw = r * w;
    const CMatrix y = CMatrix::Identity(n, n) + c * (rw * w.adjoint());
    Eigen::PartialPivLU<CMatrix> lu(y);
    CMatrix g = rho_r * c * lu.solve(rw);
    if (!g.allFinite()) throw std::runtime_error("grad_radar: non-finite result");
    return g;
}

CMatrix grad_comm(const CMatrix& w, const ProblemInstance& instance, const RVector& mu) {
    const auto& cfg = instance.config;
    if (w.rows() != cfg.n_t || w.cols() != cfg.m)
        throw std::invalid_argument("grad_comm: beamformer shape mismatch");
    if (mu.size() != cfg.m) throw std::invalid_argument("grad_comm: mu length mismatch");

    const CMatrix& h = instance.channel.h;
    // Per user m: signal S_m = |h_m^H w_m|^2, denominator D_m = interference + sigma_c^2.
    RVector signal(cfg.m), denom(cfg.m), gamma(cfg.m);
    CMatrix proj = h.adjoint() * w;  // proj(m, j) = h_m^H w_j
    for (int m = 0; m < cfg.m; ++m) {
        signal[m] = std::norm(proj(m, m));
        double interference = 0.0;
        for (int j = 0; j < cfg.m; ++j)
            if (j != m) interference += std::norm(proj(m, j));
        denom[m] = interference + cfg.sigma_c2;
        gamma[m] = signal[m] / denom[m];
    }

    CMatrix g = CMatrix::Zero(cfg.n_t, cfg.m);
    for (int i = 0; i < cfg.m; ++i) {
        // Self term: mu_i / (1+gamma_i) * h_i (h_i^H w_i) / D_i.
        g.col(i) += (mu[i] / (1.0 + gamma[i]) / denom[i]) * (h.col(i) * proj(i, i));
        // Interference terms: raising |h_m^H w_i| lowers gamma_m for m != i.
        for (int m = 0; m < cfg.m; ++m) {
            if (m == i) continue;
            const double coeff = -mu[m] * gamma[m] / (1.0 + gamma[m]) / denom[m];
            g.col(i) += coeff * (h.col(m) * proj(m, i));
        }
    }
    return g;
}

CMatrix grad_power_smooth(const CMatrix& w, double lambda, double eta_pa) {
    if (!(lambda >= 0)) throw std::invalid_argument("grad_power_smooth: lambda must be >= 0");
    if (!(eta_pa > 0)) throw std::invalid_argument("grad_power_smooth: eta_pa must be > 0");
    return (lambda / eta_pa) * w;
}

Eigen::RowVectorXcd prox_row(const Eigen::RowVectorXcd& v, double threshold) {
    if (!(threshold >= 0)) throw std::invalid_argument("prox_row: threshold must be >= 0");
    const double norm = v.norm();
    if (norm <= threshold) return Eigen::RowVectorXcd::Zero(v.size());
    return (1.0 - threshold / norm) * v;
}

CMatrix primal_step(const CMatrix& w, const ProblemInstance& instance, const DualState& duals,
                    const SolverOptions& options) {
    const auto& cfg = instance.config;
    const CMatrix ascent = grad_radar(w, instance.radar_covariance, cfg.sigma_r2, cfg.rho_r) +
                           grad_comm(w, instance, duals.mu) -
                           grad_power_smooth(w, duals.lambda, cfg.eta_pa);
    CMatrix next = w + options.step_primal * ascent;
    for (int i = 0; i < cfg.n_t; ++i) {
        const double threshold =
            options.step_primal *
            (cfg.rho_s * (1.0 - instance.reliability.beta[i]) + duals.lambda * cfg.p_a);
        next.row(i) = prox_row(next.row(i), threshold);
    }
    return next;
}

double dual_update_lambda(double lambda, double step_dual, double power_lhs_value, double p_tot) {
    return std::max(0.0, lambda + step_dual * (power_lhs_value - p_tot));
}

double dual_update_mu(double mu_j, double step_dual, double r_min_j_nats, double rate_j_nats) {
    return std::max(0.0, mu_j + step_dual * (r_min_j_nats - rate_j_nats));
}

SolveResult gpgda_solve(const ProblemInstance& instance, const SolverOptions& options) {
    options.validate();
    const auto& cfg = instance.config;

    CMatrix w = initial_beamformer(instance, options);
    DualState duals;
    duals.mu = RVector::Zero(cfg.m);

    SolveTrace trace;
    trace.records.reserve(options.max_iters);
    SolveStatus status = SolveStatus::kMaxIters;

    const RVector r_min_nats = cfg.r_min * kLn2;
    SolverOptions step_opts = options;

    for (int iter = 0; iter < options.max_iters; ++iter) {
        if (iter > options.decay_start) {
            step_opts.step_primal *= options.step_decay;
            step_opts.step_dual *= options.step_decay;
        }
        CMatrix next = primal_step(w, instance, duals, step_opts);
        if (!next.allFinite()) {
            status = SolveStatus::kDiverged;
            break;
        }

        const double power = power_lhs(next, cfg.eta_pa, cfg.p_a);
        RVector rates(cfg.m);
        double max_rate_violation = 0.0;
        for (int j = 0; j < cfg.m; ++j) {
            rates[j] = rate_nats(sinr(instance, next, j));
            max_rate_violation = std::max(max_rate_violation, r_min_nats[j] - rates[j]);
        }
        max_rate_violation = std::max(max_rate_violation, 0.0);
        const double power_violation = std::max(power - cfg.p_tot, 0.0);

        IterationRecord rec;
        const double mui = radar_mutual_information(instance.radar_covariance, next, cfg.sigma_r2);
        double penalty = 0.0;
        for (int i = 0; i < cfg.n_t; ++i)
            penalty += (1.0 - instance.reliability.beta[i]) * next.row(i).norm();
        rec.smooth_lagrangian = cfg.rho_r * mui + duals.mu.dot(rates) -
                                duals.lambda * next.squaredNorm() / cfg.eta_pa;
        rec.objective = cfg.rho_r * mui - cfg.rho_s * penalty;
        rec.power_violation = power_violation;
        rec.max_rate_violation = max_rate_violation;
        rec.density_pct = row_density(next);
        rec.lambda = duals.lambda;
        rec.max_mu = cfg.m > 0 ? duals.mu.maxCoeff() : 0.0;
        trace.records.push_back(rec);

        const double denom = std::max(w.norm(), 1e-30);
        const double rel_change = (next - w).norm() / denom;

        duals.lambda = dual_update_lambda(duals.lambda, step_opts.step_dual, power, cfg.p_tot);
        for (int j = 0; j < cfg.m; ++j)
            duals.mu[j] = dual_update_mu(duals.mu[j], step_opts.step_dual, r_min_nats[j], rates[j]);

        w = std::move(next);

        if (rel_change < options.tol_primal && power_violation < options.tol_constraint &&
            max_rate_violation < options.tol_constraint) {
            status = SolveStatus::kConverged;
            break;
        }
    }

    trace.status = status;
    return SolveResult{BeamformingMatrix{std::move(w)}, std::move(duals), std::move(trace)};
}

}  // namespace selbeam
