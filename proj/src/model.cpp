// SPDX-License-Identifier: Apache-2.0

#include "selbeam/model.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "json.hpp"

namespace selbeam {

void SystemConfig::validate() const {
    if (n_t < 1) throw std::invalid_argument("SystemConfig: n_t must be >= 1");
    if (n_r < 1) throw std::invalid_argument("SystemConfig: n_r must be >= 1");
    if (m < 1) throw std::invalid_argument("SystemConfig: m must be >= 1");
    if (k < 0) throw std::invalid_argument("SystemConfig: k must be >= 0");
    if (!(sigma_r2 > 0)) throw std::invalid_argument("SystemConfig: sigma_r2 must be > 0");
    if (!(sigma_c2 > 0)) throw std::invalid_argument("SystemConfig: sigma_c2 must be > 0");
    if (!(rho_r >= 0)) throw std::invalid_argument("SystemConfig: rho_r must be >= 0");
    if (!(rho_s >= 0)) throw std::invalid_argument("SystemConfig: rho_s must be >= 0");
    if (!(eta_pa > 0 && eta_pa <= 1))
        throw std::invalid_argument("SystemConfig: eta_pa must be in (0,1]");
    if (!(p_a >= 0)) throw std::invalid_argument("SystemConfig: p_a must be >= 0");
    if (!(p_tot > 0)) throw std::invalid_argument("SystemConfig: p_tot must be > 0");
    if (!(spacing_ratio > 0))
        throw std::invalid_argument("SystemConfig: spacing_ratio must be > 0");
    if (r_min.size() != m)
        throw std::invalid_argument("SystemConfig: r_min must have length m");
    if (bandwidths.size() != m)
        throw std::invalid_argument("SystemConfig: bandwidths must have length m");
    for (int j = 0; j < m; ++j) {
        if (!(r_min[j] >= 0))
            throw std::invalid_argument("SystemConfig: r_min entries must be >= 0");
        if (!(bandwidths[j] > 0))
            throw std::invalid_argument("SystemConfig: bandwidth entries must be > 0");
    }
}

void RadarScene::validate() const {
    if (angles.size() != powers.size())
        throw std::invalid_argument("RadarScene: angles and powers must have equal length");
    constexpr double half_pi = 1.5707963267948966;
    for (int i = 0; i < angles.size(); ++i) {
        if (!(angles[i] > -half_pi && angles[i] < half_pi))
            throw std::invalid_argument("RadarScene: angles must lie in (-pi/2, pi/2)");
        if (!(powers[i] >= 0))
            throw std::invalid_argument("RadarScene: powers must be >= 0");
    }
}

void ReliabilityVector::validate() const {
    for (int i = 0; i < beta.size(); ++i) {
        if (!(beta[i] >= 0.0 && beta[i] <= 1.0)) {
            std::ostringstream msg;
            msg << "ReliabilityVector: entry " << i << " = " << beta[i]
                << " is outside [0, 1]";
            throw std::domain_error(msg.str());
        }
    }
}

CVector steering_vector(double theta, int n, double spacing_ratio) {
    if (!std::isfinite(theta)) throw std::invalid_argument("steering_vector: theta must be finite");
    if (n < 1) throw std::invalid_argument("steering_vector: n must be >= 1");
    if (!(spacing_ratio > 0))
        throw std::invalid_argument("steering_vector: spacing_ratio must be > 0");
    const double phase_step = 2.0 * M_PI * spacing_ratio * std::sin(theta);
    CVector a(n);
    for (int p = 0; p < n; ++p) a[p] = std::polar(1.0, phase_step * p);
    return a;
}

CMatrix transmit_covariance(const RadarScene& scene, int n_t, double spacing_ratio) {
    scene.validate();
    CMatrix r = CMatrix::Zero(n_t, n_t);
    for (int k = 0; k < scene.target_count(); ++k) {
        const CVector a = steering_vector(scene.angles[k], n_t, spacing_ratio);
        r.noalias() += scene.powers[k] * (a * a.adjoint());
    }
    return r;
}

CMatrix target_response(const RadarScene& scene, const CVector& alphas, int n_t, int n_r,
                        double spacing_ratio) {
    scene.validate();
    if (alphas.size() != scene.target_count())
        throw std::invalid_argument("target_response: alphas length must equal target count");
    CMatrix g = CMatrix::Zero(n_r, n_t);
    for (int k = 0; k < scene.target_count(); ++k) {
        const CVector a = steering_vector(scene.angles[k], n_r, spacing_ratio);
        const CVector b = steering_vector(scene.angles[k], n_t, spacing_ratio);
        g.noalias() += alphas[k] * (a * b.adjoint());
    }
    return g;
}

ChannelMatrix generate_channel(std::uint64_t seed, int n_t, int m, double variance) {
    if (n_t < 1 || m < 1) throw std::invalid_argument("generate_channel: bad shape");
    if (!(variance > 0)) throw std::invalid_argument("generate_channel: variance must be > 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
    CMatrix h(n_t, m);
    // Column-major fill so the draw order is part of the determinism contract.
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n_t; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            h(i, j) = Complex(re, im);
        }
    return ChannelMatrix{std::move(h)};
}

ReliabilityVector load_reliability(const std::string& source) {
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("load_reliability: parse failure: ") + e.what());
    }
    if (!parsed.is_array())
        throw std::invalid_argument("load_reliability: source must be a flat list of reals");
    if (parsed.empty()) throw std::invalid_argument("load_reliability: empty list");
    RVector beta(parsed.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        if (!parsed[i].is_number())
            throw std::invalid_argument("load_reliability: non-numeric entry at index " +
                                        std::to_string(i));
        beta[static_cast<int>(i)] = parsed[i].get<double>();
    }
    ReliabilityVector out{std::move(beta)};
    out.validate();
    return out;
}

ProblemInstance ProblemInstance::build(SystemConfig config, RadarScene scene,
                                       ChannelMatrix channel, ReliabilityVector reliability) {
    config.validate();
    scene.validate();
    reliability.validate();
    if (scene.target_count() != config.k)
        throw std::invalid_argument("ProblemInstance: scene target count must equal config.k");
    if (channel.h.rows() != config.n_t || channel.h.cols() != config.m)
        throw std::invalid_argument("ProblemInstance: channel must be n_t x m");
    if (!channel.h.allFinite())
        throw std::invalid_argument("ProblemInstance: channel entries must be finite");
    if (reliability.beta.size() != config.n_t)
        throw std::invalid_argument("ProblemInstance: reliability must have length n_t");

    CMatrix r = transmit_covariance(scene, config.n_t, config.spacing_ratio);
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::runtime_error("ProblemInstance: radar covariance is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(r, Eigen::EigenvaluesOnly);
    const double trace = r.trace().real();
    if (eig.eigenvalues().minCoeff() < -1e-10 * std::max(trace, 1.0))
        throw std::runtime_error("ProblemInstance: radar covariance is not PSD");

    return ProblemInstance{std::move(config), std::move(scene), std::move(channel),
                           std::move(reliability), std::move(r)};
}

}  // namespace selbeam
