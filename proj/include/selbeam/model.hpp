// SPDX-License-Identifier: Apache-2.0
//
// Problem data for antenna-health-aware selective beamforming: steering
// vectors, radar covariance, user channels, per-antenna reliability.

#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace selbeam {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Scalar problem parameters. Defaults follow the 28 GHz four-user setup
// with a 100 W budget.
struct SystemConfig {
    int n_t = 10;  // transmit antennas
    int n_r = 10;  // receive antennas (target_response only)
    int m = 4;     // single-antenna users
    int k = 1;     // point targets

    double sigma_r2 = 1.0;  // radar noise power [W]
    double sigma_c2 = 1.0;  // communication noise power [W]
    double rho_r = 0.0148;  // radar objective weight
    double rho_s = 0.0;     // sparsity penalty weight

    double eta_pa = 0.4;   // power-amplifier efficiency, in (0,1]
    double p_a = 5.0;      // per-active-antenna overhead [W]
    double p_tot = 100.0;  // total power budget [W]

    RVector r_min = (RVector(4) << 0.0176, 0.0130, 0.0131, 0.0152).finished();  // [bits/s/Hz]
    RVector bandwidths =
        (RVector(4) << 5.6906e9, 7.6838e9, 7.6128e9, 6.5987e9).finished();  // [Hz]

    double spacing_ratio = 0.5;  // element spacing over wavelength d/lambda

    // Throws std::invalid_argument on any violated bound.
    void validate() const;
};

// Radar scene: K point targets with angles (radians, from broadside) and
// expected linear power strengths.
struct RadarScene {
    RVector angles;
    RVector powers;

    int target_count() const { return static_cast<int>(angles.size()); }
    void validate() const;
};

// H = [h_1, ..., h_M], n_t x m; column j is user j's channel.
struct ChannelMatrix {
    CMatrix h;
};

// Per-antenna health values in [0,1]; 1 is fully operational.
struct ReliabilityVector {
    RVector beta;

    void validate() const;
};

// Fully assembled problem with the precomputed radar covariance.
struct ProblemInstance {
    SystemConfig config;
    RadarScene scene;
    ChannelMatrix channel;
    ReliabilityVector reliability;
    CMatrix radar_covariance;  // Hermitian PSD, n_t x n_t

    // Validates all parts, checks shape consistency and computes the
    // radar covariance.
    static ProblemInstance build(SystemConfig config, RadarScene scene, ChannelMatrix channel,
                                 ReliabilityVector reliability);
};

// Uniform linear array response; entry p is exp(j*2*pi*spacing_ratio*p*sin(theta)).
CVector steering_vector(double theta, int n, double spacing_ratio);

// Transmit-side radar covariance R = sum_k sigma_k^2 a(theta_k) a(theta_k)^H.
// K = 0 yields the zero matrix.
CMatrix transmit_covariance(const RadarScene& scene, int n_t, double spacing_ratio);

// Target response G = sum_k alpha_k a(theta_k) b^H(theta_k), n_r x n_t.
// Model utility; not used by the solver.
CMatrix target_response(const RadarScene& scene, const CVector& alphas, int n_t, int n_r,
                        double spacing_ratio);

// Seeded i.i.d. circularly-symmetric complex Gaussian channel with per-entry
// variance `variance`. Pure function of (seed, n_t, m, variance).
ChannelMatrix generate_channel(std::uint64_t seed, int n_t, int m, double variance);

// Parses a flat list of reals (e.g. "[0.2, 1.0]") into a validated
// reliability vector.
ReliabilityVector load_reliability(const std::string& source);

}  // namespace selbeam
