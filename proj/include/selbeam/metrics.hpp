// SPDX-License-Identifier: Apache-2.0
//
// Scalar performance quantities: SINR, rates, radar mutual information,
// power-constraint left-hand side, row density and reliability score.

#pragma once

#include "selbeam/model.hpp"

namespace selbeam {

// n_t x m beamformer; columns are per-user beamformers, rows are
// per-antenna weight vectors.
struct BeamformingMatrix {
    CMatrix w;
};

// One summary row: SE in bits/s/Hz, rate in bits/s, MUI in nats,
// power in W, density/reliability in percent.
struct MetricsRow {
    double avg_se = 0.0;
    double avg_rate = 0.0;
    double reliability_pct = 0.0;
    double mui = 0.0;
    double density_pct = 0.0;
    double power_w = 0.0;
    double rho_s = 0.0;
};

enum class RateAggregation { kMean, kSum };

inline constexpr double kActivityEpsilonRel = 1e-6;

// SINR of user m_idx: |h_m^H w_m|^2 / (sum_{j != m} |h_m^H w_j|^2 + sigma_c^2).
double sinr(const ProblemInstance& instance, const CMatrix& w, int m_idx);

// Spectral efficiency log2(1 + gamma) in bits/s/Hz.
double user_rate(double gamma);

// ln det(I + sigma_r^-2 R W W^H) in nats, via a Cholesky factorization of
// the Hermitian form I + sigma_r^-2 R^{1/2} W W^H R^{1/2}.
double radar_mutual_information(const CMatrix& r, const CMatrix& w, double sigma_r2);

// Power-constraint left-hand side: ||W||_F^2 / eta_pa + p_a * sum_i ||w_i^r||_2.
double power_lhs(const CMatrix& w, double eta_pa, double p_a);

// Percent of rows whose norm exceeds epsilon_rel times the max row norm.
// All-zero W reports 0.
double row_density(const CMatrix& w, double epsilon_rel = kActivityEpsilonRel);

// Mean reliability over active rows, in percent; 100 when no row is active.
double reliability_score(const CMatrix& w, const RVector& beta,
                         double epsilon_rel = kActivityEpsilonRel);

MetricsRow summarize(const ProblemInstance& instance, const CMatrix& w, double rho_s,
                     RateAggregation aggregation = RateAggregation::kMean);

}  // namespace selbeam
