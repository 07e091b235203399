// SPDX-License-Identifier: Apache-2.0
//
// Group Proximal-Gradient Dual Ascent: smooth-Lagrangian gradient ascent on
// the beamformer, per-row group soft-thresholding, projected dual ascent on
// the power and rate multipliers.

#pragma once

#include <cstdint>
#include <vector>

#include "selbeam/metrics.hpp"
#include "selbeam/model.hpp"

namespace selbeam {

// Nonnegative multipliers for the power budget and the per-user rate floors.
struct DualState {
    double lambda = 0.0;
    RVector mu;
};

enum class InitScheme { kMatchedFilter, kSeededRandom };

struct SolverOptions {
    double step_primal = 0.1;      // eta_w
    double step_dual = 1e-2;       // alpha
    // Fixed-step gradient-descent-ascent limit-cycles around the power
    // boundary; after decay_start iterations both steps shrink by step_decay
    // per iteration so the cycle damps out (step_decay = 1 keeps them fixed).
    double step_decay = 0.998;
    int decay_start = 5000;
    int max_iters = 10000;
    double tol_primal = 1e-6;      // relative Frobenius change of W
    double tol_constraint = 1e-4;  // absolute constraint violation (nats / W)
    InitScheme init_scheme = InitScheme::kMatchedFilter;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class SolveStatus { kConverged, kMaxIters, kDiverged };

const char* to_string(SolveStatus status);

struct IterationRecord {
    double smooth_lagrangian = 0.0;  // radar + mu-weighted rates - lambda-weighted quad power
    double objective = 0.0;          // problem value: rho_r*MUI - rho_s*sum (1-beta_i)||w_i^r||
    double power_violation = 0.0;    // (power_lhs - p_tot)_+
    double max_rate_violation = 0.0; // max_j (r_min_j - rate_j)_+ in nats
    double density_pct = 0.0;
    double lambda = 0.0;
    double max_mu = 0.0;
};

struct SolveTrace {
    std::vector<IterationRecord> records;
    SolveStatus status = SolveStatus::kMaxIters;
};

struct SolveResult {
    BeamformingMatrix w;
    DualState duals;
    SolveTrace trace;
};

// Conjugate (Wirtinger) gradient of rho_r * ln det(I + sigma_r^-2 R W W^H):
// rho_r * sigma_r^-2 * (I + sigma_r^-2 R W W^H)^-1 R W.
CMatrix grad_radar(const CMatrix& w, const CMatrix& r, double sigma_r2, double rho_r);

// Conjugate gradient of sum_j mu_j ln(1 + gamma_j); the interference
// contribution for i != m enters with a negative sign.
CMatrix grad_comm(const CMatrix& w, const ProblemInstance& instance, const RVector& mu);

// Conjugate gradient of lambda * ||W||_F^2 / eta_pa, i.e. (lambda/eta_pa) W.
// The caller subtracts this from the ascent direction.
CMatrix grad_power_smooth(const CMatrix& w, double lambda, double eta_pa);

// Group soft-thresholding: max(1 - threshold/||v||_2, 0) * v.
Eigen::RowVectorXcd prox_row(const Eigen::RowVectorXcd& v, double threshold);

// One gradient ascent step on the smooth Lagrangian followed by per-row
// shrinkage with threshold eta_w * (rho_s (1 - beta_i) + lambda p_a).
CMatrix primal_step(const CMatrix& w, const ProblemInstance& instance, const DualState& duals,
                    const SolverOptions& options);

// max(0, lambda + alpha * (power_lhs - p_tot)).
double dual_update_lambda(double lambda, double step_dual, double power_lhs_value, double p_tot);

// max(0, mu_j + alpha * (r_min_j - rate_j)), all in nats.
double dual_update_mu(double mu_j, double step_dual, double r_min_j_nats, double rate_j_nats);

SolveResult gpgda_solve(const ProblemInstance& instance, const SolverOptions& options);

}  // namespace selbeam
