// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: config ingestion, rho_s sweeps, summary-table
// reporting, weight export and re-parsing.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "selbeam/metrics.hpp"
#include "selbeam/model.hpp"
#include "selbeam/solver.hpp"

namespace selbeam {

struct ExperimentConfig {
    SystemConfig system;
    RadarScene scene;
    ReliabilityVector reliability;
    std::vector<double> rho_s_grid = {0.0, 0.0008, 0.0015, 0.0023, 0.0031, 0.0038, 0.0061, 0.0767};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    double channel_variance = 1.0;
    SolverOptions solver;
    std::string output_dir = ".";
    RateAggregation aggregation = RateAggregation::kMean;

    void validate() const;
};

// Default scenario: 10-element array, 4 users, one broadside unit-power
// target, reliability profile with 4 healthy elements.
ExperimentConfig default_experiment_config();

// Reliability profile used when the config gives none: entries at indices
// 0, 3, 6, ... are 1.0, the rest drawn in [0.2, 0.9] from a fixed seed.
ReliabilityVector default_reliability(int n_t);

// Parses and fully validates a JSON config; unknown keys are rejected with
// an error naming the key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// One table row: per-seed or seed-averaged (seed_label == "mean").
struct SweepRow {
    MetricsRow metrics;
    std::string seed_label;
    std::string status;
};

struct SweepSolution {
    double rho_s = 0.0;
    std::uint64_t seed = 0;
    BeamformingMatrix w;
};

struct SweepResult {
    std::vector<SweepRow> rows;          // ordered by (rho_s, seed), mean row last per rho_s
    std::vector<SweepSolution> solutions;
};

// Runs gpgda_solve for every (rho_s, seed) cell; deterministic for a fixed
// config. A diverged solve produces a flagged row, not an abort.
SweepResult run_sweep(const ExperimentConfig& config);

// CSV with header rho_s,avg_se_bpshz,avg_rate_bps,rl_pct,mui_nats,dens_pct,
// power_w,status,seed; floats at 6 significant digits.
void export_table(const SweepResult& result, const std::filesystem::path& path);
std::vector<SweepRow> read_table(const std::filesystem::path& path);

// Entrywise |W| magnitudes plus a sidecar column of row norms.
void export_heatmap(const CMatrix& w, const std::filesystem::path& path);
Eigen::MatrixXd read_heatmap(const std::filesystem::path& path);  // includes row_norm column

// Full complex weights (re/im pairs), precise enough to recompute metrics.
void export_weights(const CMatrix& w, const std::filesystem::path& path);
CMatrix read_weights(const std::filesystem::path& path);

void export_trace(const SolveTrace& trace, const std::filesystem::path& path);

std::string heatmap_filename(double rho_s, std::uint64_t seed);

int cli_main(int argc, const char* const* argv);

}  // namespace selbeam
