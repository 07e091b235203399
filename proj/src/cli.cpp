// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "selbeam/harness.hpp"

namespace selbeam {

namespace {

namespace fs = std::filesystem;

ExperimentConfig resolve_config(const std::string& config_path,
                                const std::optional<std::uint64_t>& seed,
                                const std::optional<std::string>& out_dir) {
    ExperimentConfig cfg =
        config_path.empty() ? default_experiment_config() : load_config(config_path);
    if (seed) cfg.seeds = {*seed};
    if (out_dir) cfg.output_dir = *out_dir;
    return cfg;
}

void print_metrics(const MetricsRow& r, const std::string& status) {
    std::cout << "rho_s=" << r.rho_s << " avg_se_bpshz=" << r.avg_se
              << " avg_rate_bps=" << r.avg_rate << " rl_pct=" << r.reliability_pct
              << " mui_nats=" << r.mui << " dens_pct=" << r.density_pct
              << " power_w=" << r.power_w << " status=" << status << '\n';
}

int run_solve(const ExperimentConfig& cfg) {
    const std::uint64_t seed = cfg.seeds.front();
    SystemConfig sys = cfg.system;
    ChannelMatrix channel = generate_channel(seed, sys.n_t, sys.m, cfg.channel_variance);
    ProblemInstance instance =
        ProblemInstance::build(sys, cfg.scene, std::move(channel), cfg.reliability);
    SolveResult result = gpgda_solve(instance, cfg.solver);

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    export_heatmap(result.w.w, dir / heatmap_filename(sys.rho_s, seed));
    export_weights(result.w.w, dir / ("weights_complex_rho_" + std::to_string(sys.rho_s) +
                                      "_seed_" + std::to_string(seed) + ".csv"));
    export_trace(result.trace, dir / ("trace_rho_" + std::to_string(sys.rho_s) + "_seed_" +
                                      std::to_string(seed) + ".csv"));

    print_metrics(summarize(instance, result.w.w, sys.rho_s, cfg.aggregation),
                  to_string(result.trace.status));
    return 0;
}

int run_sweep_cmd(const ExperimentConfig& cfg) {
    SweepResult result = run_sweep(cfg);
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    export_table(result, dir / "sweep_table.csv");
    for (const SweepSolution& sol : result.solutions)
        export_heatmap(sol.w.w, dir / heatmap_filename(sol.rho_s, sol.seed));
    std::cout << "wrote " << (dir / "sweep_table.csv").string() << " and "
              << result.solutions.size() << " heatmaps\n";
    return 0;
}

int run_report(const ExperimentConfig& cfg, const std::string& weights_path) {
    const std::uint64_t seed = cfg.seeds.front();
    SystemConfig sys = cfg.system;
    ChannelMatrix channel = generate_channel(seed, sys.n_t, sys.m, cfg.channel_variance);
    ProblemInstance instance =
        ProblemInstance::build(sys, cfg.scene, std::move(channel), cfg.reliability);
    CMatrix w = read_weights(weights_path);
    if (w.rows() != sys.n_t || w.cols() != sys.m)
        throw std::invalid_argument("report: saved weights do not match the configured shape");
    print_metrics(summarize(instance, w, sys.rho_s, cfg.aggregation), "reported");
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Antenna-health-aware selective beamforming (GPGDA)"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::string weights_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON experiment config file");
        cmd->add_option("--seed", seed, "override: use this single channel seed");
        cmd->add_option("--out", out_dir, "override: output directory");
    };

    CLI::App* solve = app.add_subcommand("solve", "run one instance, write heatmap and trace");
    add_common(solve);
    CLI::App* sweep = app.add_subcommand("sweep", "run the rho_s sweep, write the summary table");
    add_common(sweep);
    CLI::App* report = app.add_subcommand("report", "recompute metrics from saved weights");
    add_common(report);
    report->add_option("--weights", weights_path, "complex weights CSV written by solve")
        ->required();
    CLI::App* validate = app.add_subcommand("validate", "check a config and exit");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const ExperimentConfig cfg = resolve_config(config_path, seed, out_dir);
        if (solve->parsed()) return run_solve(cfg);
        if (sweep->parsed()) return run_sweep_cmd(cfg);
        if (report->parsed()) return run_report(cfg, weights_path);
        if (validate->parsed()) {
            std::cout << "config ok\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace selbeam
