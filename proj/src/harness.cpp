// SPDX-License-Identifier: Apache-2.0

#include "selbeam/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace selbeam {

namespace {

using nlohmann::json;

std::string fmt_g(double v, int sig = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
    return buf;
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                         const std::string& location) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " + location);
    }
}

template <typename T>
void get_scalar(const json& obj, const std::string& key, T& out, const char* type_name,
                const std::string& location) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument("config: key \"" + key + "\" in " + location +
                                    " must be of type " + type_name);
    }
}

RVector get_real_vector(const json& obj, const std::string& key, const std::string& location) {
    const json& arr = obj.at(key);
    if (!arr.is_array())
        throw std::invalid_argument("config: key \"" + key + "\" in " + location +
                                    " must be a list of numbers");
    RVector out(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw std::invalid_argument("config: key \"" + key + "\" in " + location +
                                        " must be a list of numbers");
        out[static_cast<int>(i)] = arr[i].get<double>();
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

}  // namespace

void ExperimentConfig::validate() const {
    system.validate();
    scene.validate();
    reliability.validate();
    if (scene.target_count() != system.k)
        throw std::invalid_argument("config: scene target count must equal system.k");
    if (reliability.beta.size() != system.n_t)
        throw std::invalid_argument("config: reliability length must equal system.n_t");
    if (rho_s_grid.empty()) throw std::invalid_argument("config: rho_s_grid must be nonempty");
    for (std::size_t i = 0; i < rho_s_grid.size(); ++i) {
        if (!(rho_s_grid[i] >= 0))
            throw std::invalid_argument("config: rho_s_grid entries must be >= 0");
        if (i > 0 && !(rho_s_grid[i] > rho_s_grid[i - 1]))
            throw std::invalid_argument("config: rho_s_grid must be strictly ascending");
    }
    if (seeds.empty()) throw std::invalid_argument("config: seeds must be nonempty");
    if (!(channel_variance > 0))
        throw std::invalid_argument("config: channel_variance must be > 0");
    solver.validate();
}

ReliabilityVector default_reliability(int n_t) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> degraded(0.2, 0.9);
    RVector beta(n_t);
    for (int i = 0; i < n_t; ++i) beta[i] = (i % 3 == 0) ? 1.0 : degraded(rng);
    return ReliabilityVector{std::move(beta)};
}

ExperimentConfig default_experiment_config() {
    ExperimentConfig cfg;
    cfg.scene.angles = RVector::Zero(1);
    cfg.scene.powers = RVector::Ones(1);
    cfg.reliability = default_reliability(cfg.system.n_t);
    return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: parse failure: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");

    reject_unknown_keys(root,
                        {"system", "scene", "reliability", "reliability_file", "rho_s_grid",
                         "seeds", "channel_variance", "solver", "output_dir", "aggregation"},
                        "top level");

    ExperimentConfig cfg;

    if (root.contains("system")) {
        const json& sys = root.at("system");
        if (!sys.is_object()) throw std::invalid_argument("config: \"system\" must be an object");
        reject_unknown_keys(sys,
                            {"n_t", "n_r", "m", "k", "sigma_r2", "sigma_c2", "rho_r", "rho_s",
                             "eta_pa", "p_a", "p_tot", "r_min", "bandwidths", "spacing_ratio"},
                            "system");
        get_scalar(sys, "n_t", cfg.system.n_t, "integer", "system");
        get_scalar(sys, "n_r", cfg.system.n_r, "integer", "system");
        get_scalar(sys, "m", cfg.system.m, "integer", "system");
        get_scalar(sys, "k", cfg.system.k, "integer", "system");
        get_scalar(sys, "sigma_r2", cfg.system.sigma_r2, "number", "system");
        get_scalar(sys, "sigma_c2", cfg.system.sigma_c2, "number", "system");
        get_scalar(sys, "rho_r", cfg.system.rho_r, "number", "system");
        get_scalar(sys, "rho_s", cfg.system.rho_s, "number", "system");
        get_scalar(sys, "eta_pa", cfg.system.eta_pa, "number", "system");
        get_scalar(sys, "p_a", cfg.system.p_a, "number", "system");
        get_scalar(sys, "p_tot", cfg.system.p_tot, "number", "system");
        get_scalar(sys, "spacing_ratio", cfg.system.spacing_ratio, "number", "system");
        if (sys.contains("r_min")) cfg.system.r_min = get_real_vector(sys, "r_min", "system");
        if (sys.contains("bandwidths"))
            cfg.system.bandwidths = get_real_vector(sys, "bandwidths", "system");
    }
    // Rate floors and bandwidths default to the four-user setup; other user
    // counts need explicit values or fall back to neutral ones.
    if (cfg.system.m != 4) {
        if (cfg.system.r_min.size() == 4 && !root.value("system", json::object()).contains("r_min"))
            cfg.system.r_min = RVector::Zero(cfg.system.m);
        if (cfg.system.bandwidths.size() == 4 &&
            !root.value("system", json::object()).contains("bandwidths"))
            cfg.system.bandwidths = RVector::Constant(cfg.system.m, 1e9);
    }

    if (root.contains("scene")) {
        const json& scene = root.at("scene");
        if (!scene.is_object()) throw std::invalid_argument("config: \"scene\" must be an object");
        reject_unknown_keys(scene, {"angles", "powers"}, "scene");
        if (scene.contains("angles")) cfg.scene.angles = get_real_vector(scene, "angles", "scene");
        if (scene.contains("powers")) cfg.scene.powers = get_real_vector(scene, "powers", "scene");
    } else {
        // Default scene: one broadside unit-power target (or empty for k = 0).
        cfg.scene.angles = RVector::Zero(cfg.system.k == 0 ? 0 : 1);
        cfg.scene.powers = RVector::Ones(cfg.system.k == 0 ? 0 : 1);
        if (cfg.system.k > 1)
            throw std::invalid_argument("config: scene required when system.k > 1");
    }

    if (root.contains("reliability") && root.contains("reliability_file"))
        throw std::invalid_argument(
            "config: give either \"reliability\" or \"reliability_file\", not both");
    if (root.contains("reliability")) {
        cfg.reliability = load_reliability(root.at("reliability").dump());
    } else if (root.contains("reliability_file")) {
        if (!root.at("reliability_file").is_string())
            throw std::invalid_argument("config: \"reliability_file\" must be a string path");
        const std::string path = root.at("reliability_file").get<std::string>();
        std::ifstream in = open_input(path);
        std::stringstream buf;
        buf << in.rdbuf();
        cfg.reliability = load_reliability(buf.str());
    } else {
        cfg.reliability = default_reliability(cfg.system.n_t);
    }

    if (root.contains("rho_s_grid")) {
        const RVector grid = get_real_vector(root, "rho_s_grid", "top level");
        cfg.rho_s_grid.assign(grid.data(), grid.data() + grid.size());
    }
    if (root.contains("seeds")) {
        const json& arr = root.at("seeds");
        if (!arr.is_array())
            throw std::invalid_argument("config: \"seeds\" must be a list of integers");
        cfg.seeds.clear();
        for (const auto& s : arr) {
            if (!s.is_number_unsigned() && !s.is_number_integer())
                throw std::invalid_argument("config: \"seeds\" must be a list of integers");
            cfg.seeds.push_back(s.get<std::uint64_t>());
        }
    }
    get_scalar(root, "channel_variance", cfg.channel_variance, "number", "top level");

    if (root.contains("solver")) {
        const json& sol = root.at("solver");
        if (!sol.is_object()) throw std::invalid_argument("config: \"solver\" must be an object");
        reject_unknown_keys(sol,
                            {"step_primal", "step_dual", "step_decay", "decay_start", "max_iters",
                             "tol_primal", "tol_constraint", "init_scheme", "seed"},
                            "solver");
        get_scalar(sol, "step_primal", cfg.solver.step_primal, "number", "solver");
        get_scalar(sol, "step_dual", cfg.solver.step_dual, "number", "solver");
        get_scalar(sol, "step_decay", cfg.solver.step_decay, "number", "solver");
        get_scalar(sol, "decay_start", cfg.solver.decay_start, "integer", "solver");
        get_scalar(sol, "max_iters", cfg.solver.max_iters, "integer", "solver");
        get_scalar(sol, "tol_primal", cfg.solver.tol_primal, "number", "solver");
        get_scalar(sol, "tol_constraint", cfg.solver.tol_constraint, "number", "solver");
        get_scalar(sol, "seed", cfg.solver.seed, "integer", "solver");
        if (sol.contains("init_scheme")) {
            std::string scheme;
            get_scalar(sol, "init_scheme", scheme, "string", "solver");
            if (scheme == "matched-filter")
                cfg.solver.init_scheme = InitScheme::kMatchedFilter;
            else if (scheme == "seeded-random")
                cfg.solver.init_scheme = InitScheme::kSeededRandom;
            else
                throw std::invalid_argument(
                    "config: \"init_scheme\" must be \"matched-filter\" or \"seeded-random\"");
        }
    }

    get_scalar(root, "output_dir", cfg.output_dir, "string", "top level");
    if (root.contains("aggregation")) {
        std::string agg;
        get_scalar(root, "aggregation", agg, "string", "top level");
        if (agg == "mean")
            cfg.aggregation = RateAggregation::kMean;
        else if (agg == "sum")
            cfg.aggregation = RateAggregation::kSum;
        else
            throw std::invalid_argument("config: \"aggregation\" must be \"mean\" or \"sum\"");
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SweepResult run_sweep(const ExperimentConfig& config) {
    config.validate();
    std::vector<std::uint64_t> seeds = config.seeds;
    std::sort(seeds.begin(), seeds.end());

    SweepResult result;
    for (double rho_s : config.rho_s_grid) {
        SystemConfig sys = config.system;
        sys.rho_s = rho_s;

        MetricsRow mean_row;
        mean_row.rho_s = rho_s;
        std::string mean_status;
        bool mixed = false;

        for (std::uint64_t seed : seeds) {
            ChannelMatrix channel =
                generate_channel(seed, sys.n_t, sys.m, config.channel_variance);
            ProblemInstance instance =
                ProblemInstance::build(sys, config.scene, std::move(channel), config.reliability);
            SolveResult solve = gpgda_solve(instance, config.solver);
            MetricsRow metrics =
                summarize(instance, solve.w.w, rho_s, config.aggregation);
            const std::string status = to_string(solve.trace.status);

            mean_row.avg_se += metrics.avg_se;
            mean_row.avg_rate += metrics.avg_rate;
            mean_row.reliability_pct += metrics.reliability_pct;
            mean_row.mui += metrics.mui;
            mean_row.density_pct += metrics.density_pct;
            mean_row.power_w += metrics.power_w;
            if (mean_status.empty())
                mean_status = status;
            else if (mean_status != status)
                mixed = true;

            result.rows.push_back(SweepRow{metrics, std::to_string(seed), status});
            result.solutions.push_back(SweepSolution{rho_s, seed, std::move(solve.w)});
        }

        const double n = static_cast<double>(seeds.size());
        mean_row.avg_se /= n;
        mean_row.avg_rate /= n;
        mean_row.reliability_pct /= n;
        mean_row.mui /= n;
        mean_row.density_pct /= n;
        mean_row.power_w /= n;
        result.rows.push_back(SweepRow{mean_row, "mean", mixed ? "mixed" : mean_status});
    }
    return result;
}

void export_table(const SweepResult& result, const std::filesystem::path& path) {
    if (result.rows.empty()) throw std::invalid_argument("export_table: empty result");
    std::ofstream out = open_output(path);
    out << "rho_s,avg_se_bpshz,avg_rate_bps,rl_pct,mui_nats,dens_pct,power_w,status,seed\n";
    for (const SweepRow& row : result.rows) {
        const MetricsRow& r = row.metrics;
        out << fmt_g(r.rho_s) << ',' << fmt_g(r.avg_se) << ',' << fmt_g(r.avg_rate) << ','
            << fmt_g(r.reliability_pct) << ',' << fmt_g(r.mui) << ',' << fmt_g(r.density_pct)
            << ',' << fmt_g(r.power_w) << ',' << row.status << ',' << row.seed_label << '\n';
    }
}

std::vector<SweepRow> read_table(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_table: empty file");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 9) throw std::runtime_error("read_table: malformed row: " + line);
        SweepRow row;
        row.metrics.rho_s = std::stod(fields[0]);
        row.metrics.avg_se = std::stod(fields[1]);
        row.metrics.avg_rate = std::stod(fields[2]);
        row.metrics.reliability_pct = std::stod(fields[3]);
        row.metrics.mui = std::stod(fields[4]);
        row.metrics.density_pct = std::stod(fields[5]);
        row.metrics.power_w = std::stod(fields[6]);
        row.status = fields[7];
        row.seed_label = fields[8];
        rows.push_back(std::move(row));
    }
    return rows;
}

void export_heatmap(const CMatrix& w, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    for (int j = 0; j < w.cols(); ++j) out << 'c' << j << ',';
    out << "row_norm\n";
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < w.cols(); ++j) out << fmt_g(std::abs(w(i, j)), 17) << ',';
        out << fmt_g(w.row(i).norm(), 17) << '\n';
    }
}

Eigen::MatrixXd read_heatmap(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_heatmap: empty file");
    const int cols = static_cast<int>(split_csv_line(line).size());
    std::vector<double> values;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != cols)
            throw std::runtime_error("read_heatmap: malformed row: " + line);
        for (const auto& f : fields) values.push_back(std::stod(f));
        ++rows;
    }
    Eigen::MatrixXd out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out(i, j) = values[static_cast<std::size_t>(i) * cols + j];
    return out;
}

void export_weights(const CMatrix& w, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << w.rows() << ',' << w.cols() << '\n';
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < w.cols(); ++j) {
            out << fmt_g(w(i, j).real(), 17) << ',' << fmt_g(w(i, j).imag(), 17);
            out << (j + 1 < w.cols() ? ',' : '\n');
        }
    }
}

CMatrix read_weights(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_weights: empty file");
    const auto shape = split_csv_line(line);
    if (shape.size() != 2) throw std::runtime_error("read_weights: malformed shape line");
    const int rows = std::stoi(shape[0]);
    const int cols = std::stoi(shape[1]);
    CMatrix w(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("read_weights: truncated file");
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != 2 * cols)
            throw std::runtime_error("read_weights: malformed row: " + line);
        for (int j = 0; j < cols; ++j)
            w(i, j) = Complex(std::stod(fields[2 * j]), std::stod(fields[2 * j + 1]));
    }
    return w;
}

void export_trace(const SolveTrace& trace, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "iter,smooth_lagrangian,objective,power_violation,max_rate_violation,"
           "dens_pct,lambda,max_mu\n";
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const IterationRecord& r = trace.records[i];
        out << i << ',' << fmt_g(r.smooth_lagrangian) << ',' << fmt_g(r.objective) << ','
            << fmt_g(r.power_violation) << ',' << fmt_g(r.max_rate_violation) << ','
            << fmt_g(r.density_pct) << ',' << fmt_g(r.lambda) << ',' << fmt_g(r.max_mu) << '\n';
    }
}

std::string heatmap_filename(double rho_s, std::uint64_t seed) {
    return "weights_rho_" + fmt_g(rho_s) + "_seed_" + std::to_string(seed) + ".csv";
}

}  // namespace selbeam
