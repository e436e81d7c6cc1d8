#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "facets/contours.hpp"
#include "facets/io.hpp"
#include "facets/metrics.hpp"
#include "facets/stack.hpp"
#include "facets/wulff.hpp"

namespace facets::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'");
    }
}

const json& section(const json& j, const char* key) {
    static const json empty = json::object();
    if (!j.contains(key)) return empty;
    if (!j.at(key).is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
    return j.at(key);
}

template <class F>
auto as_config(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Config, version and hash go next to every output set.
std::string archive(const ExperimentConfig& config, const fs::path& dir) {
    const std::string text = dump(config.raw);
    write_text(dir / "config.json", text);
    write_text(dir / "VERSION", std::string(kVersion) + "\n");
    return hex64(fnv1a(text));
}

double quantile(std::vector<double> xs, double q) {
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

json quantiles(const std::vector<double>& xs) {
    if (xs.empty()) return json::object();
    return {{"count", xs.size()},
            {"q10", quantile(xs, 0.1)},
            {"q25", quantile(xs, 0.25)},
            {"median", quantile(xs, 0.5)},
            {"q75", quantile(xs, 0.75)},
            {"q90", quantile(xs, 0.9)}};
}

std::optional<int> env_int(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    try {
        return std::stoi(v);
    } catch (const std::exception&) {
        throw ConfigError(std::string(name) + " is not an integer");
    }
}

// Units shared by phase and simulate.
struct Scales {
    WulffGeometry geometry;
    double tau_e = 1.0;
    double Delta = 1.0;
    double D = 1.0;
    double sigma = 1.0;
};

Scales scales(const ExperimentConfig& config, std::optional<double> sigma_override) {
    Scales s{build_wulff(config.norm(), config.facet_count)};
    s.tau_e = s.geometry.norm.axis_scale();
    if (sigma_override) {
        if (!(*sigma_override > 0.0)) throw ConfigError("sigma must be positive");
        s.sigma = *sigma_override;
        s.Delta = config.model ? config.model->Delta() : 1.0;
        s.D = s.sigma / s.tau_e;
    } else {
        if (!config.model) throw ConfigError("a 'model' section (or phase.sigma) is required");
        s.Delta = config.model->Delta();
        s.D = config.model->D();
        s.sigma = s.D * s.tau_e;
    }
    return s;
}

}  // namespace

Norm ExperimentConfig::norm() const { return make_norm(norm_family, norm_params); }

std::vector<double> parse_sweep(const json& spec) {
    std::vector<double> out;
    if (spec.is_number()) return {spec.get<double>()};
    if (spec.is_array()) {
        for (const auto& v : spec) {
            if (!v.is_number()) throw ConfigError("sweep lists must hold numbers");
            out.push_back(v.get<double>());
        }
        return out;
    }
    if (!spec.is_object()) throw ConfigError("a sweep is a number, a list, or {start, stop, count}");
    const double start = get_or(spec, "start", 0.0);
    const double stop = get_or(spec, "stop", start);
    const int count = get_or(spec, "count", 0);
    if (count < 0) throw ConfigError("sweep count must be >= 0");
    for (int k = 0; k < count; ++k) out.push_back(count == 1 ? start : start + (stop - start) * k / (count - 1));
    return out;
}

ExperimentConfig load_config(const json& file, const Overrides& overrides) {
    if (!file.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    c.raw = file;

    if (file.contains("model")) {
        const json& m = section(file, "model");
        ModelParams p;
        p.N = get_or(m, "N", p.N);
        p.beta = get_or(m, "beta", p.beta);
        p.p_v = get_or(m, "p_v", p.p_v);
        p.p_s = get_or(m, "p_s", p.p_s);
        p.A = get_or(m, "A", p.A);
        p.epsilon = get_or(m, "epsilon", p.epsilon);
        as_config([&] {
            p.validate();
            return 0;
        });
        c.model = p;
    }

    const json& n = section(file, "norm");
    c.norm_family = get_or<std::string>(n, "family", "euclidean");
    c.facet_count = get_or(n, "facets", kDefaultFacetCount);
    if (c.facet_count < 8) throw ConfigError("norm.facets must be >= 8");
    const std::optional<double> model_beta = c.model ? std::optional<double>(c.model->beta) : std::nullopt;
    c.norm_params.beta = get_or(n, "beta", model_beta.value_or(0.0));
    if (n.contains("table")) {
        for (const auto& row : n.at("table")) {
            if (!row.is_array() || row.size() != 2) throw ConfigError("norm.table rows are [theta, value]");
            c.norm_params.table.push_back({row[0].get<double>(), row[1].get<double>()});
        }
    }
    if (n.contains("table_file")) {
        std::ifstream in(get_or<std::string>(n, "table_file", ""));
        if (!in) throw ConfigError("cannot read norm.table_file");
        c.norm_params.table = as_config([&] { return read_norm_table(in); });
    }
    as_config([&] { return c.norm(); });

    c.l_max = get_or(file, "l_max", kDefaultMaxLayers);
    if (c.l_max < 1) throw ConfigError("l_max must be >= 1");

    c.out = get_or<std::string>(file, "out", c.out.string());
    if (const char* env = std::getenv("FACETS_OUT"); env && *env) c.out = env;
    if (overrides.out) c.out = *overrides.out;

    c.workers = get_or(file, "workers", 1);
    if (auto w = env_int("FACETS_WORKERS")) c.workers = *w;
    if (overrides.workers) c.workers = *overrides.workers;
    if (c.workers < 1) throw ConfigError("workers must be >= 1");

    c.seed = get_or<std::uint64_t>(file, "seed", 1);
    if (overrides.seed) c.seed = *overrides.seed;

    // output location and thread count do not change results, so they stay out of the hash
    c.raw.erase("out");
    c.raw.erase("workers");
    c.raw["seed"] = c.seed;
    return c;
}

ExperimentConfig load_config_file(const fs::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return load_config(j, overrides);
}

// ---------------------------------------------------------------- phase

int cmd_phase(const ExperimentConfig& config) {
    const json& ph = section(config.raw, "phase");
    std::optional<double> sigma_override;
    if (ph.contains("sigma")) sigma_override = get_or(ph, "sigma", 1.0);
    if (ph.contains("v") == ph.contains("A")) throw ConfigError("phase needs exactly one of 'v' or 'A' sweeps");
    const bool over_A = ph.contains("A");
    const std::vector<double> values = parse_sweep(ph.at(over_A ? "A" : "v"));
    for (const double x : values) {
        if (!std::isfinite(x) || x < 0.0) throw ConfigError("sweep values must be finite and >= 0");
    }
    const Scales s = scales(config, sigma_override);
    const RescaledProblem problem = as_config([&] { return make_problem(s.geometry.w, s.sigma, config.l_max); });

    const PhaseDiagram diagram = full_phase_diagram(problem);
    const std::vector<double> A = a_thresholds_to_A(diagram, s.Delta, s.D, s.tau_e);

    std::vector<VPSolution> rows;
    rows.reserve(values.size());
    for (const double x : values) {
        if (over_A) {
            VPSolution sol = solve_vp_delta(x / s.Delta, s.D, s.geometry, config.l_max);
            rows.push_back(std::move(sol));
        } else {
            rows.push_back(solve_vp_v(x, problem));
        }
    }

    const fs::path dir = config.out;
    fs::create_directories(dir);
    const std::string hash = archive(config, dir);

    std::ostringstream phase_csv;
    write_phase_header(phase_csv);
    for (const auto& r : rows) write_phase_row(phase_csv, r);
    write_text(dir / "phase_diagram.csv", phase_csv.str());

    std::ostringstream thresholds;
    write_thresholds_csv(thresholds, diagram, A);
    write_text(dir / "thresholds.csv", thresholds.str());

    std::ostringstream branches;
    branches << "# v area value, one block per (ell, kind)\n";
    for (int l = 1; l <= config.l_max; ++l) {
        for (const StackKind kind : {StackKind::type2, StackKind::type1}) {
            if (kind == StackKind::type1 && l * problem.w - 4.0 * (l - 1) <= 1e-12) continue;
            branches << "# ell=" << l << " kind=" << to_string(kind) << "\n";
            for (const auto& r : rows) {
                const BranchMinimum b = minimize_over_branch(r.v, problem.w, problem.sigma, l, kind);
                if (std::isfinite(b.value)) branches << r.v << ' ' << b.area << ' ' << b.value << "\n";
            }
            branches << "\n\n";
        }
    }
    write_text(dir / "branches.dat", branches.str());

    std::ostringstream optimal;
    optimal << "# v ell area energy\n";
    for (const auto& r : rows) optimal << r.v << ' ' << r.stack.layers << ' ' << r.stack.area << ' ' << r.total_energy << "\n";
    write_text(dir / "optimal.dat", optimal.str());

    const json summary = {{"version", kVersion},
                          {"config_hash", hash},
                          {"w", problem.w},
                          {"w_perturbed", problem.perturbed},
                          {"sigma", problem.sigma},
                          {"tau_e", s.tau_e},
                          {"Delta", s.Delta},
                          {"D", s.D},
                          {"l_star", diagram.l_star},
                          {"k_star", diagram.k_star},
                          {"A_thresholds", A},
                          {"rows", rows.size()}};
    write_text(dir / "phase_summary.json", dump(summary));
    return 0;
}

// ---------------------------------------------------------------- simulate

namespace {

struct ChainOutcome {
    std::vector<SampleRecord> records;
    std::vector<double> epigraph;
    std::string error;
};

}  // namespace

int cmd_simulate(const ExperimentConfig& config) {
    if (!config.model) throw ConfigError("simulate needs a 'model' section");
    const json& sim = section(config.raw, "simulate");
    const Scales s = scales(config, std::nullopt);

    std::vector<double> A_values;
    if (sim.contains("windows")) {
        const int windows = get_or(sim, "windows", 0);
        if (windows < 1 || windows > config.l_max) throw ConfigError("simulate.windows must lie in [1, l_max]");
        const RescaledProblem problem = as_config([&] { return make_problem(s.geometry.w, s.sigma, config.l_max); });
        const std::vector<double> A = a_thresholds_to_A(full_phase_diagram(problem), s.Delta, s.D, s.tau_e);
        for (int k = 0; k < windows; ++k) A_values.push_back(k == 0 ? A[0] / 2.0 : (A[k - 1] + A[k]) / 2.0);
    } else if (sim.contains("A")) {
        A_values = parse_sweep(sim.at("A"));
    } else {
        A_values = {config.model->A};
    }

    ChainConfig base;
    base.params = *config.model;
    base.sweeps = get_or(sim, "sweeps", base.sweeps);
    base.burn_in = get_or(sim, "burn_in", base.burn_in);
    base.thinning = get_or(sim, "thinning", base.thinning);
    base.seed = config.seed;
    base.tail_mode = as_config([&] { return parse_tail_mode(get_or<std::string>(sim, "tail_mode", "gaussian")); });
    base.proposal_mix = get_or(sim, "proposal_mix", base.proposal_mix);
    base.snapshot_every = get_or(sim, "snapshot_every", base.snapshot_every);
    base.initial_height = get_or(sim, "initial_height", base.initial_height);
    base.ramp_sweeps = get_or(sim, "ramp_sweeps", base.ramp_sweeps);
    const int replicas = get_or(sim, "replicas", 1);
    const bool keep_snapshots = get_or(sim, "write_snapshots", true);
    if (replicas < 1) throw ConfigError("simulate.replicas must be >= 1");
    std::vector<ChainConfig> per_A;
    for (const double a : A_values) {
        ChainConfig c = base;
        c.params.A = a;
        as_config([&] {
            c.validate();
            return 0;
        });
        per_A.push_back(c);
    }

    std::vector<StackPrediction> predictions;
    std::vector<VPSolution> solutions;
    for (const double a : A_values) {
        solutions.push_back(solve_vp_delta(a / s.Delta, s.D, s.geometry, config.l_max));
        predictions.push_back(predict_stack(s.geometry, solutions.back().stack));
    }

    const fs::path dir = config.out;
    fs::create_directories(dir);
    const std::string hash = archive(config, dir);

    const int tasks = static_cast<int>(A_values.size()) * replicas;
    std::vector<ChainOutcome> outcomes(static_cast<std::size_t>(tasks));
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.workers)
    for (int t = 0; t < tasks; ++t) {
        const int ai = t / replicas;
        const int rep = t % replicas;
        const ChainConfig& cc = per_A[static_cast<std::size_t>(ai)];
        ChainOutcome& out = outcomes[static_cast<std::size_t>(t)];
        const fs::path run_dir = dir / "runs" / ("A" + std::to_string(ai)) / ("chain" + std::to_string(rep));
        try {
            fs::create_directories(run_dir);
            const SnapshotSink sink = [&](long sweep, const HeightField& field) {
                if (keep_snapshots) {
                    std::ostringstream text;
                    write_height_field(text, field);
                    char name[32];
                    std::snprintf(name, sizeof name, "sweep_%09ld.csv", sweep);
                    write_text(run_dir / "snapshots" / name, text.str());
                }
                if (sweep <= cc.burn_in) return;
                const LevelFamily observed = LevelFamily::from_loops(large_level_lines(field, cc.params.epsilon));
                out.epigraph.push_back(epigraph_distance(observed, predictions[static_cast<std::size_t>(ai)]).distance);
            };
            out.records = run_chain(cc, static_cast<std::uint64_t>(t), sink);
            std::ostringstream rec;
            write_records_csv(rec, out.records);
            write_text(run_dir / "records.csv", rec.str());
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    }

    json runs = json::array();
    json seeds = json::array();
    bool failed = false;
    for (std::size_t ai = 0; ai < A_values.size(); ++ai) {
        std::map<int, long> histogram;
        std::vector<double> epigraph;
        std::vector<double> taus;
        json errors = json::array();
        long total = 0;
        for (int rep = 0; rep < replicas; ++rep) {
            const int t = static_cast<int>(ai) * replicas + rep;
            const ChainOutcome& o = outcomes[static_cast<std::size_t>(t)];
            seeds.push_back({{"A_index", ai}, {"replica", rep}, {"chain_index", t}, {"seed", config.seed}});
            if (!o.error.empty()) {
                failed = true;
                errors.push_back({{"replica", rep}, {"error", o.error}});
                std::cerr << "chain A" << ai << "/" << rep << " failed: " << o.error << "\n";
                continue;
            }
            std::vector<double> alpha;
            for (const auto& r : o.records) {
                ++histogram[r.n_large];
                ++total;
                alpha.push_back(static_cast<double>(r.alpha));
            }
            taus.push_back(integrated_autocorrelation_time(alpha) * static_cast<double>(per_A[ai].thinning));
            epigraph.insert(epigraph.end(), o.epigraph.begin(), o.epigraph.end());
        }
        json hist = json::object();
        int modal = -1;
        long modal_n = -1;
        for (const auto& [k, n] : histogram) {
            hist[std::to_string(k)] = n;
            if (n > modal_n) {
                modal = k;
                modal_n = n;
            }
        }
        runs.push_back({{"A", A_values[ai]},
                        {"delta", A_values[ai] / s.Delta},
                        {"prediction", stack_to_json(solutions[ai].stack)},
                        {"records", total},
                        {"histogram", hist},
                        {"modal_count", modal},
                        {"modal_frequency", total > 0 ? static_cast<double>(modal_n) / static_cast<double>(total) : 0.0},
                        {"epigraph", quantiles(epigraph)},
                        {"alpha_autocorrelation_sweeps", taus},
                        {"errors", errors}});
    }
    const json summary = {{"version", kVersion}, {"config_hash", hash}, {"base_seed", config.seed}, {"seeds", seeds}, {"runs", runs}};
    write_text(dir / "summary.json", dump(summary));
    return failed ? 2 : 0;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const ExperimentConfig& config) {
    const json& an = section(config.raw, "analyze");
    if (!an.contains("snapshots")) throw ConfigError("analyze.snapshots (a directory) is required");
    const fs::path snap_dir = get_or<std::string>(an, "snapshots", "");
    if (!fs::is_directory(snap_dir)) throw ConfigError("snapshot directory " + snap_dir.string() + " does not exist");
    const double epsilon = get_or(an, "epsilon", config.model ? config.model->epsilon : 0.25);
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");

    const WulffGeometry geometry = build_wulff(config.norm(), config.facet_count);
    Stack stack;
    if (an.contains("prediction")) {
        const json& p = an.at("prediction");
        const std::string kind = get_or<std::string>(p, "kind", "empty");
        const int layers = get_or(p, "layers", 0);
        const double area = get_or(p, "area", 0.0);
        stack = as_config([&] {
            if (kind == "empty") return empty_stack();
            if (kind == "type1") return type1_stack(layers, area, geometry.w);
            if (kind == "type2") return type2_stack(layers, area, geometry.w);
            throw std::invalid_argument("prediction.kind must be empty, type1 or type2");
        });
        if (!stack.finite()) throw ConfigError("prediction area outside the admissible range");
    } else {
        if (!config.model) throw ConfigError("analyze needs analyze.prediction or a 'model' section");
        const double A = get_or(an, "A", config.model->A);
        const Scales s = scales(config, std::nullopt);
        stack = solve_vp_delta(A / s.Delta, s.D, s.geometry, config.l_max).stack;
    }
    const StackPrediction prediction = predict_stack(geometry, stack);

    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(snap_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<json> entries(files.size());
    std::vector<std::string> problems(files.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.workers)
    for (std::size_t k = 0; k < files.size(); ++k) {
        try {
            std::ifstream in(files[k]);
            const HeightField field = read_height_field(in);
            const CurveSet loops = large_level_lines(field, epsilon);
            const EpigraphReport report = epigraph_distance(LevelFamily::from_loops(loops), prediction);
            json entry = epigraph_to_json(report);
            entry["file"] = files[k].filename().string();
            entry["layer_areas"] = areas_by_level(loops);
            entries[k] = std::move(entry);
        } catch (const std::exception& e) {
            problems[k] = e.what();
        }
    }

    json snapshots = json::array();
    json skipped = json::array();
    std::map<int, long> histogram;
    std::vector<double> distances;
    for (std::size_t k = 0; k < files.size(); ++k) {
        if (!problems[k].empty()) {
            std::cerr << "warning: skipping " << files[k].filename().string() << ": " << problems[k] << "\n";
            skipped.push_back({{"file", files[k].filename().string()}, {"error", problems[k]}});
            continue;
        }
        ++histogram[entries[k]["layer_counts"]["observed"].get<int>()];
        distances.push_back(entries[k]["epigraph_distance"].get<double>());
        snapshots.push_back(std::move(entries[k]));
    }
    json hist = json::object();
    for (const auto& [k, n] : histogram) hist[std::to_string(k)] = n;

    const fs::path dir = config.out;
    fs::create_directories(dir);
    const std::string hash = archive(config, dir);
    const json report = {{"version", kVersion},
                         {"config_hash", hash},
                         {"prediction", stack_to_json(stack)},
                         {"snapshots", snapshots},
                         {"skipped", skipped.size()},
                         {"skipped_files", skipped},
                         {"layer_histogram", hist},
                         {"epigraph_quantiles", quantiles(distances)}};
    write_text(dir / "analysis.json", dump(report));
    return 0;
}

// ---------------------------------------------------------------- norm

int cmd_norm(const ExperimentConfig& config) {
    const WulffGeometry geometry = build_wulff(config.norm(), config.facet_count);
    const fs::path dir = config.out;
    fs::create_directories(dir);
    const std::string hash = archive(config, dir);

    std::ostringstream poly;
    write_polygon_csv(poly, geometry.wulff_polygon);
    write_text(dir / "wulff_polygon.csv", poly.str());

    std::ostringstream values;
    values << "# theta tau\n";
    constexpr int kSamples = 720;
    for (int k = 0; k <= kSamples; ++k) {
        const double theta = 2.0 * M_PI * k / kSamples;
        values << theta << ' ' << geometry.norm(theta) << "\n";
    }
    write_text(dir / "norm_values.dat", values.str());

    const json summary = {{"version", kVersion},
                          {"config_hash", hash},
                          {"family", to_string(geometry.norm.family())},
                          {"w", geometry.w},
                          {"axis_scale", geometry.norm.axis_scale()},
                          {"facets", geometry.facet_count},
                          {"triangle_violation", triangle_violation(geometry.norm)}};
    write_text(dir / "norm.json", dump(summary));
    return 0;
}

// ---------------------------------------------------------------- entry

int run(int argc, char** argv) {
    CLI::App app{"Facet formation in the SOS model: variational phase diagrams and Monte Carlo checks"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON experiment config")->required();
    app.add_option("--out", out, "output directory");
    app.add_option("--workers", workers, "worker threads");
    app.add_option("--seed", seed, "base seed");

    auto* phase = app.add_subcommand("phase", "thresholds, phase diagram and branch data");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo chains and summary");
    auto* analyze = app.add_subcommand("analyze", "compare snapshots with a predicted stack");
    auto* norm = app.add_subcommand("norm", "dump a norm's Wulff polygon");
    for (auto* sub : {phase, simulate, analyze, norm}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    ExperimentConfig config;
    try {
        config = load_config_file(config_path, {out, workers, seed});
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    omp_set_num_threads(config.workers);

    try {
        if (phase->parsed()) return cmd_phase(config);
        if (simulate->parsed()) return cmd_simulate(config);
        if (analyze->parsed()) return cmd_analyze(config);
        return cmd_norm(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace facets::cli
