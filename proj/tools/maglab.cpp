// maglab: magnitude of finite metric spaces and of convex polytopes in l1^N.
//
// Exit codes: 0 success, 1 parse/validation error, 2 numerical failure (not
// positive definite, coincident points, or a violated inequality in `check`),
// 3 enumeration cap exceeded.

#include <maglab/approximation.hpp>
#include <maglab/checks.hpp>
#include <maglab/errors.hpp>
#include <maglab/io.hpp>
#include <maglab/l1_geometry.hpp>
#include <maglab/metric_core.hpp>

#include <CLI11.hpp>

#include <cstring>
#include <filesystem>
#include <iostream>

namespace {

using namespace maglab;
using io::json;

enum ExitCode { kOk = 0, kInputError = 1, kNumericalFailure = 2, kCapExceeded = 3 };

void emit(const io::RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty())
        std::cout << text;
    else
        io::write_text(cfg.output, text);
}

/// Tables go to --output as CSV plus a .json twin (or the reverse when the
/// path ends in .json); without --output the CSV is printed.
void emit_table(const io::RunConfig& cfg, const SweepTable& table) {
    const std::string csv = io::to_csv(table);
    const std::string js = io::to_json(table).dump(2) + "\n";
    if (cfg.output.empty()) {
        std::cout << csv;
        return;
    }
    std::filesystem::path out(cfg.output);
    if (out.extension() == ".json") {
        io::write_text(out, js);
        io::write_text(std::filesystem::path(out).replace_extension(".csv"), csv);
    } else {
        io::write_text(out, csv);
        io::write_text(std::filesystem::path(out).replace_extension(".json"), js);
    }
}

const std::string& single_input(const io::RunConfig& cfg) {
    if (cfg.inputs.size() != 1) throw ValidationError("exactly one --input file is required");
    return cfg.inputs.front();
}

IvolOptions ivol_options(const io::RunConfig& cfg) {
    IvolOptions opts;
    opts.cap = cfg.cap;
    opts.threads = cfg.threads;
    opts.seed = cfg.seed;
    opts.monte_carlo = cfg.monte_carlo;
    return opts;
}

int cmd_mag(const io::RunConfig& cfg) {
    std::optional<Metric> metric;
    if (!cfg.metric.empty()) metric = io::parse_metric(cfg.metric);
    auto input = io::read_metric_input(single_input(cfg), metric);
    const FiniteMetricSpace<double> space = std::holds_alternative<PointCloud<double>>(input)
                                                ? subspace_from_cloud(std::get<PointCloud<double>>(input))
                                                : std::get<FiniteMetricSpace<double>>(input);
    const Weighting<double> w = magnitude_finite(space, cfg.pivot_tolerance);
    if (w.condition_warning)
        std::cerr << "warning: ill-conditioned similarity matrix (pivot ratio " << w.pivot_ratio << ")\n";
    emit(cfg, io::to_json(w).dump(2) + "\n");
    return kOk;
}

int cmd_ivol(const io::RunConfig& cfg) {
    const Polytope p = io::read_polytope(single_input(cfg));
    emit(cfg, io::to_json(intrinsic_volumes(p, ivol_options(cfg))).dump(2) + "\n");
    return kOk;
}

int cmd_convex_mag(const io::RunConfig& cfg) {
    const Polytope p = io::read_polytope(single_input(cfg));
    emit(cfg, io::to_json(convex_magnitude_l1(p, ivol_options(cfg))).dump(2) + "\n");
    return kOk;
}

int cmd_sweep(const io::RunConfig& cfg) {
    const Polytope p = io::read_polytope(single_input(cfg));
    SweepOptions opts;
    opts.budget = cfg.budget;
    opts.scheme = parse_scheme(cfg.scheme);
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    opts.ivol = ivol_options(cfg);
    emit_table(cfg, one_point_sweep(p, cfg.t_list, opts));
    return kOk;
}

SequenceSpec load_spec(const std::string& text) {
    std::string path;
    if (text.rfind("file:", 0) == 0)
        path = text.substr(5);
    else if (std::filesystem::exists(text))
        path = text;
    if (path.empty()) return SequenceSpec::parse(text);
    const json doc = io::parse_json(io::read_text(path));
    if (!doc.is_object() || !doc.contains("values") || !doc.at("values").is_array())
        throw ParseError("sequence file needs a \"values\" array");
    return SequenceSpec::explicit_values(doc.at("values").get<std::vector<double>>());
}

int cmd_diverge(const io::RunConfig& cfg, long interior) {
    DivergenceOptions opts;
    opts.interior_samples = interior;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    emit_table(cfg, divergence_experiment(load_spec(cfg.spec), cfg.n_list, opts));
    return kOk;
}

int cmd_check(const io::RunConfig& cfg) {
    SuiteOptions opts;
    opts.polytopes = cfg.polytopes;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    opts.tolerance = cfg.check_tolerance;
    const SuiteReport report = run_inequality_suite(opts);
    emit(cfg, io::to_json(report).dump(2) + "\n");
    if (!report.passed()) {
        std::cerr << report.violations << " inequality violation(s)\n";
        return kNumericalFailure;
    }
    return kOk;
}

/// Loads --config before CLI11 parses, so explicit flags and MAGLAB_*
/// variables override what the file says.
io::RunConfig preload_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--config") == 0) return io::run_config_from_json(io::parse_json(io::read_text(argv[i + 1])));
    return {};
}

} // namespace

int main(int argc, char** argv) {
    io::RunConfig cfg;
    try {
        cfg = preload_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }

    CLI::App app{"Magnitude of finite metric spaces and of convex polytopes in l1^N"};
    app.require_subcommand(1);
    std::string config_path;
    bool dump_config = false;
    long interior = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration (flags override it)");
        sub->add_option("--input", cfg.inputs, "Input file")->envname("MAGLAB_INPUT");
        sub->add_option("--output", cfg.output, "Output file (default: stdout)")->envname("MAGLAB_OUTPUT");
        sub->add_option("--threads", cfg.threads, "Worker threads")->envname("MAGLAB_THREADS")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "Random seed")->envname("MAGLAB_SEED");
        sub->add_flag("--dump-config", dump_config, "Print the effective configuration as JSON and exit");
    };
    auto geometry = [&](CLI::App* sub) {
        sub->add_option("--cap", cfg.cap, "Largest N for exhaustive subset enumeration")->envname("MAGLAB_CAP");
        sub->add_flag("--monte-carlo", cfg.monte_carlo, "Sample coordinate subsets above the cap")
            ->envname("MAGLAB_MONTE_CARLO");
    };

    auto* mag = app.add_subcommand("mag", "Magnitude of a finite metric space (distance matrix or point cloud)");
    common(mag);
    mag->add_option("--metric", cfg.metric, "Metric for point clouds: l1 or l2")->envname("MAGLAB_METRIC");
    mag->add_option("--pivot-tol", cfg.pivot_tolerance, "Cholesky pivot tolerance")->envname("MAGLAB_PIVOT_TOL");

    auto* ivol = app.add_subcommand("ivol", "l1 intrinsic volumes V'_0..V'_N of a polytope");
    common(ivol);
    geometry(ivol);

    auto* cmag = app.add_subcommand("convex-mag", "Magnitude formula sum_k V'_k / 2^k for a polytope");
    common(cmag);
    geometry(cmag);

    auto* sweep = app.add_subcommand("sweep", "One-point sweep: sample / formula / exp bound for tP");
    common(sweep);
    geometry(sweep);
    sweep->add_option("--t-list", cfg.t_list, "Comma-separated scales")->delimiter(',')->envname("MAGLAB_T_LIST");
    sweep->add_option("--budget", cfg.budget, "Sample points per scale")->envname("MAGLAB_BUDGET");
    sweep->add_option("--scheme", cfg.scheme, "vertex_grid | farthest_point | random_hull")->envname("MAGLAB_SCHEME");

    auto* diverge = app.add_subcommand("diverge", "Growth of |X_N| for coordinate simplices");
    common(diverge);
    diverge->add_option("--spec", cfg.spec, "harmonic | power:p | geometric:r | file:<json>")->envname("MAGLAB_SPEC");
    diverge->add_option("--n-list", cfg.n_list, "Comma-separated N values")->delimiter(',')->envname("MAGLAB_N_LIST");
    diverge->add_option("--interior", interior, "Random interior samples added to each vertex set")
        ->envname("MAGLAB_INTERIOR");

    auto* check = app.add_subcommand("check", "Inequality suite over seeded random polytopes");
    common(check);
    check->add_option("--polytopes", cfg.polytopes, "Number of random polytopes")->envname("MAGLAB_POLYTOPES");
    check->add_option("--tolerance", cfg.check_tolerance, "Violation tolerance")->envname("MAGLAB_TOLERANCE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    try {
        cfg.validate();
        if (dump_config) {
            std::cout << io::to_json(cfg).dump(2) << "\n";
            return kOk;
        }
        if (chosen == mag) return cmd_mag(cfg);
        if (chosen == ivol) return cmd_ivol(cfg);
        if (chosen == cmag) return cmd_convex_mag(cfg);
        if (chosen == sweep) return cmd_sweep(cfg);
        if (chosen == diverge) return cmd_diverge(cfg, interior);
        if (chosen == check) return cmd_check(cfg);
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const DuplicatePoints& e) {
        std::cerr << "error: " << e.what() << "; the similarity matrix is singular\n";
        return kNumericalFailure;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
