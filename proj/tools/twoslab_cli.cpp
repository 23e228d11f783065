// Command-line front end: eigenvalues, forward and backward solves, the
// worked examples and the randomized bound checks.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "twoslab/harness.hpp"

namespace {

using namespace twoslab;

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kNumerical = 2;
constexpr int kBoundViolation = 3;

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
};

RunConfig resolve(const Globals& g, const RunConfig& base) {
    RunConfig cfg = g.config_path.empty() ? base : load_config(g.config_path, base);
    if (g.seed) cfg.seed = *g.seed;
    if (!g.out.empty()) cfg.output_dir = g.out;
    cfg.validate();
    return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

int report_bounds(const std::vector<BoundCheck>& checks) {
    std::size_t failed = 0;
    for (const auto& b : checks) {
        if (!b.holds) {
            ++failed;
            std::cerr << "bound violated: " << b.name << " lhs=" << b.lhs << " rhs=" << b.rhs << "\n";
        }
    }
    std::cout << checks.size() - failed << "/" << checks.size() << " bound checks hold\n";
    return failed == 0 ? kOk : kBoundViolation;
}

int cmd_eigen(const Globals& g, std::optional<std::size_t> count) {
    const RunConfig cfg = resolve(g, RunConfig::defaults_1d());
    const auto pairs = find_eigenvalues(cfg.system, count ? *count : cfg.eigen_count);
    const std::string path = out_path(cfg, "eigenvalues.csv");
    write_text(path, eigenvalues_csv(pairs));
    std::cout << "wrote " << pairs.size() << " eigenvalue pairs to " << path << "\n";
    return kOk;
}

int cmd_forward(const Globals& g, const std::string& initial_path, std::optional<std::size_t> modes) {
    const RunConfig cfg = resolve(g, RunConfig::defaults_1d());
    const SlabSystem& sys = cfg.system;
    SampledField initial;
    if (initial_path.empty()) {
        const double b = sys.b;
        const double a = sys.a;
        PiecewiseField f;
        f.left = [b](double x) { return x > -b / 2.0 ? x : -b / 2.0; };
        f.right = [a](double x) { return x > a / 2.0 ? -a / 2.0 : -x; };
        initial = sample(f, uniform_grid(sys, cfg.grid_points), sys.t0);
    } else {
        initial = parse_field_csv(read_text(initial_path), sys.t0);
    }
    const double n_eps = cfg.reg(cfg.epsilons.front()).threshold(sys.tf);
    const EigenBasis basis = EigenBasis::build_below(sys, n_eps);
    const std::size_t M = modes ? *modes : admissible_set(basis, n_eps).size();
    const EigenBasis used = M <= basis.size() ? basis : EigenBasis::build(sys, M - 1);
    const SampledField out = forward_solve(used, initial, M, initial.grid, cfg.policy);
    const std::string path = out_path(cfg, "forward.csv");
    write_text(path, field_csv(out));
    std::cout << "forward solve with " << M << " modes written to " << path << "\n";
    return kOk;
}

int cmd_backward(const Globals& g, const std::string& measured_path, double epsilon,
                 std::optional<double> time) {
    const RunConfig cfg = resolve(g, RunConfig::defaults_1d());
    const SlabSystem& sys = cfg.system;
    const SampledField measured = parse_field_csv(read_text(measured_path), sys.tf);
    const RegParams reg = cfg.reg(epsilon);
    reg.validate();
    const double n_eps = reg.threshold(sys.tf);
    const EigenBasis basis = EigenBasis::build_below(sys, n_eps);
    const double t = time ? *time : sys.t0;
    const SampledField out =
        cutoff_reconstruct(basis, measured, n_eps, t, {cfg.policy, CoeffMethod::collocation});
    const std::string path = out_path(cfg, "backward.csv");
    write_text(path, field_csv(out));
    std::cout << "N_eps=" << n_eps << " modes=" << admissible_set(basis, n_eps).size()
              << " reconstruction written to " << path << "\n";
    return kOk;
}

int cmd_example(const Globals& g, const std::string& which) {
    ExampleResult r;
    if (which == "1") r = run_example1(resolve(g, RunConfig::defaults_1d()));
    else if (which == "2") r = run_example2(resolve(g, RunConfig::defaults_1d()));
    else if (which == "3") r = run_example3(resolve(g, RunConfig::defaults_1d()));
    else if (which == "2d") r = run_example2d(resolve(g, RunConfig::defaults_2d()));
    else throw ValidationError("example must be 1, 2, 3 or 2d");
    const std::string dir = (std::filesystem::path(r.config.output_dir) / r.name).string();
    write_example(r, dir);
    std::cout << r.name << ":";
    for (std::size_t i = 0; i < r.n_eps.size(); ++i) {
        std::cout << " eps=" << epsilon_label(r.config.epsilons[i]) << " N_eps=" << r.n_eps[i]
                  << " modes=" << r.mode_counts[i] << " L2=" << r.l2_errors[i] << ";";
    }
    std::cout << "\n" << format_table(r.table) << "artifacts in " << dir << "\n";
    return r.bounds.empty() ? kOk : report_bounds(r.bounds);
}

int cmd_table(const Globals& g) {
    const RunConfig cfg = resolve(g, RunConfig::defaults_1d());
    const ExampleResult r1 = run_example1(cfg);
    const ExampleResult r2 = run_example2(cfg);
    const ExampleResult r3 = run_example3(cfg);
    emit_table(r1.table, out_path(cfg, "table1a.csv"));
    emit_table(r2.table, out_path(cfg, "table1b.csv"));
    emit_table(r3.table, out_path(cfg, "table1c.csv"));
    for (const ExampleResult* r : {&r1, &r2, &r3}) {
        std::cout << r->name << "\n" << format_table(r->table);
    }
    return kOk;
}

int cmd_check_bounds(const Globals& g, std::size_t trials) {
    const RunConfig cfg = resolve(g, RunConfig::defaults_1d());
    const auto checks = run_bound_suite(cfg.seed, trials);
    write_text(out_path(cfg, "bounds.csv"), bounds_csv(checks));
    return report_bounds(checks);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backward heat conduction in two slabs"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--out", g.out, "output directory");

    std::size_t eigen_count = 0;
    auto* eigen = app.add_subcommand("eigen", "first N+1 eigenvalue pairs");
    auto* eigen_count_opt =
        eigen->add_option("--count,-n", eigen_count, "index N of the last pair (default: config eigen_count)");

    std::string initial_path;
    std::size_t forward_modes = 0;
    auto* forward = app.add_subcommand("forward", "solve forward from t0 to tf");
    forward->add_option("--initial", initial_path, "initial field CSV (slab,x,value)");
    auto* forward_modes_opt = forward->add_option("--modes", forward_modes, "number of modes");

    std::string measured_path;
    double epsilon = 0.0;
    double time = 0.0;
    auto* backward = app.add_subcommand("backward", "regularized reconstruction from data at tf");
    backward->add_option("--measured", measured_path, "measured field CSV (slab,x,value)")->required();
    backward->add_option("--epsilon", epsilon, "noise level")->required();
    auto* time_opt = backward->add_option("--time", time, "reconstruction time (default t0)");

    std::string which;
    auto* example = app.add_subcommand("example", "run a worked example");
    example->add_option("which", which, "1, 2, 3 or 2d")->required();

    auto* table = app.add_subcommand("table", "tables of the three 1D examples");

    std::size_t trials = 100;
    auto* bounds = app.add_subcommand("check-bounds", "randomized bound checks");
    bounds->add_option("--trials", trials, "trials per system");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }
    if (*seed_opt) g.seed = seed;

    try {
        if (*eigen) {
            return cmd_eigen(g, *eigen_count_opt ? std::optional<std::size_t>(eigen_count) : std::nullopt);
        }
        if (*forward) {
            return cmd_forward(g, initial_path,
                               *forward_modes_opt ? std::optional<std::size_t>(forward_modes)
                                                  : std::nullopt);
        }
        if (*backward) {
            return cmd_backward(g, measured_path, epsilon,
                                *time_opt ? std::optional<double>(time) : std::nullopt);
        }
        if (*example) return cmd_example(g, which);
        if (*table) return cmd_table(g);
        if (*bounds) return cmd_check_bounds(g, trials);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kOk;
}
