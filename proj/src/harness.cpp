#include "twoslab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace twoslab {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_cell(double v) {
    char buf[64];
    if (v != 0.0 && std::abs(v) < 1e-4) {
        std::snprintf(buf, sizeof buf, "%.5e", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.5f", v);
    }
    std::string s(buf);
    if (s == "-0.00000") s = "0.00000";
    return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ValidationError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw ValidationError("not a number: '" + s + "'");
    return v;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw ValidationError("unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
T get_as(const json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ValidationError("bad value for " + where);
    }
}

void apply_material(const json& j, Material& m, const std::string& where) {
    check_keys(j, {"K", "kappa", "rho_c"}, where);
    if (j.contains("K")) m.K = get_as<double>(j["K"], where + ".K");
    if (j.contains("kappa")) m.kappa = get_as<double>(j["kappa"], where + ".kappa");
    if (j.contains("rho_c")) {
        if (j["rho_c"].is_null()) m.rho_c_override.reset();
        else m.rho_c_override = get_as<double>(j["rho_c"], where + ".rho_c");
    }
}

json material_json(const Material& m) {
    json j{{"K", m.K}, {"kappa", m.kappa}};
    j["rho_c"] = m.rho_c_override ? json(*m.rho_c_override) : json(nullptr);
    return j;
}

double mid_time(const SlabSystem& sys) { return 0.5 * (sys.t0 + sys.tf); }

std::size_t nearest_node(const std::vector<double>& nodes, double x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (std::abs(nodes[i] - x) < std::abs(nodes[best] - x)) best = i;
    }
    return best;
}

EigenBasis basis_covering(const SlabSystem& sys, std::size_t n_min, double lambda_bar_min) {
    std::size_t n = std::max<std::size_t>(n_min, 1);
    for (;;) {
        EigenBasis b = EigenBasis::build(sys, n);
        if (b.complete_to() >= lambda_bar_min) return b;
        n *= 2;
    }
}

double max_threshold(const RunConfig& cfg) {
    double m = 0.0;
    for (double e : cfg.epsilons) m = std::max(m, cfg.reg(e).threshold(cfg.system.tf));
    return m;
}

double max_abs(const SampledField& f) {
    double m = 0.0;
    for (double v : f.values_b) m = std::max(m, std::abs(v));
    for (double v : f.values_a) m = std::max(m, std::abs(v));
    return m;
}

void add_bound(ExampleResult& r, BoundCheck b, const std::string& eps, const char* when) {
    b.name = "eps_" + eps + "/" + b.name + "/" + when;
    r.bounds.push_back(std::move(b));
}

// Measured-data pipeline shared by the examples with known initial data:
// forward solve, perturb, reconstruct at t0.
void run_forward_backward(ExampleResult& r, const EigenBasis& basis, const Grid& grid,
                          double noise_bound, std::uint64_t stream_base) {
    const RunConfig& cfg = r.config;
    const SlabSystem& sys = cfg.system;
    const ReconstructOptions opts{cfg.policy, CoeffMethod::collocation};
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        const double eps = cfg.epsilons[i];
        const std::string label = epsilon_label(eps);
        const RegParams reg = cfg.reg(eps);
        const double n_eps = reg.threshold(sys.tf);
        const std::size_t M = admissible_set(basis, n_eps).size();
        const SampledField final_tf = forward_solve(basis, r.exact, M, grid, cfg.policy);
        const SampledField noisy =
            inject_noise(final_tf, eps, noise_bound, Rng::stream_seed(cfg.seed, stream_base + i));
        SampledField recon = cutoff_reconstruct(basis, noisy, n_eps, sys.t0, opts);
        r.n_eps.push_back(n_eps);
        r.mode_counts.push_back(M);
        r.l2_errors.push_back(discrete_l2_distance(recon, r.exact));
        for (double t : {sys.t0, mid_time(sys)}) {
            const char* when = t == sys.t0 ? "t0" : "tmid";
            add_bound(r, stability_bound(basis, noisy, reg, t), label, when);
            add_bound(r, noise_gap_bound(basis, final_tf, noisy, reg, t), label, when);
        }
        r.measured.push_back(noisy);
        r.reconstructions.push_back(std::move(recon));
    }
    r.table = make_table(cfg.table_positions, cfg.epsilons, r.reconstructions, r.exact);
    r.eigenvalues.clear();
    for (const auto& m : basis.modes()) r.eigenvalues.push_back(m.pair);
}

}  // namespace

std::uint64_t Rng::stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

SampledField inject_noise(const SampledField& field, double epsilon, double bound,
                          std::uint64_t seed, NoiseReport* report) {
    field.validate();
    if (!(bound > 0.0)) throw ValidationError("noise bound must be positive");
    if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be non-negative");
    NoiseReport rep;
    if (epsilon == 0.0) {
        if (report) *report = rep;
        return field;
    }
    Rng rng(seed);
    std::vector<double> pb(field.values_b.size());
    std::vector<double> pa(field.values_a.size());
    for (double& v : pb) v = epsilon * rng.uniform(-bound, bound);
    for (double& v : pa) v = epsilon * rng.uniform(-bound, bound);
    double nb = discrete_l2(field.grid.nodes_b, pb);
    double na = discrete_l2(field.grid.nodes_a, pa);
    if (nb + na > epsilon) {
        rep.scale = epsilon / (nb + na) * (1.0 - 1e-12);
        for (double& v : pb) v *= rep.scale;
        for (double& v : pa) v *= rep.scale;
        nb = discrete_l2(field.grid.nodes_b, pb);
        na = discrete_l2(field.grid.nodes_a, pa);
    }
    rep.norm_b = nb;
    rep.norm_a = na;
    SampledField out = field;
    for (std::size_t i = 0; i < pb.size(); ++i) out.values_b[i] += pb[i];
    for (std::size_t i = 0; i < pa.size(); ++i) out.values_a[i] += pa[i];
    if (report) *report = rep;
    return out;
}

RunConfig RunConfig::defaults_1d() {
    RunConfig cfg;
    cfg.system = copper_molybdenum(5.0, 3.0, 0.0, 0.1);
    return cfg;
}

RunConfig RunConfig::defaults_2d() {
    RunConfig cfg;
    cfg.system = copper_molybdenum(1.0, 1.0, 0.0, 0.1);
    cfg.system.c = 1.0;
    cfg.beta = 0.01;
    cfg.gamma = 1.0;
    cfg.table_positions = {-1.0, -0.5, 0.5, 1.0};
    return cfg;
}

void RunConfig::validate() const {
    validate_system(system);
    if (epsilons.empty()) throw ValidationError("epsilon list is empty");
    for (double e : epsilons) reg(e).validate();
    if (grid_points < 2) throw ValidationError("grid_points must be at least 2");
    if (!(Q > 0.0)) throw ValidationError("Q must be positive");
    if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
    if (unregularized_modes < 1) throw ValidationError("unregularized_modes must be at least 1");
    if (surface_times < 2) throw ValidationError("surface_times must be at least 2");
    if (system.c && !(y0 >= 0.0 && y0 <= *system.c)) throw ValidationError("y0 outside [0, c]");
    if (output_dir.empty()) throw ValidationError("output_dir is empty");
}

RunConfig parse_config(const std::string& json_text, const RunConfig& base) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j,
               {"system", "regularization", "grid_points", "seed", "node_policy", "output_dir",
                "example3", "unregularized_modes", "surface_times", "y0", "eigen_count",
                "table_positions"},
               "config");
    RunConfig cfg = base;
    if (j.contains("system")) {
        const json& s = j["system"];
        check_keys(s, {"a", "b", "c", "t0", "tf", "material_b", "material_a"}, "system");
        if (s.contains("a")) cfg.system.a = get_as<double>(s["a"], "system.a");
        if (s.contains("b")) cfg.system.b = get_as<double>(s["b"], "system.b");
        if (s.contains("c")) {
            if (s["c"].is_null()) cfg.system.c.reset();
            else cfg.system.c = get_as<double>(s["c"], "system.c");
        }
        if (s.contains("t0")) cfg.system.t0 = get_as<double>(s["t0"], "system.t0");
        if (s.contains("tf")) cfg.system.tf = get_as<double>(s["tf"], "system.tf");
        if (s.contains("material_b")) apply_material(s["material_b"], cfg.system.mat_b, "material_b");
        if (s.contains("material_a")) apply_material(s["material_a"], cfg.system.mat_a, "material_a");
    }
    if (j.contains("regularization")) {
        const json& r = j["regularization"];
        check_keys(r, {"epsilons", "beta", "gamma"}, "regularization");
        if (r.contains("epsilons")) cfg.epsilons = get_as<std::vector<double>>(r["epsilons"], "epsilons");
        if (r.contains("beta")) cfg.beta = get_as<double>(r["beta"], "beta");
        if (r.contains("gamma")) cfg.gamma = get_as<double>(r["gamma"], "gamma");
    }
    if (j.contains("grid_points")) cfg.grid_points = get_as<std::size_t>(j["grid_points"], "grid_points");
    if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j["seed"], "seed");
    if (j.contains("node_policy")) {
        const auto p = get_as<std::string>(j["node_policy"], "node_policy");
        if (p == "least_squares") cfg.policy = NodePolicy::least_squares;
        else if (p == "strict") cfg.policy = NodePolicy::strict;
        else throw ValidationError("node_policy must be 'least_squares' or 'strict'");
    }
    if (j.contains("output_dir")) cfg.output_dir = get_as<std::string>(j["output_dir"], "output_dir");
    if (j.contains("example3")) {
        const json& e = j["example3"];
        check_keys(e, {"Q", "sigma"}, "example3");
        if (e.contains("Q")) cfg.Q = get_as<double>(e["Q"], "example3.Q");
        if (e.contains("sigma")) cfg.sigma = get_as<double>(e["sigma"], "example3.sigma");
    }
    if (j.contains("unregularized_modes")) {
        cfg.unregularized_modes = get_as<std::size_t>(j["unregularized_modes"], "unregularized_modes");
    }
    if (j.contains("surface_times")) cfg.surface_times = get_as<std::size_t>(j["surface_times"], "surface_times");
    if (j.contains("y0")) cfg.y0 = get_as<double>(j["y0"], "y0");
    if (j.contains("eigen_count")) cfg.eigen_count = get_as<std::size_t>(j["eigen_count"], "eigen_count");
    if (j.contains("table_positions")) {
        cfg.table_positions = get_as<std::vector<double>>(j["table_positions"], "table_positions");
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
    return parse_config(read_text(path), base);
}

std::string config_to_json(const RunConfig& cfg) {
    json sys{{"a", cfg.system.a},
             {"b", cfg.system.b},
             {"t0", cfg.system.t0},
             {"tf", cfg.system.tf},
             {"material_b", material_json(cfg.system.mat_b)},
             {"material_a", material_json(cfg.system.mat_a)}};
    sys["c"] = cfg.system.c ? json(*cfg.system.c) : json(nullptr);
    json j{{"system", sys},
           {"regularization", {{"epsilons", cfg.epsilons}, {"beta", cfg.beta}, {"gamma", cfg.gamma}}},
           {"grid_points", cfg.grid_points},
           {"seed", cfg.seed},
           {"node_policy", cfg.policy == NodePolicy::strict ? "strict" : "least_squares"},
           {"output_dir", cfg.output_dir},
           {"example3", {{"Q", cfg.Q}, {"sigma", cfg.sigma}}},
           {"unregularized_modes", cfg.unregularized_modes},
           {"surface_times", cfg.surface_times},
           {"y0", cfg.y0},
           {"eigen_count", cfg.eigen_count},
           {"table_positions", cfg.table_positions}};
    return j.dump(2);
}

std::string epsilon_label(double epsilon) {
    if (epsilon > 0.0) {
        const double k = std::round(std::log10(epsilon));
        if (std::abs(epsilon - std::pow(10.0, k)) <= 1e-12 * epsilon) {
            return "1e" + std::to_string(static_cast<long long>(k));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", epsilon);
    return buf;
}

std::string format_table(const ResultTable& table) {
    std::string out = "x";
    for (const auto& c : table.columns) out += ",eps_" + c;
    if (table.has_exact) out += ",exact";
    out += "\n";
    for (const auto& row : table.rows) {
        out += fmt_cell(row.x);
        for (double v : row.values) out += "," + fmt_cell(v);
        if (table.has_exact) out += "," + fmt_cell(row.exact);
        out += "\n";
    }
    return out;
}

void emit_table(const ResultTable& table, const std::string& path) {
    write_text(path, format_table(table));
}

ResultTable parse_table(const std::string& csv_text) {
    const auto lines = lines_of(csv_text);
    if (lines.empty()) throw ValidationError("table has no header");
    const auto head = split(lines[0], ',');
    if (head.empty() || head[0] != "x") throw ValidationError("table header must start with x");
    ResultTable t;
    for (std::size_t i = 1; i < head.size(); ++i) {
        if (head[i] == "exact" && i + 1 == head.size()) {
            t.has_exact = true;
        } else if (head[i].rfind("eps_", 0) == 0) {
            t.columns.push_back(head[i].substr(4));
        } else {
            throw ValidationError("unexpected table column '" + head[i] + "'");
        }
    }
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto cells = split(lines[l], ',');
        if (cells.size() != head.size()) throw ValidationError("ragged table row");
        ResultTable::Row row;
        row.x = parse_double(cells[0]);
        for (std::size_t i = 0; i < t.columns.size(); ++i) row.values.push_back(parse_double(cells[i + 1]));
        if (t.has_exact) row.exact = parse_double(cells.back());
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable make_table(const std::vector<double>& positions, const std::vector<double>& epsilons,
                       const std::vector<SampledField>& fields,
                       const std::optional<SampledField>& exact) {
    if (fields.size() != epsilons.size()) throw ValidationError("one field per epsilon expected");
    ResultTable t;
    for (double e : epsilons) t.columns.push_back(epsilon_label(e));
    t.has_exact = exact.has_value();
    if (fields.empty()) return t;
    const Grid& grid = fields.front().grid;
    for (double p : positions) {
        const Slab s = p < 0.0 ? Slab::left : Slab::right;
        const std::size_t j = nearest_node(grid.nodes(s), p);
        ResultTable::Row row;
        row.x = grid.nodes(s)[j];
        for (const auto& f : fields) row.values.push_back(f.values(s).at(j));
        if (exact) row.exact = exact->values(s).at(j);
        t.rows.push_back(std::move(row));
    }
    return t;
}

bool ExampleResult::bounds_hold() const {
    return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.holds; });
}

ExampleResult run_example1(const RunConfig& cfg) {
    cfg.validate();
    const SlabSystem& sys = cfg.system;
    ExampleResult r;
    r.name = "example1";
    r.config = cfg;
    const EigenBasis basis = basis_covering(sys, cfg.unregularized_modes, max_threshold(cfg));
    const Grid grid = uniform_grid(sys, cfg.grid_points);
    const EigenMode& m1 = basis.mode(1);
    const double lbar1 = m1.pair.lambda_bar;
    const double decay = std::exp(-lbar1 * (sys.tf - sys.t0));
    const double scale = 1.0 / (sys.a + sys.b);
    PiecewiseField initial;
    initial.left = [&](double x) { return scale * phi(m1, sys, x, Slab::left); };
    initial.right = [&](double x) { return scale * phi(m1, sys, x, Slab::right); };
    r.exact = sample(initial, grid, sys.t0);
    SampledField clean_tf = r.exact;
    clean_tf.time = sys.tf;
    for (double& v : clean_tf.values_b) v *= decay;
    for (double& v : clean_tf.values_a) v *= decay;
    r.metrics["lambda_bar_1"] = lbar1;
    r.metrics["decay_factor"] = decay;

    const ReconstructOptions opts{cfg.policy, CoeffMethod::collocation};
    const double bound = std::sqrt(2.0 * std::max(sys.a, sys.b));
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        const double eps = cfg.epsilons[i];
        const std::string label = epsilon_label(eps);
        const RegParams reg = cfg.reg(eps);
        const double n_eps = reg.threshold(sys.tf);
        const SampledField noisy =
            inject_noise(clean_tf, eps, bound, Rng::stream_seed(cfg.seed, 100 + i));
        SampledField recon = cutoff_reconstruct(basis, noisy, n_eps, sys.t0, opts);
        r.n_eps.push_back(n_eps);
        r.mode_counts.push_back(admissible_set(basis, n_eps).size());
        r.l2_errors.push_back(discrete_l2_distance(recon, r.exact));
        r.metrics["value_x0_right_eps_" + label] = recon.values_a.front();
        for (double t : {sys.t0, mid_time(sys)}) {
            const char* when = t == sys.t0 ? "t0" : "tmid";
            add_bound(r, stability_bound(basis, noisy, reg, t), label, when);
            add_bound(r, noise_gap_bound(basis, clean_tf, noisy, reg, t), label, when);
        }
        r.measured.push_back(noisy);
        r.reconstructions.push_back(std::move(recon));
    }

    // surface of the first noise level over the time window
    const CoeffVector c0 = cutoff_coefficients(basis, r.measured.front(), r.n_eps.front(), opts);
    for (std::size_t k = 0; k < cfg.surface_times; ++k) {
        const double t = k + 1 == cfg.surface_times
                             ? sys.tf
                             : sys.t0 + (sys.tf - sys.t0) * static_cast<double>(k) /
                                            static_cast<double>(cfg.surface_times - 1);
        const SampledField f = synthesize(basis, c0, t, grid);
        for (Slab s : {Slab::left, Slab::right}) {
            for (std::size_t j = 0; j < grid.nodes(s).size(); ++j) {
                r.surface.push_back({grid.nodes(s)[j], t, f.values(s)[j]});
            }
        }
    }

    // all modes, no cut-off
    const std::size_t n_all = cfg.unregularized_modes + 1;
    const CoeffVector c_all = project_coefficients(basis, r.measured.front(), n_all);
    r.unregularized = synthesize(basis, c_all, sys.t0, grid);
    r.metrics["unregularized_modes"] = static_cast<double>(n_all);
    r.metrics["unregularized_max"] = max_abs(r.unregularized);
    r.metrics["regularized_max"] = max_abs(r.reconstructions.front());
    r.metrics["instability_ratio"] = r.metrics["unregularized_max"] / r.metrics["regularized_max"];

    r.table = make_table(cfg.table_positions, cfg.epsilons, r.reconstructions, std::nullopt);
    for (const auto& m : basis.modes()) r.eigenvalues.push_back(m.pair);
    return r;
}

ExampleResult run_example2(const RunConfig& cfg) {
    cfg.validate();
    const SlabSystem& sys = cfg.system;
    ExampleResult r;
    r.name = "example2";
    r.config = cfg;
    const EigenBasis basis = EigenBasis::build_below(sys, max_threshold(cfg));
    const Grid grid = uniform_grid(sys, cfg.grid_points);
    const double b = sys.b;
    const double a = sys.a;
    PiecewiseField initial;
    initial.left = [b](double x) { return x > -b / 2.0 ? x : -b / 2.0; };
    initial.right = [a](double x) { return x > a / 2.0 ? -a / 2.0 : -x; };
    initial.breakpoints = {-b / 2.0, a / 2.0};
    r.exact = sample(initial, grid, sys.t0);
    run_forward_backward(r, basis, grid, std::pow(2.0 * b, -0.25), 200);
    return r;
}

ExampleResult run_example3(const RunConfig& cfg) {
    cfg.validate();
    const SlabSystem& sys = cfg.system;
    ExampleResult r;
    r.name = "example3";
    r.config = cfg;
    const EigenBasis basis = EigenBasis::build_below(sys, max_threshold(cfg));
    const Grid grid = uniform_grid(sys, cfg.grid_points);
    const double plateau = cfg.Q / (sys.mat_b.rho_c() * cfg.sigma);
    PiecewiseField initial;
    initial.left = [plateau](double) { return plateau; };
    initial.right = [](double) { return 0.0; };
    r.exact = sample(initial, grid, sys.t0);
    r.metrics["plateau"] = plateau;
    r.metrics["rho_c_b"] = sys.mat_b.rho_c();
    run_forward_backward(r, basis, grid, std::pow(2.0 * sys.b, -0.25), 300);
    return r;
}

ExampleResult run_example2d(const RunConfig& cfg) {
    cfg.validate();
    const SlabSystem& sys = cfg.system;
    if (!sys.c) throw ValidationError("the 2D example needs system.c");
    ExampleResult r;
    r.name = "example2d";
    r.config = cfg;
    const Grid grid = uniform_grid(sys, cfg.grid_points);
    const double b = sys.b;
    const double a = sys.a;
    const double c = *sys.c;
    const double y0 = cfg.y0;
    const double cy = std::cos(std::numbers::pi * y0);
    PiecewiseField initial;
    initial.left = [b, cy](double x) { return std::cos(std::numbers::pi * (x + b)) * cy; };
    initial.right = [a, cy](double x) { return std::cos(std::numbers::pi * (x - a)) * cy; };
    r.exact = sample(initial, grid, sys.t0);
    const double bound = 1.0 / std::sqrt((a + b) * c);
    double top = -1.0;
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        const double eps = cfg.epsilons[i];
        const double n_eps = cfg.reg(eps).threshold(sys.tf);
        const Basis2D basis = find_modes_2d(sys, n_eps);
        const SampledField final_tf = forward_2d_slice(basis, r.exact, y0, grid, cfg.policy);
        const SampledField noisy =
            inject_noise(final_tf, eps, bound, Rng::stream_seed(cfg.seed, 400 + i));
        SampledField recon = reconstruct_2d_slice(basis, noisy, y0, sys.t0, cfg.policy);
        r.n_eps.push_back(n_eps);
        r.mode_counts.push_back(basis.size());
        r.l2_errors.push_back(discrete_l2_distance(recon, r.exact));
        if (n_eps > top) {
            top = n_eps;
            r.modes2d = basis.modes;
        }
        r.measured.push_back(noisy);
        r.reconstructions.push_back(std::move(recon));
    }
    r.table = make_table(cfg.table_positions, cfg.epsilons, r.reconstructions, r.exact);
    return r;
}

std::vector<BoundCheck> run_bound_suite(std::uint64_t seed, std::size_t trials) {
    struct Named {
        const char* name;
        SlabSystem sys;
    };
    const std::vector<Named> systems{{"cu_mo", copper_molybdenum()}, {"unit", unit_system(5.0, 3.0)}};
    const RegParams reg{1e-2, 0.05, 0.5};
    const std::size_t modes = 20;
    std::vector<BoundCheck> out;
    for (std::size_t si = 0; si < systems.size(); ++si) {
        const SlabSystem& sys = systems[si].sys;
        const EigenBasis basis = EigenBasis::build(sys, modes - 1);
        const Grid grid = uniform_grid(sys, 20);
        for (std::size_t k = 0; k < trials; ++k) {
            Rng rng(Rng::stream_seed(seed, 1000 * (si + 1) + k));
            std::vector<double> c(modes);
            for (double& v : c) v = rng.uniform(-1.0, 1.0);
            const CoeffVector C = CoeffVector::shared(c);
            SampledField data{grid, {}, {}, sys.tf};
            for (std::size_t j = 0; j < grid.nodes_b.size(); ++j) data.values_b.push_back(rng.uniform(-1.0, 1.0));
            for (std::size_t j = 0; j < grid.nodes_a.size(); ++j) data.values_a.push_back(rng.uniform(-1.0, 1.0));
            const SampledField clean = synthesize(basis, C, sys.tf, grid);
            const SampledField noisy =
                inject_noise(clean, reg.epsilon, 1.0, Rng::stream_seed(seed, 500000 + 1000 * si + k));
            for (double t : {sys.t0, mid_time(sys)}) {
                const std::string tag = std::string(systems[si].name) + "/trial_" +
                                        std::to_string(k) + (t == sys.t0 ? "/t0" : "/tmid");
                for (BoundCheck b : {instability_lower_bound(basis, C, t),
                                     stability_bound(basis, data, reg, t),
                                     noise_gap_bound(basis, clean, noisy, reg, t)}) {
                    b.name = tag + "/" + b.name;
                    out.push_back(std::move(b));
                }
            }
        }
    }
    return out;
}

std::string eigenvalues_csv(const std::vector<EigenValuePair>& pairs) {
    std::string out = "n,lambda_b,lambda_a,lambda_bar\n";
    for (const auto& p : pairs) {
        out += std::to_string(p.n) + "," + fmt(p.lambda_b) + "," + fmt(p.lambda_a) + "," +
               fmt(p.lambda_bar) + "\n";
    }
    return out;
}

std::string reconstruction_csv(const ExampleResult& r) {
    std::string out = "x";
    for (double e : r.config.epsilons) out += ",eps_" + epsilon_label(e);
    out += ",exact\n";
    for (Slab s : {Slab::left, Slab::right}) {
        const auto& nodes = r.exact.grid.nodes(s);
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            out += fmt(nodes[j]);
            for (const auto& f : r.reconstructions) out += "," + fmt(f.values(s)[j]);
            out += "," + fmt(r.exact.values(s)[j]) + "\n";
        }
    }
    return out;
}

std::string magnitude_csv(const ExampleResult& r) {
    std::string out = "x";
    for (double e : r.config.epsilons) out += ",abs_eps_" + epsilon_label(e);
    out += ",abs_exact\n";
    for (Slab s : {Slab::left, Slab::right}) {
        const auto& nodes = r.exact.grid.nodes(s);
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            out += fmt(nodes[j]);
            for (const auto& f : r.reconstructions) out += "," + fmt(std::abs(f.values(s)[j]));
            out += "," + fmt(std::abs(r.exact.values(s)[j])) + "\n";
        }
    }
    return out;
}

std::string surface_csv(const std::vector<SurfacePoint>& points) {
    std::string out = "x,t,value\n";
    for (const auto& p : points) out += fmt(p[0]) + "," + fmt(p[1]) + "," + fmt(p[2]) + "\n";
    return out;
}

std::string bounds_csv(const std::vector<BoundCheck>& checks) {
    std::string out = "name,lhs,rhs,pass\n";
    for (const auto& b : checks) {
        out += b.name + "," + fmt(b.lhs) + "," + fmt(b.rhs) + "," + (b.holds ? "true" : "false") + "\n";
    }
    return out;
}

std::string modes2d_csv(const std::vector<Mode2D>& modes) {
    std::string out = "m,n,mu,nu_b,nu_a,lambda_bar\n";
    for (const auto& m : modes) {
        out += std::to_string(m.m) + "," + std::to_string(m.n) + "," + fmt(m.mu) + "," +
               fmt(m.nu_b) + "," + fmt(m.nu_a) + "," + fmt(m.lambda_bar) + "\n";
    }
    return out;
}

std::string field_csv(const SampledField& field) {
    std::string out = "slab,x,value\n";
    for (Slab s : {Slab::left, Slab::right}) {
        const char* name = s == Slab::left ? "left" : "right";
        for (std::size_t j = 0; j < field.grid.nodes(s).size(); ++j) {
            out += std::string(name) + "," + fmt(field.grid.nodes(s)[j]) + "," +
                   fmt(field.values(s)[j]) + "\n";
        }
    }
    return out;
}

SampledField parse_field_csv(const std::string& csv_text, double time) {
    const auto lines = lines_of(csv_text);
    if (lines.empty() || lines[0] != "slab,x,value") {
        throw ValidationError("field CSV must start with 'slab,x,value'");
    }
    SampledField f;
    f.time = time;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto cells = split(lines[l], ',');
        if (cells.size() != 3) throw ValidationError("field CSV rows need 3 cells");
        Slab s;
        if (cells[0] == "left") s = Slab::left;
        else if (cells[0] == "right") s = Slab::right;
        else throw ValidationError("slab must be 'left' or 'right'");
        const double x = parse_double(cells[1]);
        (s == Slab::left ? f.grid.nodes_b : f.grid.nodes_a).push_back(x);
        f.values(s).push_back(parse_double(cells[2]));
    }
    f.validate();
    return f;
}

std::string metadata_json(const ExampleResult& r) {
    json j;
    j["example"] = r.name;
    j["generator"] = Rng::kName;
    j["seed"] = r.config.seed;
    j["config"] = json::parse(config_to_json(r.config));
    j["n_eps"] = r.n_eps;
    j["mode_counts"] = r.mode_counts;
    j["l2_errors"] = r.l2_errors;
    j["bounds_pass"] = r.bounds_hold();
    json m = json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    j["metrics"] = m;
    return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_example(const ExampleResult& r, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create '" + dir + "': " + ec.message());
    const auto at = [&dir](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    write_text(at("reconstruction.csv"), reconstruction_csv(r));
    write_text(at("magnitude.csv"), magnitude_csv(r));
    write_text(at("bounds.csv"), bounds_csv(r.bounds));
    emit_table(r.table, at("table.csv"));
    if (!r.eigenvalues.empty()) write_text(at("eigenvalues.csv"), eigenvalues_csv(r.eigenvalues));
    if (!r.surface.empty()) write_text(at("surface.csv"), surface_csv(r.surface));
    if (!r.unregularized.values_b.empty()) write_text(at("unregularized.csv"), field_csv(r.unregularized));
    if (!r.modes2d.empty()) write_text(at("modes2d.csv"), modes2d_csv(r.modes2d));
    write_text(at("metadata.json"), metadata_json(r));
}

}  // namespace twoslab
