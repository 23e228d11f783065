#include "twoslab/core.hpp"

#include <algorithm>
#include <cmath>

namespace twoslab {

namespace {

void require_material(const Material& m, const char* name) {
    const std::string n(name);
    if (!(m.K > 0.0) || !std::isfinite(m.K)) {
        throw ValidationError(n + ".K must be positive");
    }
    if (!(m.kappa > 0.0) || !std::isfinite(m.kappa)) {
        throw ValidationError(n + ".kappa must be positive");
    }
    if (m.rho_c_override && !(*m.rho_c_override > 0.0)) {
        throw ValidationError(n + ".rho_c must be positive");
    }
}

void require_increasing(const std::vector<double>& v, double lo, double hi, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] < lo || v[i] > hi) {
            throw ValidationError(std::string(name) + " node outside its slab");
        }
        if (i > 0 && !(v[i] > v[i - 1])) {
            throw ValidationError(std::string(name) + " nodes must be strictly increasing");
        }
    }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + h * static_cast<double>(i);
    }
    // endpoints exact
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace

SlabSystem validate_system(const SlabSystem& sys) {
    if (!(sys.a > 0.0) || !std::isfinite(sys.a)) throw ValidationError("a must be positive");
    if (!(sys.b > 0.0) || !std::isfinite(sys.b)) throw ValidationError("b must be positive");
    if (sys.c && (!(*sys.c > 0.0) || !std::isfinite(*sys.c))) {
        throw ValidationError("c must be positive");
    }
    if (!(sys.t0 >= 0.0)) throw ValidationError("t0 must be non-negative");
    if (!(sys.tf > sys.t0)) throw ValidationError("empty time window");
    require_material(sys.mat_b, "material_b");
    require_material(sys.mat_a, "material_a");
    return sys;
}

SlabSystem copper_molybdenum(double b, double a, double t0, double tf) {
    SlabSystem sys;
    sys.b = b;
    sys.a = a;
    sys.mat_b = Material{3.42, 0.838, std::nullopt};
    sys.mat_a = Material{1.05, 0.339, std::nullopt};
    sys.t0 = t0;
    sys.tf = tf;
    return sys;
}

SlabSystem unit_system(double b, double a, double t0, double tf) {
    SlabSystem sys;
    sys.b = b;
    sys.a = a;
    sys.mat_b = Material{1.0, 1.0, std::nullopt};
    sys.mat_a = Material{1.0, 1.0, std::nullopt};
    sys.t0 = t0;
    sys.tf = tf;
    return sys;
}

void Grid::validate(const SlabSystem& sys) const {
    require_increasing(nodes_b, -sys.b, 0.0, "left");
    require_increasing(nodes_a, 0.0, sys.a, "right");
}

Grid uniform_grid(const SlabSystem& sys, std::size_t points_per_slab) {
    if (points_per_slab < 2) {
        throw ValidationError("points_per_slab must be at least 2");
    }
    return Grid{linspace(-sys.b, 0.0, points_per_slab), linspace(0.0, sys.a, points_per_slab)};
}

void SampledField::validate() const {
    if (values_b.size() != grid.nodes_b.size() || values_a.size() != grid.nodes_a.size()) {
        throw ValidationError("field values do not match grid size");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(values_b.begin(), values_b.end(), finite) ||
        !std::all_of(values_a.begin(), values_a.end(), finite)) {
        throw ValidationError("field contains non-finite values");
    }
}

SampledField sample(const PiecewiseField& f, const Grid& grid, double time) {
    SampledField out{grid, {}, {}, time};
    for (Slab s : {Slab::left, Slab::right}) {
        auto& vals = out.values(s);
        for (double x : grid.nodes(s)) vals.push_back(f(x, s));
    }
    return out;
}

namespace {

double lerp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.size() == 1) return ys.front();
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double x0 = xs[i - 1];
    const double x1 = xs[i];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * ys[i - 1] + w * ys[i];
}

}  // namespace

PiecewiseField interpolate(const SampledField& field) {
    field.validate();
    PiecewiseField out;
    const auto xb = field.grid.nodes_b;
    const auto yb = field.values_b;
    const auto xa = field.grid.nodes_a;
    const auto ya = field.values_a;
    out.left = [xb, yb](double x) { return lerp_at(xb, yb, x); };
    out.right = [xa, ya](double x) { return lerp_at(xa, ya, x); };
    out.breakpoints.insert(out.breakpoints.end(), xb.begin(), xb.end());
    out.breakpoints.insert(out.breakpoints.end(), xa.begin(), xa.end());
    return out;
}

void RegParams::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("beta must lie in (0,1)");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in (0,1]");
}

double RegParams::threshold(double tf) const {
    validate();
    if (!(tf > 0.0)) throw ValidationError("tf must be positive");
    // ln(eps^-gamma) written as -gamma*ln(eps) to avoid overflow in pow
    return beta * (-gamma * std::log(epsilon)) / tf;
}

double discrete_l2(const std::vector<double>& nodes, const std::vector<double>& values) {
    double acc = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double h = nodes[i] - nodes[i - 1];
        acc += 0.5 * h * (values[i - 1] * values[i - 1] + values[i] * values[i]);
    }
    return std::sqrt(acc);
}

double discrete_l2_distance(const SampledField& lhs, const SampledField& rhs) {
    double acc = 0.0;
    for (Slab s : {Slab::left, Slab::right}) {
        const auto& x = lhs.grid.nodes(s);
        const auto& u = lhs.values(s);
        const auto& v = rhs.values(s);
        if (u.size() != v.size() || rhs.grid.nodes(s) != x) {
            throw ValidationError("fields live on different grids");
        }
        std::vector<double> d(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) d[i] = u[i] - v[i];
        const double n = discrete_l2(x, d);
        acc += n * n;
    }
    return std::sqrt(acc);
}

}  // namespace twoslab
