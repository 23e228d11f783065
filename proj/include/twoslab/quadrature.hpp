#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace twoslab {

/// Gauss-Legendre nodes and weights on [-1,1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule of the given order (order >= 1). Thread-safe; the returned
/// reference stays valid for the lifetime of the program.
const GaussRule& gauss_legendre_rule(std::size_t order);

/// Gauss-Legendre approximation of the integral of f over [lo,hi].
template <class F>
double gauss_legendre(F&& f, double lo, double hi, std::size_t order) {
    const GaussRule& rule = gauss_legendre_rule(order);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return acc * half;
}

/// Order sufficient for integrands oscillating with angular frequency up to
/// `frequency` over an interval of the given length.
inline std::size_t oscillatory_order(double frequency, double length) {
    const double want = std::ceil(4.0 * std::abs(frequency) * length);
    return std::max<std::size_t>(64, static_cast<std::size_t>(want));
}

/// Integral of f over [lo,hi], split at the breakpoints that fall strictly
/// inside, with an oscillation-aware order per panel.
template <class F>
double integrate_panels(F&& f, double lo, double hi, const std::vector<double>& breakpoints,
                        double frequency) {
    std::vector<double> cuts{lo};
    for (double p : breakpoints) {
        if (p > lo && p < hi) cuts.push_back(p);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double len = cuts[i] - cuts[i - 1];
        if (len <= 0.0) continue;
        acc += gauss_legendre(f, cuts[i - 1], cuts[i], oscillatory_order(frequency, len));
    }
    return acc;
}

/// Trapezoid rule over sampled values.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace twoslab
