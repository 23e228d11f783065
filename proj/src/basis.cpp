#include "twoslab/basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "twoslab/quadrature.hpp"

namespace twoslab {

namespace {

double max_lambda(const EigenMode& m) { return std::max(m.pair.lambda_b, m.pair.lambda_a); }

// Integral of g over slab s with enough nodes for the given frequency.
template <class G>
double slab_integral(const SlabSystem& sys, Slab s, double frequency, G&& g) {
    const double lo = sys.lower(s);
    const double hi = sys.upper(s);
    return gauss_legendre(g, lo, hi, oscillatory_order(frequency, hi - lo));
}

double quad_norm_N(const EigenMode& m, const SlabSystem& sys) {
    const double f = 2.0 * max_lambda(m);
    double acc = 0.0;
    for (Slab s : {Slab::left, Slab::right}) {
        acc += sys.material(s).weight() * slab_integral(sys, s, f, [&](double x) {
            const double v = phi(m, sys, x, s);
            return v * v;
        });
    }
    return acc;
}

double quad_norm_M(const EigenMode& m, const SlabSystem& sys) {
    const double f = 2.0 * max_lambda(m);
    double acc = 0.0;
    for (Slab s : {Slab::left, Slab::right}) {
        acc += sys.material(s).K * slab_integral(sys, s, f, [&](double x) {
            const double v = phi_prime(m, sys, x, s);
            return v * v;
        });
    }
    return acc;
}

}  // namespace

InterfaceScaling interface_scaling(double lambda_b, double lambda_a, const SlabSystem& sys) {
    const double cb = std::cos(lambda_b * sys.b);
    const double ca = std::cos(lambda_a * sys.a);
    InterfaceScaling out;
    out.degenerate = std::abs(cb) < kDegenerateCos || std::abs(ca) < kDegenerateCos;
    if (!out.degenerate) {
        out.amp_b = 1.0 / cb;
        out.amp_a = 1.0 / ca;
        return out;
    }
    // continuity and flux balance at x=0 for theta_b cos(lb(x+b)), theta_a cos(la(x-a))
    Eigen::Matrix2d m;
    m << cb, -ca, sys.mat_b.K * lambda_b * std::sin(lambda_b * sys.b),
        sys.mat_a.K * lambda_a * std::sin(lambda_a * sys.a);
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullV);
    Eigen::Vector2d theta = svd.matrixV().col(1);
    if (theta(0) < 0.0 || (theta(0) == 0.0 && theta(1) < 0.0)) theta = -theta;
    out.amp_b = theta(0);
    out.amp_a = theta(1);
    return out;
}

EigenMode make_mode(const SlabSystem& sys, const EigenValuePair& pair) {
    EigenMode m;
    m.pair = pair;
    const InterfaceScaling sc = interface_scaling(pair.lambda_b, pair.lambda_a, sys);
    m.degenerate_interface = sc.degenerate;
    m.amp_b = sc.amp_b;
    m.amp_a = sc.amp_a;
    if (!sc.degenerate) {
        m.norm_N = norm_N_closed(m, sys);
        m.norm_M = norm_M_closed(m, sys);
        return m;
    }
    m.alt_theta_b = sc.amp_b;
    m.alt_theta_a = sc.amp_a;
    m.norm_N = quad_norm_N(m, sys);
    m.norm_M = pair.n == 0 ? 0.0 : quad_norm_M(m, sys);
    return m;
}

double phi(const EigenMode& mode, const SlabSystem& sys, double x, Slab s) {
    if (s == Slab::left) return mode.amp_b * std::cos(mode.pair.lambda_b * (x + sys.b));
    return mode.amp_a * std::cos(mode.pair.lambda_a * (x - sys.a));
}

double phi(const EigenMode& mode, const SlabSystem& sys, double x) {
    return phi(mode, sys, x, x <= 0.0 ? Slab::left : Slab::right);
}

double phi_prime(const EigenMode& mode, const SlabSystem& sys, double x, Slab s) {
    if (s == Slab::left) {
        const double l = mode.pair.lambda_b;
        return -mode.amp_b * l * std::sin(l * (x + sys.b));
    }
    const double l = mode.pair.lambda_a;
    return -mode.amp_a * l * std::sin(l * (x - sys.a));
}

double norm_N_closed(const EigenMode& mode, const SlabSystem& sys) {
    const double wb = sys.mat_b.weight();
    const double wa = sys.mat_a.weight();
    if (mode.pair.n == 0 || mode.pair.lambda_b == 0.0) return sys.b * wb + sys.a * wa;
    if (mode.degenerate_interface) return quad_norm_N(mode, sys);
    const double cb = std::cos(mode.pair.lambda_b * sys.b);
    const double ca = std::cos(mode.pair.lambda_a * sys.a);
    return 0.5 * sys.b * wb / (cb * cb) + 0.5 * sys.a * wa / (ca * ca);
}

double norm_M_closed(const EigenMode& mode, const SlabSystem& sys) {
    if (mode.pair.n == 0 || mode.pair.lambda_b == 0.0) return 0.0;
    if (mode.degenerate_interface) return quad_norm_M(mode, sys);
    const double lb = mode.pair.lambda_b;
    const double la = mode.pair.lambda_a;
    const double cb = std::cos(lb * sys.b);
    const double ca = std::cos(la * sys.a);
    return 0.5 * sys.b * sys.mat_b.K * lb * lb / (cb * cb) +
           0.5 * sys.a * sys.mat_a.K * la * la / (ca * ca);
}

EigenBasis::EigenBasis(const SlabSystem& sys, const std::vector<EigenValuePair>& pairs,
                       double complete_to)
    : sys_(validate_system(sys)), complete_to_(complete_to) {
    if (pairs.empty()) throw ValidationError("basis needs at least one mode");
    modes_.reserve(pairs.size());
    for (const auto& p : pairs) modes_.push_back(make_mode(sys_, p));
}

EigenBasis EigenBasis::build(const SlabSystem& sys, std::size_t N, const EigenScanOptions& opts) {
    auto pairs = find_eigenvalues(sys, N, opts);
    const double top = pairs.back().lambda_bar;
    return EigenBasis(sys, pairs, top);
}

EigenBasis EigenBasis::build_below(const SlabSystem& sys, double lambda_bar_max,
                                   const EigenScanOptions& opts) {
    return EigenBasis(sys, find_eigenvalues_below(sys, lambda_bar_max, opts), lambda_bar_max);
}

double weighted_inner(const EigenBasis& basis, std::size_t m, std::size_t n) {
    const auto& sys = basis.system();
    const auto& mm = basis.mode(m);
    const auto& mn = basis.mode(n);
    const double f = max_lambda(mm) + max_lambda(mn);
    double acc = 0.0;
    for (Slab s : {Slab::left, Slab::right}) {
        acc += sys.material(s).weight() * slab_integral(sys, s, f, [&](double x) {
            return phi(mm, sys, x, s) * phi(mn, sys, x, s);
        });
    }
    return acc;
}

double derivative_inner(const EigenBasis& basis, std::size_t m, std::size_t n) {
    const auto& sys = basis.system();
    const auto& mm = basis.mode(m);
    const auto& mn = basis.mode(n);
    const double f = max_lambda(mm) + max_lambda(mn);
    double acc = 0.0;
    for (Slab s : {Slab::left, Slab::right}) {
        acc += sys.material(s).K * slab_integral(sys, s, f, [&](double x) {
            return phi_prime(mm, sys, x, s) * phi_prime(mn, sys, x, s);
        });
    }
    return acc;
}

double slab_inner(const EigenBasis& basis, const PiecewiseField& f, std::size_t n, Slab s) {
    const auto& sys = basis.system();
    const auto& mode = basis.mode(n);
    return integrate_panels([&](double x) { return f(x, s) * phi(mode, sys, x, s); },
                            sys.lower(s), sys.upper(s), f.breakpoints, mode.lambda(s));
}

double field_norm_sq(const SlabSystem& sys, const PiecewiseField& f, double frequency,
                     double weight_b, double weight_a) {
    double acc = 0.0;
    for (Slab s : {Slab::left, Slab::right}) {
        const double w = s == Slab::left ? weight_b : weight_a;
        acc += w * integrate_panels(
                       [&](double x) {
                           const double v = f(x, s);
                           return v * v;
                       },
                       sys.lower(s), sys.upper(s), f.breakpoints, 2.0 * frequency);
    }
    return acc;
}

}  // namespace twoslab
