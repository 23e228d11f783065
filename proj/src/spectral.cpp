#include "twoslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "twoslab/quadrature.hpp"

namespace twoslab {

namespace {

double condition_of(const Eigen::MatrixXd& A) {
    if (A.size() == 0) return 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

void check_mode_count(const EigenBasis& basis, std::size_t mode_count) {
    if (mode_count == 0) throw ValidationError("mode_count must be at least 1");
    if (mode_count > basis.size()) throw ValidationError("mode_count exceeds basis size");
}

void check_time(const SlabSystem& sys, double t) {
    if (!(t >= sys.t0 && t <= sys.tf)) throw ValidationError("time outside [t0, tf]");
}

const char* slab_name(Slab s) { return s == Slab::left ? "left" : "right"; }

}  // namespace

double CoeffVector::mismatch() const {
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(C_b.size(), C_a.size()); ++i) {
        m = std::max(m, std::abs(C_b[i] - C_a[i]));
    }
    return m;
}

DesignMatrix design_matrix(const EigenBasis& basis, const std::vector<double>& nodes, Slab s,
                           std::size_t mode_count) {
    check_mode_count(basis, mode_count);
    const auto& sys = basis.system();
    for (double x : nodes) {
        if (!(x >= sys.lower(s) && x <= sys.upper(s))) {
            throw ValidationError(std::string("node outside the ") + slab_name(s) + " slab");
        }
    }
    DesignMatrix dm;
    dm.A.resize(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(mode_count));
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        for (std::size_t n = 0; n < mode_count; ++n) {
            dm.A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(n)) =
                basis.phi(n, nodes[j], s);
        }
    }
    dm.condition = condition_of(dm.A);
    return dm;
}

std::vector<std::size_t> strict_node_indices(std::size_t node_count, std::size_t mode_count) {
    if (mode_count == 0 || mode_count > node_count) {
        throw ValidationError("strict policy needs 1 <= modes <= nodes");
    }
    std::vector<std::size_t> idx(mode_count);
    if (mode_count == 1) return {0};
    const double step =
        static_cast<double>(node_count - 1) / static_cast<double>(mode_count - 1);
    for (std::size_t i = 0; i < mode_count; ++i) {
        idx[i] = static_cast<std::size_t>(std::lround(step * static_cast<double>(i)));
    }
    return idx;
}

CoeffVector recover_coefficients(const EigenBasis& basis, const SampledField& field,
                                 std::size_t mode_count, NodePolicy policy) {
    check_mode_count(basis, mode_count);
    field.validate();
    field.grid.validate(basis.system());
    CoeffVector out;
    for (Slab s : {Slab::left, Slab::right}) {
        std::vector<double> nodes = field.grid.nodes(s);
        std::vector<double> values = field.values(s);
        if (nodes.size() < mode_count) {
            throw ValidationError(std::string("fewer ") + slab_name(s) +
                                  " nodes than modes");
        }
        if (policy == NodePolicy::strict) {
            std::vector<double> xs;
            std::vector<double> ys;
            for (std::size_t j : strict_node_indices(nodes.size(), mode_count)) {
                xs.push_back(nodes[j]);
                ys.push_back(values[j]);
            }
            nodes = std::move(xs);
            values = std::move(ys);
        }
        const DesignMatrix dm = design_matrix(basis, nodes, s, mode_count);
        if (!(dm.condition <= kConditionLimit)) {
            throw RankDeficientError(std::string("rank-deficient ") + slab_name(s) +
                                         " design matrix",
                                     dm.condition);
        }
        const Eigen::Map<const Eigen::VectorXd> B(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
        const Eigen::VectorXd X = dm.A.colPivHouseholderQr().solve(B);
        out.coeffs(s).assign(X.data(), X.data() + X.size());
    }
    return out;
}

CoeffVector project_coefficients(const EigenBasis& basis, const PiecewiseField& field,
                                 std::size_t mode_count) {
    check_mode_count(basis, mode_count);
    const auto& sys = basis.system();
    std::vector<double> c(mode_count);
    for (std::size_t n = 0; n < mode_count; ++n) {
        const double num = sys.mat_b.weight() * slab_inner(basis, field, n, Slab::left) +
                           sys.mat_a.weight() * slab_inner(basis, field, n, Slab::right);
        c[n] = num / basis.mode(n).norm_N;
    }
    return CoeffVector::shared(c);
}

CoeffVector project_coefficients(const EigenBasis& basis, const SampledField& field,
                                 std::size_t mode_count) {
    check_mode_count(basis, mode_count);
    field.validate();
    const auto& sys = basis.system();
    field.grid.validate(sys);
    std::vector<double> c(mode_count);
    for (std::size_t n = 0; n < mode_count; ++n) {
        double num = 0.0;
        for (Slab s : {Slab::left, Slab::right}) {
            const auto& x = field.grid.nodes(s);
            const auto& v = field.values(s);
            std::vector<double> prod(x.size());
            for (std::size_t j = 0; j < x.size(); ++j) prod[j] = v[j] * basis.phi(n, x[j], s);
            num += sys.material(s).weight() * trapezoid(x, prod);
        }
        c[n] = num / basis.mode(n).norm_N;
    }
    return CoeffVector::shared(c);
}

std::vector<double> amplification(const EigenBasis& basis, std::size_t mode_count, double t) {
    check_mode_count(basis, mode_count);
    const auto& sys = basis.system();
    std::vector<double> e(mode_count);
    for (std::size_t n = 0; n < mode_count; ++n) {
        const double arg = basis.mode(n).pair.lambda_bar * (sys.tf - t);
        if (arg > 700.0) throw NumericalError("amplification overflow");
        e[n] = std::exp(arg);
    }
    return e;
}

double evaluate(const EigenBasis& basis, const CoeffVector& coeffs, double t, double x, Slab s) {
    if (coeffs.size() == 0) return 0.0;
    const auto e = amplification(basis, coeffs.size(), t);
    const auto& c = coeffs.coeffs(s);
    double acc = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) acc += c[n] * e[n] * basis.phi(n, x, s);
    return acc;
}

double max_wavenumber(const EigenBasis& basis, std::size_t mode_count) {
    double w = 0.0;
    for (std::size_t n = 0; n < std::min(mode_count, basis.size()); ++n) {
        const auto& p = basis.mode(n).pair;
        w = std::max({w, p.lambda_b, p.lambda_a});
    }
    return w;
}

namespace {

PiecewiseField series_impl(const EigenBasis& basis, const CoeffVector& coeffs, double t,
                           bool derivative) {
    if (coeffs.C_b.size() != coeffs.C_a.size()) {
        throw ValidationError("coefficient vectors differ in length");
    }
    const auto e = coeffs.size() == 0 ? std::vector<double>{}
                                      : amplification(basis, coeffs.size(), t);
    std::vector<double> cb(coeffs.size());
    std::vector<double> ca(coeffs.size());
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        cb[n] = coeffs.C_b[n] * e[n];
        ca[n] = coeffs.C_a[n] * e[n];
    }
    auto make = [&basis, derivative](std::vector<double> c, Slab s) {
        return [&basis, derivative, c = std::move(c), s](double x) {
            double acc = 0.0;
            for (std::size_t n = 0; n < c.size(); ++n) {
                acc += c[n] * (derivative ? basis.phi_prime(n, x, s) : basis.phi(n, x, s));
            }
            return acc;
        };
    };
    PiecewiseField f;
    f.left = make(std::move(cb), Slab::left);
    f.right = make(std::move(ca), Slab::right);
    return f;
}

}  // namespace

PiecewiseField series_field(const EigenBasis& basis, const CoeffVector& coeffs, double t) {
    return series_impl(basis, coeffs, t, false);
}

PiecewiseField series_gradient(const EigenBasis& basis, const CoeffVector& coeffs, double t) {
    return series_impl(basis, coeffs, t, true);
}

SampledField synthesize(const EigenBasis& basis, const CoeffVector& coeffs, double t,
                        const Grid& grid) {
    const auto& sys = basis.system();
    check_time(sys, t);
    grid.validate(sys);
    if (coeffs.size() > basis.size()) throw ValidationError("more coefficients than modes");
    return sample(series_field(basis, coeffs, t), grid, t);
}

}  // namespace twoslab
