#include "twoslab/bilayer2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "twoslab/basis.hpp"
#include "twoslab/detail/root_scan.hpp"

namespace twoslab {

namespace {

double require_c(const SlabSystem& sys) {
    if (!sys.c) throw ValidationError("c must be set for the bilayer");
    return *sys.c;
}

const char* slab_name(Slab s) { return s == Slab::left ? "left" : "right"; }

}  // namespace

double nu_a_of(double nu_b, double mu, const SlabSystem& sys) {
    const double r = sys.mat_b.kappa / sys.mat_a.kappa;
    const double rad = r * nu_b * nu_b + (r - 1.0) * mu * mu;
    const double scale = r * nu_b * nu_b + std::abs(r - 1.0) * mu * mu;
    if (rad < -1e-12 * std::max(scale, 1.0)) throw ValidationError("evanescent branch");
    return std::sqrt(std::max(rad, 0.0));
}

double eigen_f_2d(double nu_b, double mu, const SlabSystem& sys) {
    const double nu_a = nu_a_of(nu_b, mu, sys);
    return sys.mat_b.K * nu_b * std::sin(nu_b * sys.b) * std::cos(nu_a * sys.a) +
           sys.mat_a.K * nu_a * std::sin(nu_a * sys.a) * std::cos(nu_b * sys.b);
}

Basis2D find_modes_2d(const SlabSystem& sys, double n_eps, const EigenScanOptions& opts) {
    validate_system(sys);
    const double c = require_c(sys);
    if (!(n_eps > 0.0)) throw ValidationError("n_eps must be positive");
    if (!(opts.scan_step > 0.0) || !(opts.refine_tol > 0.0)) {
        throw ValidationError("scan_step and refine_tol must be positive");
    }
    const double kb = sys.mat_b.kappa;
    const double ka = sys.mat_a.kappa;
    const double r = kb / ka;
    Basis2D out{sys, n_eps, {}};
    for (std::size_t m = 0;; ++m) {
        const double mu = static_cast<double>(m) * std::numbers::pi / c;
        if (std::min(kb, ka) * mu * mu > n_eps) break;
        const double top_sq = n_eps / kb - mu * mu;
        if (top_sq < 0.0) continue;
        const double nu_lo = r >= 1.0 ? 0.0 : std::sqrt((1.0 - r) * mu * mu / r);
        const double nu_hi = std::sqrt(top_sq);
        if (nu_hi < nu_lo) continue;
        detail::RootScanner scanner([&](double nu) { return eigen_f_2d(nu, mu, sys); }, nu_lo,
                                    opts.scan_step, opts.refine_tol);
        scanner.advance_to(nu_hi + 2.0 * opts.scan_step);
        std::size_t n = 0;
        for (double nu_b : scanner.roots()) {
            Mode2D mode;
            mode.m = m;
            mode.n = n++;
            mode.mu = mu;
            mode.nu_b = nu_b;
            mode.nu_a = nu_a_of(nu_b, mu, sys);
            mode.lambda_bar = kb * (nu_b * nu_b + mu * mu);
            if (mode.lambda_bar > n_eps) break;
            const InterfaceScaling sc = interface_scaling(mode.nu_b, mode.nu_a, sys);
            mode.degenerate_interface = sc.degenerate;
            mode.amp_b = sc.amp_b;
            mode.amp_a = sc.amp_a;
            out.modes.push_back(mode);
        }
    }
    std::sort(out.modes.begin(), out.modes.end(), [](const Mode2D& u, const Mode2D& v) {
        return std::tie(u.lambda_bar, u.m, u.n) < std::tie(v.lambda_bar, v.m, v.n);
    });
    return out;
}

double y_mode(std::size_t m, double y, double c) {
    if (m == 0) return std::sqrt(1.0 / c);
    return std::sqrt(2.0 / c) * std::cos(static_cast<double>(m) * std::numbers::pi * y / c);
}

double x_mode(const Mode2D& mode, const SlabSystem& sys, double x, Slab s) {
    if (s == Slab::left) return mode.amp_b * std::cos(mode.nu_b * (x + sys.b));
    return mode.amp_a * std::cos(mode.nu_a * (x - sys.a));
}

double phi_2d(const Mode2D& mode, const SlabSystem& sys, double x, double y) {
    const double c = require_c(sys);
    return x_mode(mode, sys, x, x <= 0.0 ? Slab::left : Slab::right) * y_mode(mode.m, y, c);
}

DesignMatrix slice_design_matrix(const Basis2D& basis, const std::vector<double>& nodes, Slab s,
                                 double y0) {
    const double c = require_c(basis.sys);
    DesignMatrix dm;
    dm.A.resize(static_cast<Eigen::Index>(nodes.size()),
                static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const Mode2D& md = basis.modes[k];
            dm.A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                x_mode(md, basis.sys, nodes[j], s) * y_mode(md.m, y0, c);
        }
    }
    if (dm.A.size() == 0) {
        dm.condition = 1.0;
        return dm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dm.A);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    dm.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    return dm;
}

CoeffVector slice_coefficients(const Basis2D& basis, const SampledField& slice, double y0,
                               NodePolicy policy) {
    slice.validate();
    slice.grid.validate(basis.sys);
    const std::size_t M = basis.size();
    if (M == 0) throw ValidationError("empty 2D basis");
    CoeffVector out;
    for (Slab s : {Slab::left, Slab::right}) {
        std::vector<double> nodes = slice.grid.nodes(s);
        std::vector<double> values = slice.values(s);
        if (nodes.size() < M) {
            throw ValidationError(std::string("fewer ") + slab_name(s) + " nodes than modes");
        }
        if (policy == NodePolicy::strict) {
            std::vector<double> xs;
            std::vector<double> ys;
            for (std::size_t j : strict_node_indices(nodes.size(), M)) {
                xs.push_back(nodes[j]);
                ys.push_back(values[j]);
            }
            nodes = std::move(xs);
            values = std::move(ys);
        }
        const DesignMatrix dm = slice_design_matrix(basis, nodes, s, y0);
        if (!(dm.condition <= kConditionLimit)) {
            throw RankDeficientError(std::string("rank-deficient ") + slab_name(s) +
                                         " slice matrix",
                                     dm.condition);
        }
        const Eigen::Map<const Eigen::VectorXd> B(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
        const Eigen::VectorXd X = dm.A.colPivHouseholderQr().solve(B);
        out.coeffs(s).assign(X.data(), X.data() + X.size());
    }
    return out;
}

SampledField synthesize_2d_slice(const Basis2D& basis, const CoeffVector& coeffs, double y0,
                                 double t, const Grid& grid) {
    const auto& sys = basis.sys;
    const double c = require_c(sys);
    if (!(t >= sys.t0 && t <= sys.tf)) throw ValidationError("time outside [t0, tf]");
    if (coeffs.size() != basis.size()) throw ValidationError("coefficient count mismatch");
    grid.validate(sys);
    std::vector<double> e(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const double arg = basis.modes[k].lambda_bar * (sys.tf - t);
        if (arg > 700.0) throw NumericalError("amplification overflow");
        e[k] = std::exp(arg) * y_mode(basis.modes[k].m, y0, c);
    }
    SampledField out{grid, {}, {}, t};
    for (Slab s : {Slab::left, Slab::right}) {
        const auto& cf = coeffs.coeffs(s);
        for (double x : grid.nodes(s)) {
            double acc = 0.0;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                acc += cf[k] * e[k] * x_mode(basis.modes[k], sys, x, s);
            }
            out.values(s).push_back(acc);
        }
    }
    return out;
}

SampledField forward_2d_slice(const Basis2D& basis, const SampledField& initial_slice, double y0,
                              const Grid& grid, NodePolicy policy) {
    const auto& sys = basis.sys;
    CoeffVector c = slice_coefficients(basis, initial_slice, y0, policy);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double f = std::exp(-basis.modes[k].lambda_bar * (sys.tf - sys.t0));
        c.C_b[k] *= f;
        c.C_a[k] *= f;
    }
    return synthesize_2d_slice(basis, c, y0, sys.tf, grid);
}

SampledField reconstruct_2d_slice(const Basis2D& basis, const SampledField& measured_tf,
                                  double y0, double t, NodePolicy policy) {
    const CoeffVector c = slice_coefficients(basis, measured_tf, y0, policy);
    return synthesize_2d_slice(basis, c, y0, t, measured_tf.grid);
}

}  // namespace twoslab
