#include "twoslab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twoslab {

namespace {

double w_min(const SlabSystem& sys) {
    return std::min({sys.mat_b.weight(), sys.mat_a.weight(), 1.0});
}

double w_max(const SlabSystem& sys) {
    return std::max({sys.mat_b.weight(), sys.mat_a.weight(), 1.0});
}

double k_max(const SlabSystem& sys) { return std::max({sys.mat_b.K, sys.mat_a.K, 1.0}); }

void check_time(const SlabSystem& sys, double t) {
    if (!(t >= sys.t0 && t <= sys.tf)) throw ValidationError("time outside [t0, tf]");
}

CoeffVector decayed(const EigenBasis& basis, CoeffVector c) {
    const auto& sys = basis.system();
    for (std::size_t n = 0; n < c.size(); ++n) {
        const double f = std::exp(-basis.mode(n).pair.lambda_bar * (sys.tf - sys.t0));
        c.C_b[n] *= f;
        c.C_a[n] *= f;
    }
    return c;
}

double series_norm_sq(const EigenBasis& basis, const CoeffVector& c, double t) {
    if (c.size() == 0) return 0.0;
    return field_norm_sq(basis.system(), series_field(basis, c, t), max_wavenumber(basis, c.size()));
}

bool upper_holds(double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-8); }

SampledField difference(const SampledField& u, const SampledField& v) {
    u.validate();
    v.validate();
    if (u.grid.nodes_b != v.grid.nodes_b || u.grid.nodes_a != v.grid.nodes_a) {
        throw ValidationError("fields live on different grids");
    }
    SampledField d = u;
    for (Slab s : {Slab::left, Slab::right}) {
        auto& out = d.values(s);
        const auto& w = v.values(s);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= w[i];
    }
    return d;
}

double lerp_time(const std::vector<double>& ts, const std::vector<double>& ys, double t) {
    if (t <= ts.front()) return ys.front();
    if (t >= ts.back()) return ys.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return (1.0 - w) * ys[i - 1] + w * ys[i];
}

}  // namespace

double choose_n_eps(double epsilon, double beta, double gamma, double tf) {
    return RegParams{epsilon, beta, gamma}.threshold(tf);
}

AdmissibleSet admissible_set(const EigenBasis& basis, double n_eps) {
    if (!(n_eps >= 0.0)) throw ValidationError("n_eps must be non-negative");
    if (n_eps > basis.complete_to()) {
        throw NumericalError("basis does not resolve the cut-off threshold");
    }
    AdmissibleSet out{n_eps, {}};
    for (std::size_t n = 0; n < basis.size(); ++n) {
        if (basis.mode(n).pair.lambda_bar <= n_eps) out.indices.push_back(n);
        else break;
    }
    return out;
}

SampledField forward_solve(const EigenBasis& basis, const SampledField& initial,
                           std::size_t mode_count, const Grid& grid, NodePolicy policy) {
    const auto& sys = basis.system();
    grid.validate(sys);
    const CoeffVector c = decayed(basis, recover_coefficients(basis, initial, mode_count, policy));
    return sample(series_field(basis, c, sys.tf), grid, sys.tf);
}

SampledField forward_solve(const EigenBasis& basis, const PiecewiseField& initial,
                           std::size_t mode_count, const Grid& grid) {
    const auto& sys = basis.system();
    grid.validate(sys);
    const CoeffVector c = decayed(basis, project_coefficients(basis, initial, mode_count));
    return sample(series_field(basis, c, sys.tf), grid, sys.tf);
}

CoeffVector cutoff_coefficients(const EigenBasis& basis, const SampledField& measured_tf,
                                double n_eps, const ReconstructOptions& opts) {
    const AdmissibleSet theta = admissible_set(basis, n_eps);
    if (opts.method == CoeffMethod::projection) {
        return project_coefficients(basis, interpolate(measured_tf), theta.size());
    }
    return recover_coefficients(basis, measured_tf, theta.size(), opts.policy);
}

SampledField cutoff_reconstruct(const EigenBasis& basis, const SampledField& measured_tf,
                                double n_eps, double t, const ReconstructOptions& opts) {
    check_time(basis.system(), t);
    const CoeffVector c = cutoff_coefficients(basis, measured_tf, n_eps, opts);
    return synthesize(basis, c, t, measured_tf.grid);
}

SampledField cutoff_reconstruct(const EigenBasis& basis, const SampledField& measured_tf,
                                const RegParams& reg, double t, const ReconstructOptions& opts) {
    return cutoff_reconstruct(basis, measured_tf, reg.threshold(basis.system().tf), t, opts);
}

BoundCheck instability_lower_bound(const EigenBasis& basis, const CoeffVector& coeffs, double t) {
    const auto& sys = basis.system();
    check_time(sys, t);
    BoundCheck out{"instability", 0.0, 0.0, true};
    if (coeffs.size() == 0) return out;
    out.lhs = series_norm_sq(basis, coeffs, t);
    const auto e = amplification(basis, coeffs.size(), t);
    double acc = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        const double m = std::min(coeffs.C_b[n] * coeffs.C_b[n], coeffs.C_a[n] * coeffs.C_a[n]);
        acc += m * e[n] * e[n] * basis.mode(n).norm_N;
    }
    out.rhs = acc / w_max(sys);
    out.holds = out.lhs >= out.rhs - 1e-8 * out.lhs;
    return out;
}

BoundCheck stability_bound(const EigenBasis& basis, const PiecewiseField& final_field,
                           const RegParams& reg, double t) {
    const auto& sys = basis.system();
    check_time(sys, t);
    const double n_eps = reg.threshold(sys.tf);
    const AdmissibleSet theta = admissible_set(basis, n_eps);
    const CoeffVector c = project_coefficients(basis, final_field, theta.size());
    BoundCheck out{"stability", series_norm_sq(basis, c, t), 0.0, false};
    const double data = field_norm_sq(sys, final_field, max_wavenumber(basis, basis.size()),
                                      sys.mat_b.weight(), sys.mat_a.weight());
    out.rhs = n_eps * std::exp(2.0 * n_eps * (sys.tf - t)) * data / w_min(sys);
    out.holds = upper_holds(out.lhs, out.rhs);
    return out;
}

BoundCheck stability_bound(const EigenBasis& basis, const SampledField& final_field,
                           const RegParams& reg, double t) {
    return stability_bound(basis, interpolate(final_field), reg, t);
}

BoundCheck noise_gap_bound(const EigenBasis& basis, const SampledField& clean_tf,
                           const SampledField& noisy_tf, const RegParams& reg, double t) {
    const auto& sys = basis.system();
    check_time(sys, t);
    const double n_eps = reg.threshold(sys.tf);
    const AdmissibleSet theta = admissible_set(basis, n_eps);
    const CoeffVector c =
        project_coefficients(basis, interpolate(difference(clean_tf, noisy_tf)), theta.size());
    BoundCheck out{"noise_gap", series_norm_sq(basis, c, t), 0.0, false};
    out.rhs = n_eps * std::exp(2.0 * n_eps * (sys.tf - t)) *
              (sys.mat_b.weight() + sys.mat_a.weight()) * reg.epsilon * reg.epsilon / w_min(sys);
    out.holds = upper_holds(out.lhs, out.rhs);
    return out;
}

BoundCheck truncation_bound(const EigenBasis& basis, const CoeffVector& coeffs, double n_eps,
                            double t) {
    const auto& sys = basis.system();
    check_time(sys, t);
    if (!(n_eps > 0.0)) throw ValidationError("n_eps must be positive");
    const AdmissibleSet theta = admissible_set(basis, n_eps);
    CoeffVector tail = coeffs;
    for (std::size_t n = 0; n < std::min(theta.size(), tail.size()); ++n) {
        tail.C_b[n] = 0.0;
        tail.C_a[n] = 0.0;
    }
    BoundCheck out{"truncation", series_norm_sq(basis, tail, t), 0.0, false};
    double grad = 0.0;
    if (coeffs.size() > 0) {
        grad = field_norm_sq(sys, series_gradient(basis, coeffs, t),
                             max_wavenumber(basis, coeffs.size()));
    }
    out.rhs = k_max(sys) * grad / (w_min(sys) * n_eps);
    out.holds = upper_holds(out.lhs, out.rhs);
    return out;
}

BoundCheck convergence_bound(const EigenBasis& basis, const CoeffVector& coeffs,
                             const PiecewiseField& noisy_tf, const RegParams& reg, double t) {
    const auto& sys = basis.system();
    check_time(sys, t);
    const double n_eps = reg.threshold(sys.tf);
    const AdmissibleSet theta = admissible_set(basis, n_eps);
    const CoeffVector c = project_coefficients(basis, noisy_tf, theta.size());
    const PiecewiseField exact = series_field(basis, coeffs, t);
    const PiecewiseField approx = series_field(basis, c, t);
    PiecewiseField err;
    err.left = [&](double x) { return exact.left(x) - approx.left(x); };
    err.right = [&](double x) { return exact.right(x) - approx.right(x); };
    const double freq = max_wavenumber(basis, std::max(coeffs.size(), theta.size()));
    BoundCheck out{"convergence", std::sqrt(field_norm_sq(sys, err, freq)), 0.0, false};
    const double grad = coeffs.size() == 0
                            ? 0.0
                            : field_norm_sq(sys, series_gradient(basis, coeffs, t), freq);
    const double wm = w_min(sys);
    out.rhs = (std::sqrt(sys.mat_b.weight()) + std::sqrt(sys.mat_a.weight())) *
                  std::sqrt(n_eps) * std::exp(n_eps * (sys.tf - t)) * reg.epsilon /
                  std::sqrt(wm) +
              std::sqrt(k_max(sys) * grad / (wm * n_eps));
    out.holds = upper_holds(out.lhs, out.rhs);
    return out;
}

PiecewiseField Source::at(double t) const {
    PiecewiseField f;
    auto l = left;
    auto r = right;
    f.left = [l, t](double x) { return l(x, t); };
    f.right = [r, t](double x) { return r(x, t); };
    return f;
}

SourceCoefficients source_coefficients(const EigenBasis& basis, const Source& F,
                                       const std::vector<double>& times, const Grid& grid,
                                       std::size_t mode_count, NodePolicy policy) {
    const auto& sys = basis.system();
    grid.validate(sys);
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw ValidationError("time nodes must increase");
    }
    SourceCoefficients out;
    out.times = times;
    const double rb = sys.mat_b.rho_c();
    const double ra = sys.mat_a.rho_c();
    for (double t : times) {
        if (!(t >= sys.t0 && t <= sys.tf)) throw ValidationError("time node outside [t0, tf]");
        SampledField rhs{grid, {}, {}, t};
        for (double x : grid.nodes_b) rhs.values_b.push_back(F.left(x, t) / rb);
        for (double x : grid.nodes_a) rhs.values_a.push_back(F.right(x, t) / ra);
        out.D.push_back(recover_coefficients(basis, rhs, mode_count, policy));
    }
    return out;
}

std::vector<double> source_compatibility(const EigenBasis& basis, const PiecewiseField& F,
                                         std::size_t mode_count) {
    if (mode_count > basis.size()) throw ValidationError("mode_count exceeds basis size");
    const auto& sys = basis.system();
    std::vector<double> r(mode_count);
    for (std::size_t n = 0; n < mode_count; ++n) {
        const double pa = slab_inner(basis, F, n, Slab::right) / sys.mat_a.rho_c();
        const double pb = slab_inner(basis, F, n, Slab::left) / sys.mat_b.rho_c();
        r[n] = std::abs(pa - pb);
    }
    return r;
}

double simpson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) throw ValidationError("simpson needs at least 3 nodes");
    double acc = 0.0;
    const std::size_t intervals = n - 1;
    const std::size_t paired = intervals - intervals % 2;
    for (std::size_t i = 0; i + 2 <= paired; i += 2) {
        const double h0 = x[i + 1] - x[i];
        const double h1 = x[i + 2] - x[i + 1];
        const double s = h0 + h1;
        acc += s / 6.0 *
               ((2.0 - h1 / h0) * y[i] + s * s / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
    }
    if (intervals % 2 == 1) {
        const double h0 = x[n - 2] - x[n - 3];
        const double h1 = x[n - 1] - x[n - 2];
        acc += y[n - 1] * h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1)) +
               y[n - 2] * h1 * (h1 + 3.0 * h0) / (6.0 * h0) -
               y[n - 3] * h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    }
    return acc;
}

SampledField nonhomogeneous_solve(const EigenBasis& basis, const CoeffVector& C,
                                  const SourceCoefficients& D, double t, const Grid& grid) {
    const auto& sys = basis.system();
    check_time(sys, t);
    grid.validate(sys);
    if (D.times.size() != D.D.size()) throw ValidationError("source coefficients malformed");
    const std::size_t M = C.size();
    for (const auto& d : D.D) {
        if (d.size() != M) throw ValidationError("source and final coefficients differ in size");
    }
    const double span = sys.tf - sys.t0;
    const double tiny = 1e-12 * span;
    std::size_t inside = 0;
    for (double s : D.times) inside += (s >= t - tiny && s <= sys.tf + tiny) ? 1 : 0;
    if (inside < 3 || D.times.front() > t + tiny || D.times.back() < sys.tf - tiny) {
        throw ValidationError("insufficient time nodes in [t, tf]");
    }

    // integration nodes: t, interior D nodes, tf
    std::vector<double> s_nodes{t};
    for (double s : D.times) {
        if (s > t + tiny && s < sys.tf - tiny) s_nodes.push_back(s);
    }
    s_nodes.push_back(sys.tf);
    if (s_nodes.size() < 3) throw ValidationError("insufficient time nodes in [t, tf]");

    CoeffVector eff = C;
    if (M > 0) {
        const auto e = amplification(basis, M, t);
        std::vector<double> dn(D.times.size());
        std::vector<double> y(s_nodes.size());
        for (Slab sl : {Slab::left, Slab::right}) {
            auto& out = eff.coeffs(sl);
            for (std::size_t n = 0; n < M; ++n) {
                const double lbar = basis.mode(n).pair.lambda_bar;
                for (std::size_t k = 0; k < D.times.size(); ++k) dn[k] = D.D[k].coeffs(sl)[n];
                for (std::size_t i = 0; i < s_nodes.size(); ++i) {
                    y[i] = lerp_time(D.times, dn, s_nodes[i]) * std::exp(lbar * (s_nodes[i] - t));
                }
                out[n] = C.coeffs(sl)[n] * e[n] - simpson(s_nodes, y);
            }
        }
    }
    return sample(series_field(basis, eff, sys.tf), grid, t);
}

}  // namespace twoslab
