#include "twoslab/eigensolver.hpp"

#include <algorithm>
#include <cmath>

#include "twoslab/detail/root_scan.hpp"

namespace twoslab {

namespace {

void validate_options(const EigenScanOptions& o) {
    if (!(o.d0 > 0.0)) throw ValidationError("d0 must be positive");
    if (!(o.delta > 0.0)) throw ValidationError("delta must be positive");
    if (!(o.scan_step > 0.0)) throw ValidationError("scan_step must be positive");
    if (!(o.refine_tol > 0.0)) throw ValidationError("refine_tol must be positive");
}

EigenValuePair make_pair(std::size_t n, double lambda_b, const SlabSystem& sys) {
    return EigenValuePair{n, lambda_b, lambda_a_of(lambda_b, sys),
                          sys.mat_b.kappa * lambda_b * lambda_b};
}

detail::RootScanner make_scanner(const SlabSystem& sys, const EigenScanOptions& opts) {
    return detail::RootScanner([&sys](double l) { return eigen_f(l, sys); }, 0.0, opts.scan_step,
                               opts.refine_tol);
}

}  // namespace

double eigen_f(double lambda_b, const SlabSystem& sys) {
    const double kb = sys.mat_b.kappa;
    const double ka = sys.mat_a.kappa;
    const double la = std::sqrt(kb / ka) * lambda_b;
    return sys.mat_b.K / std::sqrt(kb) * std::sin(lambda_b * sys.b) * std::cos(la * sys.a) +
           sys.mat_a.K / std::sqrt(ka) * std::sin(la * sys.a) * std::cos(lambda_b * sys.b);
}

double lambda_a_of(double lambda_b, const SlabSystem& sys) {
    return std::sqrt(sys.mat_b.kappa / sys.mat_a.kappa) * lambda_b;
}

std::vector<EigenValuePair> find_eigenvalues(const SlabSystem& sys, std::size_t N,
                                             const EigenScanOptions& opts) {
    validate_system(sys);
    validate_options(opts);
    auto scanner = make_scanner(sys, opts);
    const std::size_t want = N + 1;
    double d = opts.d0;
    scanner.advance_to(d);
    double expansions = 0.0;
    while (scanner.roots().size() < want) {
        expansions += 1.0;
        if (expansions > opts.max_expansions) {
            throw NumericalError("eigenvalue scan exceeded its expansion cap");
        }
        d = opts.d0 + expansions * opts.delta;
        scanner.advance_to(d);
    }
    std::vector<EigenValuePair> out;
    out.reserve(want);
    for (std::size_t n = 0; n < want; ++n) out.push_back(make_pair(n, scanner.roots()[n], sys));
    return out;
}

std::vector<EigenValuePair> find_eigenvalues_below(const SlabSystem& sys, double lambda_bar_max,
                                                   const EigenScanOptions& opts) {
    validate_system(sys);
    validate_options(opts);
    if (!(lambda_bar_max >= 0.0)) throw ValidationError("lambda_bar bound must be non-negative");
    auto scanner = make_scanner(sys, opts);
    const double lb_max = std::sqrt(lambda_bar_max / sys.mat_b.kappa);
    scanner.advance_to(lb_max + 2.0 * opts.scan_step);
    std::vector<EigenValuePair> out;
    for (double root : scanner.roots()) {
        auto p = make_pair(out.size(), root, sys);
        if (p.lambda_bar > lambda_bar_max) break;
        out.push_back(p);
    }
    return out;
}

namespace {

struct Residual {
    double g1;
    double g2;
    double norm() const { return std::hypot(g1, g2); }
};

Residual newton_residual(double lb, double la, const SlabSystem& sys) {
    const double kb = sys.mat_b.kappa;
    const double ka = sys.mat_a.kappa;
    const double cb = sys.mat_b.K / std::sqrt(kb);
    const double ca = sys.mat_a.K / std::sqrt(ka);
    return {kb * lb * lb - ka * la * la,
            cb * std::sin(lb * sys.b) * std::cos(la * sys.a) +
                ca * std::sin(la * sys.a) * std::cos(lb * sys.b)};
}

}  // namespace

NewtonDemoReport newton_demo(const SlabSystem& sys, std::span<const double> guesses,
                             std::size_t iters, double stop_delta) {
    validate_system(sys);
    if (iters < 1) throw ValidationError("iters must be at least 1");
    if (guesses.size() < 2 || guesses.size() % 2 != 0) {
        throw ValidationError("guesses must hold 2N+2 values");
    }
    const std::size_t pairs = guesses.size() / 2;
    const double kb = sys.mat_b.kappa;
    const double ka = sys.mat_a.kappa;
    const double cb = sys.mat_b.K / std::sqrt(kb);
    const double ca = sys.mat_a.K / std::sqrt(ka);
    const double a = sys.a;
    const double b = sys.b;
    const double accept = std::sqrt(stop_delta);

    NewtonDemoReport report;
    for (std::size_t i = 0; i < pairs; ++i) {
        double lb = guesses[i];
        double la = guesses[i + pairs];
        bool diverged = false;
        for (std::size_t it = 0; it < iters; ++it) {
            const Residual r = newton_residual(lb, la, sys);
            if (r.norm() < stop_delta) break;
            const double sb = std::sin(lb * b), cbb = std::cos(lb * b);
            const double sa = std::sin(la * a), caa = std::cos(la * a);
            const double j11 = 2.0 * kb * lb;
            const double j12 = -2.0 * ka * la;
            const double j21 = cb * b * cbb * caa - ca * b * sa * sb;
            const double j22 = -cb * a * sb * sa + ca * a * caa * cbb;
            const double det = j11 * j22 - j12 * j21;
            if (!std::isfinite(det) || std::abs(det) < 1e-300) {
                diverged = true;
                break;
            }
            const double s1 = -(r.g1 * j22 - j12 * r.g2) / det;
            const double s2 = -(j11 * r.g2 - j21 * r.g1) / det;
            // halve the step until the residual stops growing
            double step = 1.0;
            for (int k = 0; k < 6; ++k) {
                if (newton_residual(lb + step * s1, la + step * s2, sys).norm() <= r.norm()) break;
                step *= 0.5;
            }
            lb += step * s1;
            la += step * s2;
            if (!std::isfinite(lb) || !std::isfinite(la)) {
                diverged = true;
                break;
            }
            if (std::hypot(step * s1, step * s2) < stop_delta) break;
        }
        if (diverged) continue;
        if (newton_residual(lb, la, sys).norm() > accept || lb < -accept) continue;
        report.roots_found.push_back(std::max(lb, 0.0));
    }

    std::vector<double> sorted = report.roots_found;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i == 0 || sorted[i] - sorted[i - 1] > accept) ++report.distinct_count;
    }
    report.missed = report.distinct_count < pairs;
    return report;
}

}  // namespace twoslab
