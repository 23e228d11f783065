#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "twoslab/core.hpp"

namespace twoslab {

/// One eigenvalue of the two-slab problem. Both slabs share the time rate
/// lambda_bar = kappa_b*lambda_b^2 = kappa_a*lambda_a^2.
struct EigenValuePair {
    std::size_t n{};
    double lambda_b{};
    double lambda_a{};
    double lambda_bar{};
};

struct EigenScanOptions {
    double d0 = 10.0;           ///< initial scan bound
    double delta = 1e-3;        ///< interval expansion step
    double scan_step = 1e-3;    ///< sign-change grid spacing
    double refine_tol = 1e-12;  ///< bisection bracket width
    double max_expansions = 1e6;
};

/// Reduced dispersion function whose non-negative roots are the lambda_b:
///   (K_b/sqrt(kappa_b)) sin(lambda_b b) cos(r lambda_b a)
/// + (K_a/sqrt(kappa_a)) sin(r lambda_b a) cos(lambda_b b),  r = sqrt(kappa_b/kappa_a).
double eigen_f(double lambda_b, const SlabSystem& sys);

double lambda_a_of(double lambda_b, const SlabSystem& sys);

/// First N+1 non-negative roots of eigen_f, ascending; index 0 is lambda_b = 0.
/// The scan interval [0,d] starts at d0 and grows by delta until N+1 roots
/// are present. Throws NumericalError past d0 + max_expansions*delta.
std::vector<EigenValuePair> find_eigenvalues(const SlabSystem& sys, std::size_t N,
                                             const EigenScanOptions& opts = {});

/// Every eigenvalue with lambda_bar <= lambda_bar_max.
std::vector<EigenValuePair> find_eigenvalues_below(const SlabSystem& sys, double lambda_bar_max,
                                                   const EigenScanOptions& opts = {});

struct NewtonDemoReport {
    std::vector<double> roots_found;  ///< converged, non-negative lambda_b values
    std::size_t distinct_count{};
    bool missed{};  ///< fewer distinct roots than guesses
};

/// Runs damped Newton on the coupled system kappa_b lb^2 - kappa_a la^2 = 0,
/// dispersion(lb, la) = 0 from every guess pair. `guesses` holds 2N+2 values:
/// the N+1 lambda_b guesses followed by the N+1 lambda_a guesses.
NewtonDemoReport newton_demo(const SlabSystem& sys, std::span<const double> guesses,
                             std::size_t iters, double stop_delta);

}  // namespace twoslab
