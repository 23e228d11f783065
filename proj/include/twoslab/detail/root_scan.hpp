#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace twoslab::detail {

/// Incremental sign-change scan on the uniform grid origin + k*step,
/// refining each bracket by bisection. A node where f vanishes exactly is a
/// root. A local minimum of |f| below `tangency_tol` without a sign change
/// is refined by golden-section search and kept if it stays below the
/// tolerance.
class RootScanner {
public:
    RootScanner(std::function<double(double)> f, double origin, double step, double refine_tol,
                double tangency_tol = 1e-12);

    /// Scans every grid node in (last scanned, limit].
    void advance_to(double limit);

    /// Roots found so far, ascending.
    const std::vector<double>& roots() const { return roots_; }

    double scanned_to() const { return x_of(k_); }

private:
    double x_of(std::size_t k) const { return origin_ + static_cast<double>(k) * step_; }
    void add_root(double x);
    double bisect(double lo, double hi, double f_lo) const;
    void check_tangency(std::size_t k);

    std::function<double(double)> f_;
    double origin_;
    double step_;
    double tol_;
    double tangency_tol_;
    std::size_t k_ = 0;
    double f_prev_ = 0.0;   // f at node k_
    double f_prev2_ = 0.0;  // f at node k_-1
    std::vector<double> roots_;
};

}  // namespace twoslab::detail
