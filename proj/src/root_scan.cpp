#include "twoslab/detail/root_scan.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace twoslab::detail {

namespace {

bool same_sign(double u, double v) { return (u < 0.0) == (v < 0.0); }

}  // namespace

RootScanner::RootScanner(std::function<double(double)> f, double origin, double step,
                         double refine_tol, double tangency_tol)
    : f_(std::move(f)), origin_(origin), step_(step), tol_(refine_tol), tangency_tol_(tangency_tol) {
    f_prev_ = f_(origin_);
    f_prev2_ = f_prev_;
    if (f_prev_ == 0.0) add_root(origin_);
}

void RootScanner::advance_to(double limit) {
    const double slack = 1e-9 * step_;
    while (x_of(k_ + 1) <= limit + slack) {
        const double x_lo = x_of(k_);
        const double x_hi = x_of(k_ + 1);
        const double f_next = f_(x_hi);
        if (f_next == 0.0) {
            add_root(x_hi);
        } else if (f_prev_ != 0.0 && !same_sign(f_prev_, f_next)) {
            add_root(bisect(x_lo, x_hi, f_prev_));
        } else if (k_ >= 1 && f_prev_ != 0.0 && f_prev2_ != 0.0 && same_sign(f_prev2_, f_prev_) &&
                   std::abs(f_prev_) < tangency_tol_ && std::abs(f_prev_) <= std::abs(f_prev2_) &&
                   std::abs(f_prev_) <= std::abs(f_next)) {
            check_tangency(k_);
        }
        f_prev2_ = f_prev_;
        f_prev_ = f_next;
        ++k_;
    }
}

void RootScanner::add_root(double x) {
    const auto it = std::lower_bound(roots_.begin(), roots_.end(), x);
    const double merge = 10.0 * tol_;
    if (it != roots_.end() && std::abs(*it - x) <= merge) return;
    if (it != roots_.begin() && std::abs(*(it - 1) - x) <= merge) return;
    roots_.insert(it, x);
}

double RootScanner::bisect(double lo, double hi, double f_lo) const {
    while (hi - lo > tol_) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f_(mid);
        if (fm == 0.0) return mid;
        if (same_sign(fm, f_lo)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void RootScanner::check_tangency(std::size_t k) {
    // golden-section minimisation of |f| on [x_{k-1}, x_{k+1}]
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = x_of(k - 1);
    double hi = x_of(k + 1);
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = std::abs(f_(c));
    double fd = std::abs(f_(d));
    for (int it = 0; it < 200 && hi - lo > tol_; ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = std::abs(f_(c));
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = std::abs(f_(d));
        }
    }
    const double x = 0.5 * (lo + hi);
    if (std::abs(f_(x)) < tangency_tol_) add_root(x);
}

}  // namespace twoslab::detail
