#pragma once

#include <cstddef>
#include <vector>

#include "twoslab/core.hpp"
#include "twoslab/eigensolver.hpp"

namespace twoslab {

/// Interface cosines below this magnitude switch a mode to the fallback
/// normalization.
inline constexpr double kDegenerateCos = 1e-6;

/// One eigen-element. Away from degeneracy the eigenfunction equals 1 at the
/// interface; otherwise it is scaled by the unit null vector (theta_b, theta_a)
/// of the continuity/flux system.
struct EigenMode {
    EigenValuePair pair;
    double norm_N{};
    double norm_M{};
    bool degenerate_interface{};
    double alt_theta_b{};
    double alt_theta_a{};

    /// Amplitude multiplying cos(lambda_b (x+b)) on the left slab.
    double amp_b{1.0};
    /// Amplitude multiplying cos(lambda_a (x-a)) on the right slab.
    double amp_a{1.0};

    double lambda(Slab s) const { return s == Slab::left ? pair.lambda_b : pair.lambda_a; }
};

/// Amplitudes of cos(lb(x+b)) and cos(la(x-a)) making the eigenfunction
/// continuous with balanced flux at x = 0.
struct InterfaceScaling {
    double amp_b{};
    double amp_a{};
    bool degenerate{};
};

/// 1/cos on each side, or the unit null vector of the continuity/flux
/// system (first component non-negative) when a cosine is below
/// kDegenerateCos.
InterfaceScaling interface_scaling(double lambda_b, double lambda_a, const SlabSystem& sys);

/// Builds one mode, with norms from closed forms (or quadrature when the
/// interface is degenerate).
EigenMode make_mode(const SlabSystem& sys, const EigenValuePair& pair);

/// One-sided eigenfunction value on slab s.
double phi(const EigenMode& mode, const SlabSystem& sys, double x, Slab s);
/// Eigenfunction on [-b,a]; x <= 0 uses the left branch.
double phi(const EigenMode& mode, const SlabSystem& sys, double x);
/// One-sided derivative on slab s.
double phi_prime(const EigenMode& mode, const SlabSystem& sys, double x, Slab s);

/// Closed forms of the weighted norm N and the derivative norm M.
/// Zero-mode values are b*w_b + a*w_a and 0.
double norm_N_closed(const EigenMode& mode, const SlabSystem& sys);
double norm_M_closed(const EigenMode& mode, const SlabSystem& sys);

class EigenBasis {
public:
    EigenBasis(const SlabSystem& sys, const std::vector<EigenValuePair>& pairs,
               double complete_to);

    /// First N+1 modes.
    static EigenBasis build(const SlabSystem& sys, std::size_t N, const EigenScanOptions& opts = {});
    /// Every mode with lambda_bar <= lambda_bar_max.
    static EigenBasis build_below(const SlabSystem& sys, double lambda_bar_max,
                                  const EigenScanOptions& opts = {});

    const SlabSystem& system() const { return sys_; }
    const std::vector<EigenMode>& modes() const { return modes_; }
    const EigenMode& mode(std::size_t n) const { return modes_.at(n); }
    std::size_t size() const { return modes_.size(); }

    /// Largest lambda_bar below which the basis is known to hold every mode.
    double complete_to() const { return complete_to_; }

    double phi(std::size_t n, double x, Slab s) const { return twoslab::phi(mode(n), sys_, x, s); }
    double phi(std::size_t n, double x) const { return twoslab::phi(mode(n), sys_, x); }
    double phi_prime(std::size_t n, double x, Slab s) const {
        return twoslab::phi_prime(mode(n), sys_, x, s);
    }

private:
    SlabSystem sys_;
    std::vector<EigenMode> modes_;
    double complete_to_;
};

/// w_b <phi_m, phi_n>_(-b,0) + w_a <phi_m, phi_n>_(0,a), with w = K/kappa.
double weighted_inner(const EigenBasis& basis, std::size_t m, std::size_t n);

/// K_b <phi_m', phi_n'>_(-b,0) + K_a <phi_m', phi_n'>_(0,a).
double derivative_inner(const EigenBasis& basis, std::size_t m, std::size_t n);

/// Unweighted <f, phi_n> on one slab, split at the field's breakpoints.
double slab_inner(const EigenBasis& basis, const PiecewiseField& f, std::size_t n, Slab s);

/// Squared L2 norm of a field over (-b,a); each slab scaled by `weight_b`
/// and `weight_a`. `frequency` sets the quadrature order.
double field_norm_sq(const SlabSystem& sys, const PiecewiseField& f, double frequency,
                     double weight_b = 1.0, double weight_a = 1.0);

}  // namespace twoslab
