#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "twoslab/basis.hpp"
#include "twoslab/core.hpp"
#include "twoslab/spectral.hpp"

namespace twoslab {

/// N_eps = beta*gamma*ln(1/eps)/tf.
double choose_n_eps(double epsilon, double beta, double gamma, double tf);

/// Modes with lambda_bar <= n_eps. Always a prefix of the basis.
struct AdmissibleSet {
    double n_eps{};
    std::vector<std::size_t> indices;

    std::size_t size() const { return indices.size(); }
};

/// Throws NumericalError when the basis may be missing modes below n_eps.
AdmissibleSet admissible_set(const EigenBasis& basis, double n_eps);

enum class CoeffMethod {
    collocation,  ///< design-matrix solve on the sample nodes
    projection,   ///< weighted projection of the interpolated data
};

struct ReconstructOptions {
    NodePolicy policy = NodePolicy::least_squares;
    CoeffMethod method = CoeffMethod::collocation;
};

/// Solution at tf on `grid` from initial data at t0, with mode_count modes
/// recovered by collocation on the initial samples.
SampledField forward_solve(const EigenBasis& basis, const SampledField& initial,
                           std::size_t mode_count, const Grid& grid,
                           NodePolicy policy = NodePolicy::least_squares);
/// Same, with coefficients from the weighted projection of a callable field.
SampledField forward_solve(const EigenBasis& basis, const PiecewiseField& initial,
                           std::size_t mode_count, const Grid& grid);

/// Coefficients of the retained modes, recovered from data at tf.
CoeffVector cutoff_coefficients(const EigenBasis& basis, const SampledField& measured_tf,
                                double n_eps, const ReconstructOptions& opts = {});

/// Cut-off projection solution at time t, on the measurement grid.
SampledField cutoff_reconstruct(const EigenBasis& basis, const SampledField& measured_tf,
                                double n_eps, double t, const ReconstructOptions& opts = {});
SampledField cutoff_reconstruct(const EigenBasis& basis, const SampledField& measured_tf,
                                const RegParams& reg, double t,
                                const ReconstructOptions& opts = {});

/// One numerically checked inequality.
struct BoundCheck {
    std::string name;
    double lhs{};
    double rhs{};
    bool holds{};
};

/// ||T_N(.,t)||^2 against the exponential lower bound; holds when
/// lhs >= rhs - 1e-8*lhs.
BoundCheck instability_lower_bound(const EigenBasis& basis, const CoeffVector& coeffs, double t);

/// ||P_eps T(.,t)||^2 against the continuous-dependence bound on the final
/// data. Sampled data are interpolated piecewise linearly.
BoundCheck stability_bound(const EigenBasis& basis, const PiecewiseField& final_field,
                           const RegParams& reg, double t);
BoundCheck stability_bound(const EigenBasis& basis, const SampledField& final_field,
                           const RegParams& reg, double t);

/// ||P_eps T - P_eps T^eps||^2 against the noise-amplification bound.
BoundCheck noise_gap_bound(const EigenBasis& basis, const SampledField& clean_tf,
                           const SampledField& noisy_tf, const RegParams& reg, double t);

/// ||T - P_eps T||^2 for the series `coeffs` against the gradient bound.
BoundCheck truncation_bound(const EigenBasis& basis, const CoeffVector& coeffs, double n_eps,
                            double t);

/// ||T - P_eps T^eps|| for the exact series `coeffs` and noisy final data
/// against the combined noise and truncation bound.
BoundCheck convergence_bound(const EigenBasis& basis, const CoeffVector& coeffs,
                             const PiecewiseField& noisy_tf, const RegParams& reg, double t);

/// Heat source F(x,t) per slab.
struct Source {
    std::function<double(double, double)> left;
    std::function<double(double, double)> right;

    /// The source frozen at time t.
    PiecewiseField at(double t) const;
};

/// D_n(t_k) for every time node.
struct SourceCoefficients {
    std::vector<double> times;
    std::vector<CoeffVector> D;
};

/// Solves sum_n D_n(t_k) phi_n(x_j) = F(x_j,t_k)/(rho c) per slab and node.
SourceCoefficients source_coefficients(const EigenBasis& basis, const Source& F,
                                       const std::vector<double>& times, const Grid& grid,
                                       std::size_t mode_count,
                                       NodePolicy policy = NodePolicy::least_squares);

/// Per-mode |<F_a,phi_an>/(rho_a c_a) - <F_b,phi_bn>/(rho_b c_b)|.
std::vector<double> source_compatibility(const EigenBasis& basis, const PiecewiseField& F,
                                         std::size_t mode_count);

/// Composite Simpson on non-uniform nodes; an odd final interval gets the
/// three-point end correction.
double simpson(const std::vector<double>& x, const std::vector<double>& y);

/// Series solution with source, at time t on `grid`. The time integral uses
/// composite Simpson on the D nodes in [t,tf], interpolating D at t.
SampledField nonhomogeneous_solve(const EigenBasis& basis, const CoeffVector& C,
                                  const SourceCoefficients& D, double t, const Grid& grid);

}  // namespace twoslab
