#pragma once

#include <cstddef>
#include <vector>

#include "twoslab/core.hpp"
#include "twoslab/eigensolver.hpp"
#include "twoslab/spectral.hpp"

namespace twoslab {

/// Tensor-product eigen-element X_n(x) Y_m(y) of the bilayer.
struct Mode2D {
    std::size_t m{};
    std::size_t n{};
    double mu{};
    double nu_b{};
    double nu_a{};
    double lambda_bar{};
    bool degenerate_interface{};
    double amp_b{1.0};
    double amp_a{1.0};
};

/// Modes with lambda_bar <= n_eps, ordered by lambda_bar, then m, then n.
struct Basis2D {
    SlabSystem sys;
    double n_eps{};
    std::vector<Mode2D> modes;

    std::size_t size() const { return modes.size(); }
};

/// nu_a from nu_b and mu via the shared time rate. Throws ValidationError
/// "evanescent branch" when the radicand is negative.
double nu_a_of(double nu_b, double mu, const SlabSystem& sys);

/// K_b nu_b sin(nu_b b) cos(nu_a a) + K_a nu_a sin(nu_a a) cos(nu_b b),
/// with nu_a = nu_a_of(nu_b, mu).
double eigen_f_2d(double nu_b, double mu, const SlabSystem& sys);

/// Every mode with lambda_bar <= n_eps. Requires sys.c.
Basis2D find_modes_2d(const SlabSystem& sys, double n_eps, const EigenScanOptions& opts = {});

/// Transverse factor: sqrt(1/c) for m = 0, sqrt(2/c) cos(m pi y/c) otherwise.
double y_mode(std::size_t m, double y, double c);
/// Longitudinal factor on slab s, equal to 1 at x = 0 unless degenerate.
double x_mode(const Mode2D& mode, const SlabSystem& sys, double x, Slab s);
double phi_2d(const Mode2D& mode, const SlabSystem& sys, double x, double y);

/// Slice design matrix with entries X_n(x_j) Y_m(y0).
DesignMatrix slice_design_matrix(const Basis2D& basis, const std::vector<double>& nodes, Slab s,
                                 double y0);

/// Per-slab coefficients of every basis mode from data on the line y = y0.
CoeffVector slice_coefficients(const Basis2D& basis, const SampledField& slice, double y0,
                               NodePolicy policy = NodePolicy::least_squares);

/// Series on the line y = y0 at time t.
SampledField synthesize_2d_slice(const Basis2D& basis, const CoeffVector& coeffs, double y0,
                                 double t, const Grid& grid);

/// Forward problem on the slice: coefficients from the initial slice at t0,
/// decayed to tf.
SampledField forward_2d_slice(const Basis2D& basis, const SampledField& initial_slice, double y0,
                              const Grid& grid, NodePolicy policy = NodePolicy::least_squares);

/// Cut-off reconstruction at time t from the measured slice at tf.
SampledField reconstruct_2d_slice(const Basis2D& basis, const SampledField& measured_tf,
                                  double y0, double t,
                                  NodePolicy policy = NodePolicy::least_squares);

}  // namespace twoslab
