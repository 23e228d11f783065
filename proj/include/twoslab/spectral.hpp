#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "twoslab/basis.hpp"
#include "twoslab/core.hpp"

namespace twoslab {

/// Condition estimates above this are treated as numerically rank-deficient.
inline constexpr double kConditionLimit = 1e12;

/// Per-slab Fourier coefficients over the modes 0..size()-1 of a basis.
struct CoeffVector {
    std::vector<double> C_b;
    std::vector<double> C_a;

    std::size_t size() const { return C_b.size(); }
    const std::vector<double>& coeffs(Slab s) const { return s == Slab::left ? C_b : C_a; }
    std::vector<double>& coeffs(Slab s) { return s == Slab::left ? C_b : C_a; }

    /// max_n |C_bn - C_an|
    double mismatch() const;
    bool consistent(double tol) const { return mismatch() <= tol; }

    /// Same coefficients on both slabs.
    static CoeffVector shared(const std::vector<double>& c) { return CoeffVector{c, c}; }
};

struct DesignMatrix {
    Eigen::MatrixXd A;
    double condition{};  ///< ratio of extreme singular values
};

/// Which sample nodes enter the collocation solve.
enum class NodePolicy {
    least_squares,  ///< every node, overdetermined least squares
    strict,         ///< as many nodes as modes, spread evenly over the grid
};

/// Entries phi_n(x_j) on slab s for the first mode_count modes.
DesignMatrix design_matrix(const EigenBasis& basis, const std::vector<double>& nodes, Slab s,
                           std::size_t mode_count);

/// Node indices used by the strict policy: round(linspace(0, J-1, M)).
std::vector<std::size_t> strict_node_indices(std::size_t node_count, std::size_t mode_count);

/// Solves A X = B per slab with column-pivoted QR. Throws RankDeficientError
/// when a condition estimate exceeds kConditionLimit.
CoeffVector recover_coefficients(const EigenBasis& basis, const SampledField& field,
                                 std::size_t mode_count,
                                 NodePolicy policy = NodePolicy::least_squares);

/// Weighted projection N_n^{-1} [w_b <T_b, phi_bn> + w_a <T_a, phi_an>],
/// assigned to both slabs.
CoeffVector project_coefficients(const EigenBasis& basis, const PiecewiseField& field,
                                 std::size_t mode_count);
/// Same, with trapezoid-rule inner products on the field's grid.
CoeffVector project_coefficients(const EigenBasis& basis, const SampledField& field,
                                 std::size_t mode_count);

/// Time factors exp(lambda_bar_n (tf - t)); throws NumericalError
/// "amplification overflow" when an exponent exceeds 700.
std::vector<double> amplification(const EigenBasis& basis, std::size_t mode_count, double t);

/// Series value at one point using the slab's coefficients.
double evaluate(const EigenBasis& basis, const CoeffVector& coeffs, double t, double x, Slab s);

/// The truncated series as a callable field at time t. The field keeps a
/// reference to `basis`.
PiecewiseField series_field(const EigenBasis& basis, const CoeffVector& coeffs, double t);

/// Spatial derivative of the series at time t.
PiecewiseField series_gradient(const EigenBasis& basis, const CoeffVector& coeffs, double t);

/// Highest wavenumber among the first mode_count modes.
double max_wavenumber(const EigenBasis& basis, std::size_t mode_count);

/// T_N(x,t) = sum_n C_n exp(lambda_bar_n (tf-t)) phi_n(x) on the grid.
SampledField synthesize(const EigenBasis& basis, const CoeffVector& coeffs, double t,
                        const Grid& grid);

}  // namespace twoslab
