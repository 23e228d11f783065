#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twoslab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A violated input invariant (bad geometry, bad parameter, bad grid).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The computation itself failed: rank deficiency, overflow, scan cap.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A design matrix whose condition estimate exceeds the trust limit.
class RankDeficientError : public NumericalError {
public:
    RankDeficientError(const std::string& what, double condition)
        : NumericalError(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

enum class Slab { left, right };

struct Material {
    double K{};      ///< thermal conductivity
    double kappa{};  ///< thermal diffusivity
    std::optional<double> rho_c_override;

    /// Volumetric heat capacity; K/kappa unless overridden.
    double rho_c() const { return rho_c_override ? *rho_c_override : K / kappa; }

    /// Inner-product weight K/kappa of the slab.
    double weight() const { return K / kappa; }
};

/// Two slabs [-b,0] and [0,a] in perfect contact, observed on [t0,tf].
struct SlabSystem {
    double b{};
    double a{};
    std::optional<double> c;  ///< transverse length, 2D only
    Material mat_b;
    Material mat_a;
    double t0{};
    double tf{};

    const Material& material(Slab s) const { return s == Slab::left ? mat_b : mat_a; }
    double length(Slab s) const { return s == Slab::left ? b : a; }
    double lower(Slab s) const { return s == Slab::left ? -b : 0.0; }
    double upper(Slab s) const { return s == Slab::left ? 0.0 : a; }
};

/// Returns `sys` unchanged, or throws ValidationError naming the first
/// violated invariant.
SlabSystem validate_system(const SlabSystem& sys);

/// Copper (left) against molybdenum (right).
SlabSystem copper_molybdenum(double b = 5.0, double a = 3.0, double t0 = 0.0, double tf = 0.1);

/// K = kappa = 1 in both slabs; eigenvalues are k*pi/(a+b).
SlabSystem unit_system(double b, double a, double t0 = 0.0, double tf = 0.1);

struct Grid {
    std::vector<double> nodes_b;  ///< strictly increasing, within [-b,0]
    std::vector<double> nodes_a;  ///< strictly increasing, within [0,a]

    const std::vector<double>& nodes(Slab s) const { return s == Slab::left ? nodes_b : nodes_a; }
    void validate(const SlabSystem& sys) const;
};

/// Equispaced nodes including both slab endpoints; x=0 belongs to both sides.
Grid uniform_grid(const SlabSystem& sys, std::size_t points_per_slab);

struct SampledField {
    Grid grid;
    std::vector<double> values_b;
    std::vector<double> values_a;
    double time{};

    const std::vector<double>& values(Slab s) const { return s == Slab::left ? values_b : values_a; }
    std::vector<double>& values(Slab s) { return s == Slab::left ? values_b : values_a; }
    void validate() const;
};

/// A field given by one callable per slab. Breakpoints mark interior kinks
/// or jumps so quadrature can split there.
struct PiecewiseField {
    std::function<double(double)> left;
    std::function<double(double)> right;
    std::vector<double> breakpoints;

    double operator()(double x, Slab s) const { return s == Slab::left ? left(x) : right(x); }
};

/// Samples a piecewise field on a grid.
SampledField sample(const PiecewiseField& f, const Grid& grid, double time);

/// Piecewise-linear interpolant of a sampled field, with a breakpoint at
/// every node.
PiecewiseField interpolate(const SampledField& field);

struct RegParams {
    double epsilon{};
    double beta{};
    double gamma{};

    void validate() const;
    /// Cut-off threshold N_eps = beta * ln(eps^-gamma) / tf.
    double threshold(double tf) const;
};

/// Trapezoid-rule L2 norm of node values on one slab.
double discrete_l2(const std::vector<double>& nodes, const std::vector<double>& values);

/// Trapezoid-rule L2 distance between two fields on the same grid, summed
/// over both slabs in quadrature (sqrt of the sum of squares).
double discrete_l2_distance(const SampledField& lhs, const SampledField& rhs);

}  // namespace twoslab
