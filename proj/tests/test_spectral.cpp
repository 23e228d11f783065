#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "twoslab/spectral.hpp"

using namespace twoslab;
using std::numbers::pi;

namespace {

SampledField sample_series(const EigenBasis& B, const std::vector<double>& c, const Grid& g) {
    return synthesize(B, CoeffVector::shared(c), B.system().tf, g);
}

double rel_l2(const SampledField& u, const SampledField& v) {
    SampledField zero = v;
    for (auto& x : zero.values_b) x = 0.0;
    for (auto& x : zero.values_a) x = 0.0;
    return discrete_l2_distance(u, v) / discrete_l2_distance(v, zero);
}

}  // namespace

TEST_CASE("design matrix entries") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 6);
    const DesignMatrix d = design_matrix(B, uniform_grid(sys, 9).nodes_b, Slab::left, 7);
    for (Eigen::Index j = 0; j < d.A.rows(); ++j) CHECK(d.A(j, 0) == 1.0);
    CHECK(d.condition >= 1.0);
    const DesignMatrix one = design_matrix(B, {0.0}, Slab::right, 7);
    for (Eigen::Index k = 0; k < 7; ++k) CHECK(one.A(0, k) == doctest::Approx(1.0).epsilon(1e-14));

    const SlabSystem ex = unit_system(5.0, 3.0);
    const EigenBasis E = EigenBasis::build(ex, 2);
    const std::vector<double> nodes{0.0, 0.75, 1.5, 2.25, 3.0};
    const DesignMatrix m = design_matrix(E, nodes, Slab::right, 3);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        for (std::size_t k = 0; k < 3; ++k) {
            const double l = k * pi / 8.0;
            const double expect = std::cos(l * (nodes[j] - 3.0)) / std::cos(l * 3.0);
            CHECK(m.A(j, k) == doctest::Approx(expect).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(design_matrix(E, {-1.0}, Slab::right, 2), ValidationError);
}

TEST_CASE("strict node indices spread over the grid") {
    CHECK(strict_node_indices(20, 4) == std::vector<std::size_t>{0, 6, 13, 19});
    CHECK(strict_node_indices(20, 1) == std::vector<std::size_t>{0});
    CHECK(strict_node_indices(5, 5) == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK_THROWS_AS(strict_node_indices(3, 4), ValidationError);
}

TEST_CASE("recover_coefficients reproduces basis data") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 8);
    const Grid g = uniform_grid(sys, 20);
    for (NodePolicy p : {NodePolicy::least_squares, NodePolicy::strict}) {
        const CoeffVector c = recover_coefficients(B, sample_series(B, {0, 1, 0, 0, 0, 0}, g), 6, p);
        for (std::size_t n = 0; n < 6; ++n) {
            CHECK(std::abs(c.C_b[n] - (n == 1 ? 1.0 : 0.0)) <= 1e-9);
            CHECK(std::abs(c.C_a[n] - (n == 1 ? 1.0 : 0.0)) <= 1e-9);
        }
    }
    const CoeffVector z = recover_coefficients(B, sample_series(B, {0, 0, 0}, g), 5);
    for (double v : z.C_b) CHECK(v == 0.0);
    const Grid g12 = uniform_grid(sys, 12);
    const CoeffVector r = recover_coefficients(B, sample_series(B, {0, 1, 2, 3, 4, 5}, g12), 6);
    for (std::size_t n = 0; n < 6; ++n) {
        CHECK(r.C_b[n] == doctest::Approx(double(n)).epsilon(1e-8));
        CHECK(r.C_a[n] == doctest::Approx(double(n)).epsilon(1e-8));
    }
    CHECK(r.consistent(1e-8));
}

TEST_CASE("recover_coefficients errors") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 8);
    const Grid g = uniform_grid(sys, 4);
    CHECK_THROWS_AS(recover_coefficients(B, sample_series(B, {1}, g), 6), ValidationError);
    const auto pairs = find_eigenvalues(sys, 2);
    const EigenBasis dup(sys, {pairs[0], pairs[1], pairs[1]}, pairs[1].lambda_bar);
    const Grid g10 = uniform_grid(sys, 10);
    try {
        recover_coefficients(dup, sample_series(B, {1}, g10), 3);
        FAIL("expected a rank error");
    } catch (const RankDeficientError& e) {
        CHECK(e.condition() > kConditionLimit);
    }
}

TEST_CASE("projection of eigenfunctions and constants") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 8);
    const CoeffVector c3 = project_coefficients(B, series_field(B, CoeffVector::shared({0, 0, 0, 1}), sys.tf), 9);
    for (std::size_t n = 0; n < 9; ++n) CHECK(std::abs(c3.C_b[n] - (n == 3 ? 1.0 : 0.0)) <= 1e-8);
    PiecewiseField one{[](double) { return 1.0; }, [](double) { return 1.0; }, {}};
    const CoeffVector c0 = project_coefficients(B, one, 9);
    for (std::size_t n = 0; n < 9; ++n) CHECK(std::abs(c0.C_a[n] - (n == 0 ? 1.0 : 0.0)) <= 1e-8);
    CHECK(c0.mismatch() == 0.0);
}

TEST_CASE("projection of Example 2 data matches a fine joint weighted least-squares oracle") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 12);
    const PiecewiseField f = oracle::example2_initial(sys);
    const CoeffVector c = project_coefficients(B, f, 13);
    const auto ref = oracle::joint_weighted_ls(B, f, 13, 20001);
    for (std::size_t n = 0; n < 13; ++n) CHECK(c.C_b[n] == doctest::Approx(ref[n]).epsilon(1e-4).scale(1.0));
}

TEST_CASE("collocation and projection agree on in-span data") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 7);
    const std::vector<double> truth{0.3, -1.0, 0.5, 0.25, -0.2, 0.1, 0.05, -0.02};
    const CoeffVector cs = CoeffVector::shared(truth);
    const Grid g = uniform_grid(sys, 4 * truth.size());
    const CoeffVector rec = recover_coefficients(B, synthesize(B, cs, sys.tf, g), truth.size());
    const CoeffVector prj = project_coefficients(B, series_field(B, cs, sys.tf), truth.size());
    for (std::size_t n = 0; n < truth.size(); ++n) {
        CHECK(std::abs(rec.C_b[n] - prj.C_b[n]) <= 1e-6);
        CHECK(std::abs(rec.C_a[n] - prj.C_a[n]) <= 1e-6);
    }
}

TEST_CASE("trapezoid projection of sampled data converges") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 3);
    const CoeffVector cs = CoeffVector::shared({0.5, 1.0, 0.0, -0.5});
    const SampledField fine = synthesize(B, cs, sys.tf, uniform_grid(sys, 4001));
    const CoeffVector p = project_coefficients(B, fine, 4);
    for (std::size_t n = 0; n < 4; ++n) CHECK(std::abs(p.C_b[n] - cs.C_b[n]) <= 1e-5);
}

TEST_CASE("synthesis in time") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 5);
    const Grid g = uniform_grid(sys, 7);
    const CoeffVector c = CoeffVector::shared({0.0, 1.0});
    const SampledField at_tf = synthesize(B, c, sys.tf, g);
    const SampledField at_t0 = synthesize(B, c, sys.t0, g);
    const double amp = std::exp(B.mode(1).pair.lambda_bar * (sys.tf - sys.t0));
    for (std::size_t j = 0; j < g.nodes_b.size(); ++j) {
        CHECK(at_tf.values_b[j] == doctest::Approx(B.phi(1, g.nodes_b[j], Slab::left)));
        CHECK(at_t0.values_b[j] == doctest::Approx(amp * B.phi(1, g.nodes_b[j], Slab::left)));
    }
    CHECK(at_t0.time == sys.t0);
    CHECK_THROWS_AS(synthesize(B, c, sys.tf + 1.0, g), ValidationError);
}

TEST_CASE("round trip through recovery reproduces data") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 9);
    const Grid g = uniform_grid(sys, 10);
    const SampledField f = sample_series(B, {1, -2, 0.5, 0.3, -0.1, 0.7, 0.2, 0.05, -0.3, 0.4}, g);
    const SampledField back = synthesize(B, recover_coefficients(B, f, 10), sys.tf, g);
    CHECK(rel_l2(back, f) <= 1e-8);
}

TEST_CASE("amplification overflow guard") {
    const SlabSystem sys = copper_molybdenum(5.0, 3.0, 0.0, 10.0);
    const EigenBasis B = EigenBasis::build(sys, 50);
    CHECK_THROWS_WITH_AS(amplification(B, 51, 0.0), "amplification overflow", NumericalError);
    CHECK_NOTHROW(amplification(B, 51, sys.tf));
    const auto e = amplification(B, 3, 9.0);
    CHECK(e[2] == doctest::Approx(std::exp(B.mode(2).pair.lambda_bar)));
}

TEST_CASE("series gradient matches a central difference") {
    const SlabSystem sys = copper_molybdenum();
    const EigenBasis B = EigenBasis::build(sys, 6);
    const CoeffVector c{{0.1, 0.4, -0.3, 0.2, 0.0, 0.1, -0.05}, {0.2, 0.3, -0.1, 0.2, 0.1, 0.0, 0.05}};
    const PiecewiseField f = series_field(B, c, 0.05);
    const PiecewiseField d = series_gradient(B, c, 0.05);
    const double h = 1e-5;
    for (double x : {-4.0, -1.3, 0.7, 2.2}) {
        const Slab s = x < 0 ? Slab::left : Slab::right;
        CHECK(d(x, s) == doctest::Approx((f(x + h, s) - f(x - h, s)) / (2 * h)).epsilon(1e-7));
        CHECK(f(x, s) == doctest::Approx(evaluate(B, c, 0.05, x, s)));
    }
    CHECK(max_wavenumber(B, 7) == doctest::Approx(B.mode(6).pair.lambda_a));
}
