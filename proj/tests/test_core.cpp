#include <cmath>

#include "doctest.h"
#include "twoslab/core.hpp"

using namespace twoslab;

TEST_CASE("validate_system accepts the explicit unit system") {
    const SlabSystem sys = unit_system(5.0, 3.0, 0.0, 0.1);
    CHECK_NOTHROW(validate_system(sys));
    CHECK(sys.a == 3.0);
    CHECK(sys.b == 5.0);
}

TEST_CASE("validate_system names the first violated invariant") {
    SlabSystem sys = unit_system(5.0, 3.0);
    sys.a = 0.0;
    CHECK_THROWS_WITH_AS(validate_system(sys), "a must be positive", ValidationError);
    sys = unit_system(5.0, 3.0, 0.0, 0.0);
    CHECK_THROWS_WITH_AS(validate_system(sys), "empty time window", ValidationError);
    sys = unit_system(5.0, 3.0);
    sys.mat_a.kappa = -1.0;
    CHECK_THROWS_AS(validate_system(sys), ValidationError);
    sys = unit_system(5.0, 3.0);
    sys.c = 0.0;
    CHECK_THROWS_WITH_AS(validate_system(sys), "c must be positive", ValidationError);
}

TEST_CASE("rho_c times kappa equals K without override") {
    const SlabSystem sys = copper_molybdenum();
    for (const Material& m : {sys.mat_b, sys.mat_a}) {
        CHECK(m.rho_c() * m.kappa == doctest::Approx(m.K).epsilon(1e-15));
    }
    Material m = sys.mat_b;
    m.rho_c_override = 0.838 / 3.42;
    CHECK(m.rho_c() == 0.838 / 3.42);
    CHECK(m.weight() == doctest::Approx(3.42 / 0.838));
}

TEST_CASE("copper/molybdenum parameters") {
    const SlabSystem sys = copper_molybdenum();
    CHECK(sys.mat_b.kappa == 0.838);
    CHECK(sys.mat_a.kappa == 0.339);
    CHECK(sys.mat_b.K == 3.42);
    CHECK(sys.mat_a.K == 1.05);
    CHECK(sys.b == 5.0);
    CHECK(sys.a == 3.0);
    CHECK(sys.tf == 0.1);
}

TEST_CASE("uniform_grid endpoints and spacing") {
    const SlabSystem sys = unit_system(5.0, 3.0);
    Grid g = uniform_grid(sys, 2);
    CHECK(g.nodes_b == std::vector<double>{-5.0, 0.0});
    CHECK(g.nodes_a == std::vector<double>{0.0, 3.0});
    g = uniform_grid(sys, 21);
    for (std::size_t i = 1; i < 21; ++i) {
        CHECK(g.nodes_b[i] - g.nodes_b[i - 1] == doctest::Approx(0.25));
        CHECK(g.nodes_a[i] - g.nodes_a[i - 1] == doctest::Approx(0.15));
    }
    g = uniform_grid(unit_system(1.0, 1.0), 3);
    CHECK(g.nodes_b == std::vector<double>{-1.0, -0.5, 0.0});
    CHECK_THROWS_AS(uniform_grid(sys, 1), ValidationError);
}

TEST_CASE("uniform_grid nodes are sorted, in bounds, and counted") {
    const SlabSystem sys = copper_molybdenum();
    for (std::size_t n : {2u, 3u, 7u, 20u, 101u}) {
        const Grid g = uniform_grid(sys, n);
        CHECK(g.nodes_b.size() == n);
        CHECK(g.nodes_a.size() == n);
        CHECK(g.nodes_b.front() == -sys.b);
        CHECK(g.nodes_b.back() == 0.0);
        CHECK(g.nodes_a.front() == 0.0);
        CHECK(g.nodes_a.back() == sys.a);
        for (std::size_t i = 1; i < n; ++i) {
            CHECK(g.nodes_b[i] > g.nodes_b[i - 1]);
            CHECK(g.nodes_a[i] > g.nodes_a[i - 1]);
        }
        CHECK_NOTHROW(g.validate(sys));
    }
}

TEST_CASE("grid validation rejects out-of-slab and unsorted nodes") {
    const SlabSystem sys = unit_system(1.0, 1.0);
    Grid g{{-1.0, 0.5}, {0.0, 1.0}};
    CHECK_THROWS_AS(g.validate(sys), ValidationError);
    g = Grid{{-0.5, -1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(g.validate(sys), ValidationError);
}

TEST_CASE("sampled fields check sizes and finiteness") {
    const Grid g = uniform_grid(unit_system(1.0, 1.0), 3);
    SampledField f{g, {1, 2, 3}, {3, 2, 1}, 0.0};
    CHECK_NOTHROW(f.validate());
    f.values_a.pop_back();
    CHECK_THROWS_AS(f.validate(), ValidationError);
    f.values_a = {1, NAN, 1};
    CHECK_THROWS_AS(f.validate(), ValidationError);
}

TEST_CASE("sample and interpolate") {
    const SlabSystem sys = unit_system(1.0, 1.0);
    PiecewiseField f;
    f.left = [](double x) { return 2.0 * x; };
    f.right = [](double x) { return -x; };
    const SampledField s = sample(f, uniform_grid(sys, 5), 0.25);
    CHECK(s.time == 0.25);
    CHECK(s.values_b.front() == -2.0);
    CHECK(s.values_a.back() == -1.0);
    const PiecewiseField g = interpolate(s);
    CHECK(g(-0.3, Slab::left) == doctest::Approx(-0.6));
    CHECK(g(0.6, Slab::right) == doctest::Approx(-0.6));
}

TEST_CASE("regularization threshold") {
    const RegParams r{1e-2, 0.05, 0.5};
    CHECK(r.threshold(0.1) == doctest::Approx(0.25 * std::log(100.0)).epsilon(1e-14));
    CHECK(r.threshold(0.1) == doctest::Approx(1.15129).epsilon(1e-5));
    const RegParams r2{1e-6, 0.01, 1.0};
    CHECK(r2.threshold(0.1) == doctest::Approx(1.38155).epsilon(1e-5));
    CHECK_THROWS_AS((RegParams{0.0, 0.05, 0.5}.validate()), ValidationError);
    CHECK_THROWS_AS((RegParams{1.0, 0.05, 0.5}.validate()), ValidationError);
    CHECK_THROWS_AS((RegParams{0.1, 1.0, 0.5}.validate()), ValidationError);
    CHECK_THROWS_AS((RegParams{0.1, 0.5, 1.5}.validate()), ValidationError);
    CHECK_NOTHROW((RegParams{0.1, 0.5, 1.0}.validate()));
}

TEST_CASE("discrete L2 uses the trapezoid rule") {
    CHECK(discrete_l2({0.0, 1.0}, {1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(discrete_l2({0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}) == 0.0);
    const Grid g = uniform_grid(unit_system(1.0, 1.0), 2);
    const SampledField u{g, {1, 1}, {1, 1}, 0.0};
    const SampledField v{g, {0, 0}, {0, 0}, 0.0};
    CHECK(discrete_l2_distance(u, v) == doctest::Approx(std::sqrt(2.0)));
}
