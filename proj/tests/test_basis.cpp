#include <chrono>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles/frozen.hpp"
#include "oracles/oracles.hpp"
#include "twoslab/basis.hpp"
#include "twoslab/quadrature.hpp"

using namespace twoslab;
using std::numbers::pi;

namespace {

double oracle_norm(const EigenBasis& B, std::size_t n, bool derivative) {
    const auto& sys = B.system();
    double acc = 0.0;
    for (Slab s : {Slab::left, Slab::right}) {
        const double w = derivative ? sys.material(s).K : sys.material(s).weight();
        acc += w * oracle::adaptive_simpson(
                       [&](double x) {
                           const double v = derivative ? B.phi_prime(n, x, s) : B.phi(n, x, s);
                           return v * v;
                       },
                       sys.lower(s), sys.upper(s), 1e-12);
    }
    return acc;
}

}  // namespace

TEST_CASE("gauss_legendre exactness and oscillatory accuracy") {
    CHECK(gauss_legendre([](double) { return 1.0; }, 0.0, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gauss_legendre([](double) { return 1.0; }, 0.0, 1.0, 7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gauss_legendre([](double x) { return x * x; }, 0.0, 1.0, 2) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    auto f = [](double x) { return std::cos(19.6 * x); };
    const double ref = oracle::adaptive_simpson(f, 0.0, 3.0, 1e-15, 256);
    CHECK(std::abs(gauss_legendre(f, 0.0, 3.0, 200) - ref) <= 1e-12);
    CHECK(std::abs(ref - std::sin(19.6 * 3.0) / 19.6) <= 1e-12);
}

TEST_CASE("oscillatory_order follows the frequency rule") {
    CHECK(oscillatory_order(0.0, 5.0) == 64);
    CHECK(oscillatory_order(20.0, 3.0) == 240);
}

TEST_CASE("eigenfunction values") {
    const SlabSystem sys = unit_system(5.0, 3.0);
    const EigenBasis B = EigenBasis::build(sys, 10);
    for (double x : {-5.0, -2.0, 0.0, 1.5, 3.0}) CHECK(B.phi(0, x) == 1.0);
    for (std::size_t k = 1; k <= 10; ++k) {
        const auto& m = B.mode(k);
        if (m.degenerate_interface) continue;
        CHECK(B.phi(k, 0.0, Slab::left) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(B.phi(k, 0.0, Slab::right) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(B.phi(k, -5.0) == doctest::Approx(1.0 / std::cos(k * pi * 5.0 / 8.0)).epsilon(1e-7));
    }
}

TEST_CASE("degenerate interface modes use the unit null vector") {
    const SlabSystem sys = unit_system(5.0, 3.0);
    const EigenBasis B = EigenBasis::build(sys, 12);
    CHECK(B.mode(4).degenerate_interface);
    CHECK(B.mode(12).degenerate_interface);
    CHECK_FALSE(B.mode(3).degenerate_interface);
    for (std::size_t k : {4u, 12u}) {
        const auto& m = B.mode(k);
        CHECK(std::hypot(m.alt_theta_b, m.alt_theta_a) == doctest::Approx(1.0));
        CHECK(m.alt_theta_b >= 0.0);
        CHECK(std::abs(B.phi(k, 0.0, Slab::left) - B.phi(k, 0.0, Slab::right)) < 1e-6);
        const double flux = sys.mat_b.K * B.phi_prime(k, 0.0, Slab::left) -
                            sys.mat_a.K * B.phi_prime(k, 0.0, Slab::right);
        CHECK(std::abs(flux) < 1e-6);
        CHECK(m.norm_N > 0.0);
    }
}

TEST_CASE("derivatives vanish at the outer walls and balance flux at the interface") {
    for (const SlabSystem& sys : {copper_molybdenum(), unit_system(5, 3)}) {
        const EigenBasis B = EigenBasis::build(sys, 30);
        for (std::size_t k = 0; k <= 30; ++k) {
            CHECK(std::abs(B.phi_prime(k, -sys.b, Slab::left)) < 1e-12 * (1 + std::abs(B.mode(k).amp_b)));
            CHECK(std::abs(B.phi_prime(k, sys.a, Slab::right)) < 1e-12 * (1 + std::abs(B.mode(k).amp_a)));
            if (B.mode(k).degenerate_interface) continue;
            const double flux = sys.mat_b.K * B.phi_prime(k, 0.0, Slab::left) -
                                sys.mat_a.K * B.phi_prime(k, 0.0, Slab::right);
            CHECK(std::abs(flux) <= 1e-10 * std::max(1.0, std::abs(sys.mat_b.K * B.phi_prime(k, 0.0, Slab::left))));
        }
        for (double x : {-3.0, -1.0, 0.5, 2.0}) CHECK(B.phi_prime(0, x, x < 0 ? Slab::left : Slab::right) == 0.0);
    }
}

TEST_CASE("zero-mode norms") {
    const EigenBasis B = EigenBasis::build(copper_molybdenum(), 3);
    CHECK(B.mode(0).norm_N == doctest::Approx(frozen::cumo_N0).epsilon(1e-14));
    CHECK(B.mode(0).norm_N == doctest::Approx(5 * 3.42 / 0.838 + 3 * 1.05 / 0.339).epsilon(1e-14));
    CHECK(B.mode(0).norm_M == 0.0);
    CHECK(weighted_inner(B, 0, 0) == doctest::Approx(frozen::cumo_N0).epsilon(1e-13));
}

TEST_CASE("explicit N_1 closed form") {
    const EigenBasis B = EigenBasis::build(unit_system(5.0, 3.0), 2);
    // lambda_1 is bisected to 1e-12 and N_1 magnifies that by about 25
    CHECK(B.mode(1).norm_N == doctest::Approx(frozen::explicit_N1).epsilon(1e-10));
    CHECK(oracle_norm(B, 1, false) == doctest::Approx(frozen::explicit_N1).epsilon(1e-9));
}

TEST_CASE("orthogonality and norm identities up to 50 modes") {
    const auto start = std::chrono::steady_clock::now();
    for (const SlabSystem& sys : {copper_molybdenum(), unit_system(5.0, 3.0)}) {
        const EigenBasis B = EigenBasis::build(sys, 50);
        std::size_t bad_off = 0, bad_der = 0;
        for (std::size_t m = 0; m <= 50; ++m) {
            const double Nm = B.mode(m).norm_N;
            CHECK(weighted_inner(B, m, m) == doctest::Approx(Nm).epsilon(1e-8));
            if (m > 0) {
                CHECK(derivative_inner(B, m, m) == doctest::Approx(B.mode(m).norm_M).epsilon(1e-8));
                CHECK(B.mode(m).norm_M ==
                      doctest::Approx(B.mode(m).pair.lambda_bar * Nm).epsilon(1e-10));
            }
            for (std::size_t n = m + 1; n <= 50; ++n) {
                const double scale = std::sqrt(Nm * B.mode(n).norm_N);
                if (std::abs(weighted_inner(B, m, n)) > 1e-8 * scale) ++bad_off;
                const double dscale = std::sqrt(std::max(B.mode(m).norm_M, 1.0) * B.mode(n).norm_M);
                if (std::abs(derivative_inner(B, m, n)) > 1e-8 * dscale) ++bad_der;
            }
        }
        CHECK(bad_off == 0);
        CHECK(bad_der == 0);
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(s < 10.0);
}

TEST_CASE("closed-form norms match an adaptive quadrature oracle") {
    for (const SlabSystem& sys : {copper_molybdenum(), unit_system(5.0, 3.0)}) {
        const EigenBasis B = EigenBasis::build(sys, 20);
        for (std::size_t n = 1; n <= 20; ++n) {
            CHECK(B.mode(n).norm_N == doctest::Approx(oracle_norm(B, n, false)).epsilon(1e-8));
            CHECK(B.mode(n).norm_M == doctest::Approx(oracle_norm(B, n, true)).epsilon(1e-8));
        }
    }
}

TEST_CASE("slab_inner and field_norm_sq respect breakpoints") {
    const SlabSystem sys = unit_system(1.0, 1.0);
    const EigenBasis B = EigenBasis::build(sys, 3);
    PiecewiseField step;
    step.left = [](double x) { return x < -0.5 ? 1.0 : 0.0; };
    step.right = [](double) { return 0.0; };
    step.breakpoints = {-0.5};
    CHECK(slab_inner(B, step, 0, Slab::left) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(field_norm_sq(sys, step, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(field_norm_sq(sys, step, 1.0, 3.0, 1.0) == doctest::Approx(1.5).epsilon(1e-14));
}
