#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

#include "doctest.h"
#include "oracles/frozen.hpp"
#include "oracles/oracles.hpp"
#include "twoslab/bilayer2d.hpp"
#include "twoslab/evolve.hpp"

using namespace twoslab;
using std::numbers::pi;

namespace {

SlabSystem square(SlabSystem s) {
    s.c = 1.0;
    return s;
}

// Independent enumeration: for each m a fine long double scan of the 2D
// dispersion function, keeping roots with lambda_bar <= n_eps.
std::set<std::pair<std::size_t, std::size_t>> brute_modes(const SlabSystem& sys, double n_eps) {
    std::set<std::pair<std::size_t, std::size_t>> out;
    const double c = *sys.c;
    const double kb = sys.mat_b.kappa, ka = sys.mat_a.kappa, r = kb / ka;
    for (std::size_t m = 0; m < 100; ++m) {
        const double mu = m * pi / c;
        if (std::min(kb, ka) * mu * mu > n_eps) break;
        const double top2 = n_eps / kb - mu * mu;
        if (top2 < 0) continue;
        const double lo = r >= 1 ? 0.0 : std::sqrt((1 - r) * mu * mu / r);
        std::size_t n = 0;
        if (std::abs(static_cast<double>(oracle::eigen_f_2d_ld(lo, mu, sys))) <= 1e-12) out.insert({m, n++});
        for (double nb : oracle::brute_roots(
                 [&](long double x) { return oracle::eigen_f_2d_ld(lo + x, mu, sys); },
                 std::sqrt(top2) - lo + 1e-3, 1e-5)) {
            const double v = lo + nb;
            if (kb * (v * v + mu * mu) <= n_eps) out.insert({m, n++});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("nu_a relation and evanescent branch") {
    const SlabSystem cm = square(copper_molybdenum(1, 1));
    const double r = 0.838 / 0.339;
    CHECK(nu_a_of(1.0, pi, cm) == doctest::Approx(std::sqrt(r + (r - 1) * pi * pi)));
    const SlabSystem u = square(unit_system(1, 1));
    CHECK(nu_a_of(2.0, 3.0, u) == 2.0);
    SlabSystem rev = cm;
    std::swap(rev.mat_a, rev.mat_b);
    CHECK_THROWS_WITH_AS(nu_a_of(0.1, pi, rev), "evanescent branch", ValidationError);
}

TEST_CASE("2D dispersion function values") {
    const SlabSystem cm = square(copper_molybdenum(1, 1));
    CHECK(eigen_f_2d(1.0, pi, cm) == doctest::Approx(frozen::cumo_f2d_nu1_mupi).epsilon(1e-13));
    for (double nb : {0.3, 1.7, 4.2}) {
        CHECK(eigen_f_2d(nb, 2 * pi, cm) ==
              doctest::Approx(static_cast<double>(oracle::eigen_f_2d_ld(nb, 2 * pi, cm))).epsilon(1e-11));
        // mu = 0 is the 1D function up to the positive factor nu_b sqrt(kappa_b)
        CHECK(eigen_f_2d(nb, 0.0, cm) ==
              doctest::Approx(nb * std::sqrt(0.838) * eigen_f(nb, cm)).epsilon(1e-12));
    }
    SlabSystem same = cm;
    same.mat_a.kappa = same.mat_b.kappa;
    for (double nb : {0.4, 2.2}) {
        CHECK(eigen_f_2d(nb, 5.0, same) ==
              doctest::Approx(nb * std::sqrt(same.mat_b.kappa) * eigen_f(nb, same)).epsilon(1e-12));
    }
}

TEST_CASE("find_modes_2d small thresholds and ordering") {
    const SlabSystem cm = square(copper_molybdenum(1, 1));
    const Basis2D b0 = find_modes_2d(cm, 0.5);
    REQUIRE(b0.size() == 1);
    CHECK(b0.modes[0].m == 0);
    CHECK(b0.modes[0].n == 0);
    CHECK(b0.modes[0].lambda_bar == 0.0);
    const double n6 = choose_n_eps(1e-6, 0.01, 1.0, 0.1);
    CHECK(n6 == doctest::Approx(1.38155).epsilon(1e-5));
    const Basis2D b6 = find_modes_2d(cm, n6);
    REQUIRE(b6.size() == 2);
    CHECK(b6.modes[1].m == 0);
    CHECK(b6.modes[1].n == 1);
    CHECK(b6.modes[1].lambda_bar == doctest::Approx(frozen::cumo_unit_square_m0_lambda_bar1).epsilon(1e-10));
    for (const auto& m : b6.modes) CHECK(m.lambda_bar <= n6);
    CHECK_THROWS_AS(find_modes_2d(copper_molybdenum(1, 1), 1.0), ValidationError);
}

TEST_CASE("explicit separable case matches the analytic spectrum") {
    const SlabSystem u = square(unit_system(1, 1));
    const double n_eps = 60.0;
    const Basis2D B = find_modes_2d(u, n_eps);
    std::vector<double> expect;
    for (int m = 0; m < 10; ++m) {
        for (int n = 0; n < 20; ++n) {
            const double v = std::pow(n * pi / 2, 2) + std::pow(m * pi, 2);
            if (v <= n_eps) expect.push_back(v);
        }
    }
    std::sort(expect.begin(), expect.end());
    REQUIRE(B.size() == expect.size());
    for (std::size_t k = 0; k < expect.size(); ++k) CHECK(B.modes[k].lambda_bar == doctest::Approx(expect[k]).epsilon(1e-9));
    for (std::size_t k = 1; k < B.size(); ++k) {
        const auto& p = B.modes[k - 1];
        const auto& q = B.modes[k];
        CHECK(std::tie(p.lambda_bar, p.m, p.n) <= std::tie(q.lambda_bar, q.m, q.n));
    }
}

TEST_CASE("mode set equals an independent enumeration") {
    for (double n_eps : {1.38155, 15.0, 40.0}) {
        for (const SlabSystem& sys : {square(copper_molybdenum(1, 1)), square(unit_system(1, 1))}) {
            const Basis2D B = find_modes_2d(sys, n_eps);
            std::set<std::pair<std::size_t, std::size_t>> got;
            for (const auto& m : B.modes) got.insert({m.m, m.n});
            CHECK(got == brute_modes(sys, n_eps));
        }
    }
}

TEST_CASE("mode residual invariants and the 1D limit") {
    const SlabSystem cm = square(copper_molybdenum(1, 1));
    const Basis2D B = find_modes_2d(cm, 40.0);
    const double kb = 0.838, ka = 0.339;
    for (const auto& m : B.modes) {
        const double lb = kb * (m.nu_b * m.nu_b + m.mu * m.mu);
        const double la = ka * (m.nu_a * m.nu_a + m.mu * m.mu);
        CHECK(std::abs(lb - la) <= 1e-10 * std::max(1.0, m.lambda_bar));
        CHECK(std::abs(m.nu_a * m.nu_a - (kb / ka * m.nu_b * m.nu_b + (kb / ka - 1) * m.mu * m.mu)) <=
              1e-10 * std::max(1.0, m.lambda_bar));
        const double scale = 3.42 * (m.nu_b + 1) + 1.05 * (m.nu_a + 1);
        CHECK(std::abs(eigen_f_2d(m.nu_b, m.mu, cm)) <= 1e-9 * scale);
    }
    const auto one_d = find_eigenvalues_below(cm, 40.0);
    std::size_t k = 0;
    for (const auto& m : B.modes) {
        if (m.m != 0) continue;
        REQUIRE(k < one_d.size());
        CHECK(m.nu_b == doctest::Approx(one_d[k].lambda_b).epsilon(1e-10));
        ++k;
    }
    CHECK(k == one_d.size());
}

TEST_CASE("transverse modes") {
    const double c = 1.7;
    for (std::size_t m = 0; m < 6; ++m) {
        for (std::size_t q = 0; q < 6; ++q) {
            const double v = oracle::adaptive_simpson([&](double y) { return y_mode(m, y, c) * y_mode(q, y, c); }, 0.0, c, 1e-13);
            CHECK(std::abs(v - (m == q ? 1.0 : 0.0)) <= 1e-10);
        }
        const double h = 1e-6;
        CHECK(std::abs(y_mode(m, h, c) - y_mode(m, -h, c)) / (2 * h) <= 1e-8);
        CHECK(std::abs(y_mode(m, c + h, c) - y_mode(m, c - h, c)) / (2 * h) <= 1e-6);
        if (m > 0) CHECK(y_mode(m, 0.0, c) == doctest::Approx(std::sqrt(2.0 / c)));
    }
    const SlabSystem cm = square(copper_molybdenum(1, 1));
    const Basis2D B = find_modes_2d(cm, 0.5);
    CHECK(phi_2d(B.modes[0], cm, -0.3, 0.4) == doctest::Approx(1.0));
    CHECK(y_mode(0, 0.2, 4.0) == doctest::Approx(0.5));
}

TEST_CASE("slice reconstruction") {
    const SlabSystem cm = square(copper_molybdenum(1, 1));
    const Basis2D B = find_modes_2d(cm, 15.0);
    const Grid g = uniform_grid(cm, 20);
    REQUIRE(B.size() <= 20);
    const double y0 = 0.0;
    // a single mode at tf is recovered exactly
    CoeffVector one{std::vector<double>(B.size(), 0.0), std::vector<double>(B.size(), 0.0)};
    one.C_b[2] = one.C_a[2] = 1.0;
    const SampledField data = synthesize_2d_slice(B, one, y0, cm.tf, g);
    const CoeffVector back = slice_coefficients(B, data, y0);
    for (std::size_t k = 0; k < B.size(); ++k) {
        CHECK(std::abs(back.C_b[k] - one.C_b[k]) <= 1e-9);
        CHECK(std::abs(back.C_a[k] - one.C_a[k]) <= 1e-9);
    }
    SampledField zero = data;
    for (auto& v : zero.values_b) v = 0.0;
    for (auto& v : zero.values_a) v = 0.0;
    const SampledField z = reconstruct_2d_slice(B, zero, y0, cm.t0);
    for (double v : z.values_b) CHECK(v == 0.0);
    // Y_1 vanishes on y = c/2, so that column is zero
    CHECK_THROWS_AS(slice_coefficients(B, data, 0.5), RankDeficientError);
}

TEST_CASE("noise-free 2D round trip returns the projection of the initial slice") {
    const SlabSystem cm = square(copper_molybdenum(1, 1));
    const Grid g = uniform_grid(cm, 20);
    PiecewiseField init;
    init.left = [](double x) { return std::cos(pi * (x + 1.0)); };
    init.right = [](double x) { return std::cos(pi * (x - 1.0)); };
    const SampledField slice = sample(init, g, cm.t0);
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        const Basis2D B = find_modes_2d(cm, choose_n_eps(eps, 0.01, 1.0, cm.tf));
        const SampledField fin = forward_2d_slice(B, slice, 0.0, g);
        const SampledField rec = reconstruct_2d_slice(B, fin, 0.0, cm.t0);
        const SampledField proj = synthesize_2d_slice(B, slice_coefficients(B, slice, 0.0), 0.0, cm.tf, g);
        SampledField zero = proj;
        for (auto& v : zero.values_b) v = 0.0;
        for (auto& v : zero.values_a) v = 0.0;
        CHECK(discrete_l2_distance(rec, proj) <= 1e-6 * std::max(1.0, discrete_l2_distance(proj, zero)));
    }
}
