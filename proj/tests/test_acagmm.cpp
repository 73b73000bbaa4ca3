#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afcec/acagmm.hpp"
#include "afcec/errors.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <cmath>
#include <functional>
#include <numbers>

using namespace afcec;
using namespace afcec::acagmm;
using afcec::testing::Gen;

using afcec::oracles::integrate;
using afcec::oracles::nearest_point;

TEST_CASE("model validation") {
    CHECK_THROWS_AS(ParabolaModel(0.0, 1.0, 1.0), InvalidConfig);
    CHECK_THROWS_AS(ParabolaModel(1.0, 0.0, 1.0), InvalidConfig);
    CHECK_THROWS_AS(ParabolaModel(1.0, 1.0, -1.0), InvalidConfig);
    CHECK(ParabolaModel(-1.0, 1.0, 1.0).concave_above() == false);
}

TEST_CASE("projection trivial cases") {
    const ParabolaModel m(1.0, 1.0, 1.0);
    CHECK(project_to_parabola(m, 3.0, -1.0).branch == CubicBranch::one_real);
    const auto inside = project_to_parabola(m, 0.0, 0.3);
    CHECK(inside.t0 == 0.0);
    CHECK(inside.p == doctest::Approx(0.3).epsilon(1e-15));

    const auto centre = project_to_parabola(m, 0.0, 0.5);
    CHECK(centre.branch == CubicBranch::triple_root);
    CHECK(centre.t0 == 0.0);

    // (0, 6): three feet, the outer two at equal distance; the smaller t wins.
    const auto three = project_to_parabola(m, 0.0, 6.0);
    CHECK(three.branch == CubicBranch::three_real);
    CHECK(three.t0 == doctest::Approx(-std::sqrt(5.5)).epsilon(1e-12));
    CHECK(three.p == doctest::Approx(std::hypot(std::sqrt(5.5), 0.5)).epsilon(1e-12));

    const auto fig = project_to_parabola(m, 4.0, 4.0);
    CHECK(fig.branch == CubicBranch::three_real);
    CHECK(std::abs(fig.t0 - static_cast<double>(nearest_point(1.0, 4.0, 4.0).t)) < 1e-8);
}

TEST_CASE("double root branch") {
    // a = 1, y = 2 gives Q = -1/2; R = sqrt(-Q^3) puts D at zero.
    const ParabolaModel m(1.0, 1.0, 1.0);
    for (double sign : {1.0, -1.0}) {
        const double x = sign * 4.0 * std::sqrt(0.125);
        const auto r = project_to_parabola(m, x, 2.0);
        CHECK(r.branch == CubicBranch::double_root);
        const auto ref = nearest_point(1.0, x, 2.0);
        CHECK(std::abs(r.p - static_cast<double>(ref.dist)) < 1e-8);
        CHECK(std::abs(r.t0 - static_cast<double>(ref.t)) < 1e-7);
    }
}

TEST_CASE("projection matches golden-section search") {
    Gen g(2718);
    int branches[4] = {0, 0, 0, 0};
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = (g.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * std::exp(g.uniform(std::log(0.1), std::log(4.0)));
        const double x = g.uniform(-5.0, 5.0);
        const double y = g.uniform(-5.0, 8.0) * (a > 0 ? 1.0 : -1.0);
        const ParabolaModel m(a, 1.0, 1.0);
        const auto r = project_to_parabola(m, x, y);
        ++branches[static_cast<int>(r.branch)];
        const auto ref = nearest_point(a, x, y);
        CHECK(std::abs(r.p - static_cast<double>(ref.dist)) < 1e-8);
        CHECK(std::abs(r.p - std::hypot(r.t0 - x, a * r.t0 * r.t0 - y)) < 1e-10);
        if (ref.runner_up - ref.dist > 1e-6L) CHECK(std::abs(r.t0 - static_cast<double>(ref.t)) < 1e-8);
    }
    CHECK(branches[static_cast<int>(CubicBranch::one_real)] > 100);
    CHECK(branches[static_cast<int>(CubicBranch::three_real)] > 100);
}

TEST_CASE("projection is optimal against a fine grid") {
    Gen g(31);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = g.uniform(0.2, 3.0);
        const double x = g.uniform(-4.0, 4.0), y = g.uniform(-3.0, 6.0);
        const auto r = project_to_parabola(ParabolaModel(a, 1.0, 1.0), x, y);
        for (int i = -2000; i <= 2000; ++i) {
            const double t = i * 0.005;
            CHECK(r.p <= std::hypot(t - x, a * t * t - y) + 1e-9);
        }
    }
}

TEST_CASE("general parabola reduces to vertex form") {
    Gen g(32);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = g.uniform(0.2, 2.0) * (trial % 2 ? 1 : -1), b = g.uniform(-2, 2), c = g.uniform(-2, 2);
        const double x = g.uniform(-4, 4), y = g.uniform(-4, 4);
        const auto r = project_to_general_parabola(a, b, c, x, y);
        const auto f = [&](double t) { return a * t * t + b * t + c; };
        CHECK(std::abs(r.p - std::hypot(r.t0 - x, f(r.t0) - y)) < 1e-9);
        for (int i = -1000; i <= 1000; ++i) {
            const double t = i * 0.01;
            CHECK(r.p <= std::hypot(t - x, f(t) - y) + 1e-9);
        }
    }
}

TEST_CASE("arc length") {
    const ParabolaModel unit(1.0, 1.0, 1.0);
    CHECK(arc_length(unit, 0.0) == 0.0);
    CHECK(arc_length(unit, 1.0) == doctest::Approx(0.5 * std::sqrt(5.0) + 0.25 * std::log(2.0 + std::sqrt(5.0))).epsilon(1e-15));
    CHECK(arc_length(unit, 1.0) == doctest::Approx(1.478943).epsilon(1e-6));

    Gen g(41);
    for (int trial = 0; trial < 300; ++trial) {
        const double a = (trial % 2 ? 1 : -1) * g.uniform(0.05, 5.0);
        const double t = g.uniform(-4.0, 4.0);
        const ParabolaModel m(a, 1.0, 1.0);
        const double quad = integrate([&](double s) { return std::sqrt(1.0 + 4.0 * a * a * s * s); }, 0.0, std::abs(t), 1e-13);
        CHECK(std::abs(arc_length(m, t) - quad) < 1e-9);
        CHECK(signed_arc_length(m, t) == doctest::Approx(std::copysign(quad, t)).epsilon(1e-9).scale(1e-9));
        CHECK(signed_arc_length(m, -t) == -signed_arc_length(m, t));
        CHECK(arc_length(m, std::abs(t) + 0.01) > arc_length(m, t));
        CHECK(parameter_at_arc_length(m, signed_arc_length(m, t)) == doctest::Approx(t).epsilon(1e-10).scale(1e-10));
    }
}

TEST_CASE("curvature radius") {
    CHECK(curvature_radius(ParabolaModel(1.0, 1, 1), 0.0) == doctest::Approx(0.5));
    CHECK(curvature_radius(ParabolaModel(1.0, 1, 1), 1.0) == doctest::Approx(std::pow(5.0, 1.5) / 2.0).epsilon(1e-14));
    CHECK(curvature_radius(ParabolaModel(1.0, 1, 1), 1.0) == doctest::Approx(5.5902).epsilon(1e-5));
    CHECK(curvature_radius(ParabolaModel(-2.0, 1, 1), 0.0) == doctest::Approx(0.25));
    double prev = INFINITY;
    for (double a : {0.5, 1.0, 2.0, 8.0, 100.0}) {
        const double r = curvature_radius(ParabolaModel(a, 1, 1), 0.0);
        CHECK(r < prev);
        prev = r;
    }

    // Curvature from finite differences of the graph: |y''| / (1 + y'^2)^{3/2}.
    Gen g(42);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = (trial % 2 ? 1 : -1) * g.uniform(0.1, 3.0), t = g.uniform(-2.0, 2.0), h = 1e-4;
        const auto y = [&](double s) { return a * s * s; };
        const double d1 = (y(t + h) - y(t - h)) / (2 * h);
        const double d2 = (y(t + h) - 2 * y(t) + y(t - h)) / (h * h);
        const double r = std::pow(1 + d1 * d1, 1.5) / std::abs(d2);
        CHECK(curvature_radius(ParabolaModel(a, 1, 1), t) == doctest::Approx(r).epsilon(1e-5));
    }
}

TEST_CASE("orientation side") {
    const ParabolaModel m(1.0, 1.0, 1.0);
    CHECK(project_to_parabola(m, 0.0, 1.0).side == Side::above);
    CHECK(project_to_parabola(m, 0.0, -1.0).side == Side::below);

    Gen g(43);
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = (trial % 2 ? 1 : -1) * g.uniform(0.1, 3.0);
        const double x = g.uniform(-4, 4), y = g.uniform(-6, 6);
        const ParabolaModel pm(a, 1, 1);
        if (std::abs(y - a * x * x) < 1e-9) continue;
        const auto r = project_to_parabola(pm, x, y);
        CHECK(r.side == (y > a * x * x ? Side::above : Side::below));
        CHECK(orientation_side(pm, x, y, r) == r.side);
        const double det = orientation_determinant(pm, x, y, r.t0);
        CHECK((det < 0.0) == (r.side == Side::above));
    }
}

TEST_CASE("corrected density") {
    const ParabolaModel m(1.0, 1.0, 0.5);
    const double on_curve_raw = aca_log_density(m, 0.7, 0.49, false);
    CHECK(aca_log_density(m, 0.7, 0.49, true) == doctest::Approx(on_curve_raw).epsilon(1e-12));

    // Below a bowl the normal lines spread out, so the density is divided by 1 + p/r > 1.
    const auto below = project_to_parabola(m, 0.3, -0.4);
    CHECK(below.side == Side::below);
    const double r_below = curvature_radius(m, below.t0);
    CHECK(jacobian_factor(m, below) == doctest::Approx(1.0 + below.p / r_below));
    CHECK(aca_log_density(m, 0.3, -0.4, true) ==
          doctest::Approx(aca_log_density(m, 0.3, -0.4, false) - std::log(1.0 + below.p / r_below)));

    const auto above = project_to_parabola(m, 0.2, 0.3);
    CHECK(above.side == Side::above);
    CHECK(jacobian_factor(m, above) == doctest::Approx(1.0 - above.p / curvature_radius(m, above.t0)));
    CHECK(aca_log_density(m, 0.2, 0.3, true) > aca_log_density(m, 0.2, 0.3, false));

    // The centre of curvature at the vertex folds the map.
    CHECK_THROWS_AS(aca_log_density(m, 0.0, 0.5, true), BeyondCurvatureCenter);
    CHECK_NOTHROW(aca_log_density(m, 0.0, 0.5, false));
    // Higher on the axis the nearest foot leaves the vertex and p stays below r.
    const auto high = project_to_parabola(m, 0.0, 2.0);
    CHECK(high.p < curvature_radius(m, high.t0));
    CHECK_NOTHROW(aca_log_density(m, 0.0, 2.0, true));

    // Downward parabola: the concave side is below.
    const ParabolaModel down(-1.0, 1.0, 0.5);
    CHECK_THROWS_AS(aca_log_density(down, 0.0, -0.5, true), BeyondCurvatureCenter);
    CHECK_NOTHROW(aca_log_density(down, 0.0, 0.5, true));
}

TEST_CASE("normalization of a mildly curved configuration") {
    const auto row = normalization_check(ParabolaModel(0.25, 0.5, 0.25), 5.0, 300);
    CHECK(row.fold_mass < kFoldMassLimit);
    CHECK(row.corrected_integral == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(row.raw_integral == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(row.fold_nodes <= 1);

    const auto heavy = normalization_check(ParabolaModel(2.0, 0.5, 0.5), 5.0, 300);
    CHECK(heavy.fold_mass > kFoldMassLimit);
    CHECK(heavy.unreachable_mass >= heavy.fold_mass);
    CHECK(heavy.raw_integral > 1.03);
    CHECK(heavy.raw_integral < 1.05);
    // What the corrected integral misses is the mass beyond the cut locus.
    CHECK(std::abs(heavy.corrected_integral - (1.0 - heavy.unreachable_mass)) < 5e-3);

    CHECK_THROWS_AS(normalization_check(ParabolaModel(1.0, 1.0, 1.0), 5.0, 3), std::invalid_argument);
    CHECK(normalization_table({0.25, 0.5}, {1.0}, {0.25, 0.5}, 5.0, 50).size() == 4);
}

TEST_CASE("fold mass matches direct quadrature in arc-length coordinates") {
    const ParabolaModel m(1.0, 1.0, 0.5);
    // Mass of N(l; s1) x N(p; s2) with p on the concave side beyond r(t(l)).
    const double expected = integrate(
        [&](double l) {
            const double t = parameter_at_arc_length(m, l);
            const double r = curvature_radius(m, t);
            return std::exp(-0.5 * l * l) / std::sqrt(2 * std::numbers::pi) * 0.5 * std::erfc(r / (0.5 * std::numbers::sqrt2));
        },
        -12.0, 12.0, 1e-14);
    CHECK(fold_mass(m) == doctest::Approx(expected).epsilon(1e-6));
}
