#include <doctest.h>

#include <cmath>

#include "critwave/grid.hpp"
#include "critwave/potential.hpp"
#include "support.hpp"

using namespace critwave;
using testsupport::volume_quad;

TEST_CASE("grid invariants") {
    const GridPtr g = make_grid(128, 12.5);
    CHECK(g->r(0) == 0.0);
    CHECK(g->nodes() == 129);
    CHECK(g->r(128) == doctest::Approx(12.5).epsilon(1e-15));
    CHECK(g->dr() * g->n() == doctest::Approx(12.5).epsilon(1e-15));
    for (int i = 1; i <= g->n(); ++i) CHECK(g->r(i) > g->r(i - 1));
    CHECK_THROWS_AS(Grid(8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(32, -1.0), std::invalid_argument);
}

TEST_CASE("laplacian of a constant vanishes") {
    const GridPtr g = make_grid(512, 20.0);
    RadialField one(g, 1.0);
    const RadialField lap = laplacian_w(one);
    double m = 0.0;
    for (int i = 0; i < lap.nodes() - 1; ++i) m = std::max(m, std::abs(lap[i]));
    CHECK(m <= 1e-10);
}

TEST_CASE("laplacian of r^2 is exactly 6") {
    const GridPtr g = make_grid(512, 10.0);
    RadialField f(g);
    for (int i = 0; i < f.nodes(); ++i) f[i] = g->r(i) * g->r(i);
    const RadialField lap = laplacian_w(f);
    for (int i = 0; i < lap.nodes(); ++i) CHECK(lap[i] == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("laplacian residual of W is second order") {
    // -Lap W = W^5; interior truncation error must shrink 4x under dr halving
    auto residual = [](int n) {
        const GridPtr g = make_grid(n, 40.0);
        const RadialField w = aubin_talenti(g);
        const RadialField lap = laplacian_w(w);
        double m = 0.0;
        for (int i = 0; i < w.nodes() - 1; ++i) {
            const double w5 = std::pow(w[i], 5);
            m = std::max(m, std::abs(-lap[i] - w5));
        }
        return m;
    };
    const double r1 = residual(2048);
    const double r2 = residual(4096);
    CHECK(r2 <= 5e-4);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("norms of the zero field vanish") {
    const GridPtr g = make_grid(64, 5.0);
    RadialField z(g);
    CHECK(h1_seminorm_sq(z) == 0.0);
    CHECK(l2_norm_sq(z) == 0.0);
    CHECK(l6_norm(z) == 0.0);
}

TEST_CASE("gaussian L2 norm against adaptive quadrature") {
    const GridPtr g = make_grid(4096, 40.0);
    RadialField f(g);
    for (int i = 0; i < f.nodes(); ++i) f[i] = std::exp(-g->r(i) * g->r(i));
    const double oracle = volume_quad([](double r) { return std::exp(-2.0 * r * r); }, 0.0, 40.0);
    CHECK(l2_norm_sq(f) == doctest::Approx(oracle).epsilon(1e-8));
    // closed form of the full-line integral for cross-reference
    CHECK(oracle == doctest::Approx(std::pow(0.5 * 3.14159265358979323846, 1.5)).epsilon(1e-10));
}

TEST_CASE("L6 norm of W against adaptive quadrature") {
    const GridPtr g = make_grid(4096, 40.0);
    const RadialField w = aubin_talenti(g);
    const double oracle =
        volume_quad([](double r) { return std::pow(1.0 + r * r / 3.0, -3.0); }, 0.0, 40.0);
    CHECK(std::pow(l6_norm(w), 6) == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("H1 seminorm of W self-converges at second order") {
    auto value = [](int n) {
        const GridPtr g = make_grid(n, 40.0);
        return h1_seminorm_sq(aubin_talenti(g));
    };
    const double v1 = value(1024), v2 = value(2048), v4 = value(4096);
    const double ratio = (v1 - v2) / (v2 - v4);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("annulus energy basics") {
    const GridPtr g = make_grid(1024, 20.0);
    RadialPair zero{RadialField(g), RadialField(g)};
    CHECK(annulus_energy(zero, 0.0, 20.0) == 0.0);

    RadialPair p{testsupport::bump_field(g, 0.7, 5.0, 2.0),
                 testsupport::bump_field(g, -0.3, 6.0, 1.5)};
    const double full = annulus_energy(p, 0.0, 20.0);
    CHECK(full == doctest::Approx(h1_seminorm_sq(p.u) + l2_norm_sq(p.ut)).epsilon(1e-13));

    SUBCASE("additivity to machine precision") {
        const double a = 4.321, b = 11.77;
        const double lhs = annulus_energy(p, 0.0, a) + annulus_energy(p, a, b);
        CHECK(lhs == doctest::Approx(annulus_energy(p, 0.0, b)).epsilon(1e-13));
    }
    SUBCASE("disjoint support gives zero") {
        RadialPair q{testsupport::bump_field(g, 1.0, 0.45, 0.45), RadialField(g)};
        CHECK(annulus_energy(q, 2.0, 20.0) == 0.0);
    }
    SUBCASE("rho_out beyond the grid is a domain error") {
        CHECK_THROWS_AS(annulus_energy(p, 0.0, 21.0), std::domain_error);
    }
    SUBCASE("mismatched grids are a contract violation") {
        const GridPtr g2 = make_grid(512, 20.0);
        CHECK_THROWS_AS(inner_l2(p.u, RadialField(g2)), std::invalid_argument);
    }
}

TEST_CASE("norms are positive definite") {
    const GridPtr g = make_grid(256, 10.0);
    RadialField f = testsupport::bump_field(g, 1e-3, 3.0, 1.0);
    CHECK(l2_norm_sq(f) > 0.0);
    CHECK(h1_seminorm_sq(f) > 0.0);
    CHECK(l6_norm(f) > 0.0);
}
