#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "critwave/grid.hpp"
#include "critwave/potential.hpp"
#include "support.hpp"

using namespace critwave;

TEST_CASE("aubin-talenti values") {
    // dr = sqrt(3) puts W(sqrt 3) = 1/sqrt 2 exactly on a node
    const GridPtr g = make_grid(16, 16.0 * std::sqrt(3.0));
    const RadialField w = aubin_talenti(g);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("rescale_profile") {
    const GridPtr g = make_grid(4096, 40.0);
    const RadialField w = aubin_talenti(g);
    SUBCASE("lambda = 1 is the identity") {
        const RadialField r1 = rescale_profile(w, 1.0);
        for (int i = 0; i < w.nodes(); ++i) CHECK(r1[i] == doctest::Approx(w[i]).epsilon(1e-14));
    }
    SUBCASE("scaled amplitude at the origin") {
        CHECK(aubin_talenti_scaled(g, 4.0)[0] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(rescale_profile(w, 4.0)[0] == doctest::Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("interpolated rescale matches the analytic W_lambda") {
        const RadialField interp = rescale_profile(w, 2.0);
        const RadialField exact = aubin_talenti_scaled(g, 2.0);
        double m = 0.0;
        for (int i = 0; i < w.nodes(); ++i) m = std::max(m, std::abs(interp[i] - exact[i]));
        CHECK(m <= 5e-5);  // linear-interpolation error, O(dr^2 lambda^2)
    }
    SUBCASE("lambda <= 0 is a domain error") {
        CHECK_THROWS_AS(rescale_profile(w, 0.0), std::domain_error);
        CHECK_THROWS_AS(rescale_profile(w, -2.0), std::domain_error);
    }
}

TEST_CASE("H1 scaling invariance of W_lambda") {
    // literal comparison on one grid (tails cost ~(12 pi / r_max)(1 - 1/lambda))
    {
        const GridPtr g = make_grid(16384, 400.0);
        const double base = h1_seminorm_sq(aubin_talenti(g));
        const double scaled2 = h1_seminorm_sq(aubin_talenti_scaled(g, 2.0));
        CHECK(scaled2 == doctest::Approx(base).epsilon(0.01));
    }
    // exact truncated identity: |grad W_lambda|^2 on [0,R] = |grad W|^2 on [0,lambda R]
    for (double lambda : {2.0, 4.0, 8.0}) {
        const GridPtr g_inner = make_grid(16384, 40.0);
        const GridPtr g_outer = make_grid(16384, 40.0 * lambda);
        const double lhs = h1_seminorm_sq(aubin_talenti_scaled(g_inner, lambda));
        const double rhs = h1_seminorm_sq(aubin_talenti(g_outer));
        CHECK(lhs == doctest::Approx(rhs).epsilon(0.01));
    }
}

TEST_CASE("composite potential") {
    const GridPtr g = make_grid(4096, 40.0);
    SUBCASE("endpoint values") {
        CHECK(composite_potential(g, 1.0).values[0] == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(composite_potential(g, 8.0).values[0] == doctest::Approx(130.0).epsilon(1e-14));
    }
    SUBCASE("nonnegative everywhere with finite y-norm at beta 4") {
        const Potential v = composite_potential(g, 8.0);
        CHECK(v.beta == 4.0);
        for (int i = 0; i < v.values.nodes(); ++i) CHECK(v[i] >= 0.0);
        CHECK(std::isfinite(v.y_norm));
        CHECK(v.y_norm > 0.0);
    }
    SUBCASE("resolution flag") {
        CHECK_FALSE(composite_potential(g, 8.0).under_resolved);   // dr ~ 0.01, bubble 1/8
        CHECK(composite_potential(g, 200.0).under_resolved);       // bubble 1/200
    }
    CHECK_THROWS_AS(composite_potential(g, 0.5), std::invalid_argument);
}

TEST_CASE("scaled family") {
    const GridPtr g = make_grid(1024, 30.0);
    const Potential v = gaussian_potential(g, 3.0, 1.5);
    SUBCASE("alpha = 0 gives the zero potential") {
        const Potential z = scaled_family(v, 0.0);
        for (int i = 0; i < z.values.nodes(); ++i) CHECK(z[i] == 0.0);
        CHECK(z.y_norm == 0.0);
    }
    SUBCASE("alpha = 1 is the identity") {
        const Potential w = scaled_family(v, 1.0);
        for (int i = 0; i < w.values.nodes(); ++i) CHECK(w[i] == v[i]);
    }
    SUBCASE("y-norm homogeneity") {
        CHECK(scaled_family(v, 2.5).y_norm == doctest::Approx(2.5 * v.y_norm).epsilon(1e-14));
    }
    CHECK_THROWS_AS(scaled_family(v, -1.0), std::invalid_argument);
}

TEST_CASE("y-norm is monotone under pointwise majorization") {
    const GridPtr g = make_grid(512, 25.0);
    const Potential small = gaussian_potential(g, 1.0, 1.0);
    const Potential big = gaussian_potential(g, 2.0, 1.0);
    CHECK(big.y_norm >= small.y_norm);
}

TEST_CASE("potential JSON schema") {
    const GridPtr g = make_grid(256, 20.0);
    SUBCASE("composite") {
        const auto v = potential_from_json(g, nlohmann::json{{"kind", "composite"}, {"lambda", 8}});
        CHECK(v.values[0] == doctest::Approx(130.0));
    }
    SUBCASE("gaussian") {
        const auto v = potential_from_json(
            g, nlohmann::json{{"kind", "gaussian"}, {"amplitude", 2.0}, {"width", 1.0}});
        CHECK(v.values[0] == doctest::Approx(2.0));
        const double r1 = g->r(1);
        CHECK(v.values[1] == doctest::Approx(2.0 * std::exp(-r1 * r1)));
    }
    SUBCASE("table") {
        const auto v = potential_from_json(
            g, nlohmann::json{{"kind", "table"},
                              {"r", std::vector<double>{0.0, 10.0}},
                              {"v", std::vector<double>{1.0, 0.0}},
                              {"beta", 3.0}});
        CHECK(v.values[0] == doctest::Approx(1.0));
        CHECK(v.beta == 3.0);
    }
    SUBCASE("unknown kind rejected") {
        CHECK_THROWS_AS(potential_from_json(g, nlohmann::json{{"kind", "box"}}),
                        std::invalid_argument);
    }
    SUBCASE("unknown keys rejected") {
        CHECK_THROWS_AS(potential_from_json(
                            g, nlohmann::json{{"kind", "gaussian"}, {"amplitude", 1.0},
                                              {"width", 1.0}, {"extra", 1}}),
                        std::invalid_argument);
    }
}
