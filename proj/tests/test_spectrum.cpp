#include <doctest.h>

#include <cmath>

#include "critwave/grid.hpp"
#include "critwave/potential.hpp"
#include "critwave/spectrum.hpp"
#include "support.hpp"

using namespace critwave;

namespace {

// unit-radius square well of depth c with the interface exactly on a node
// and the averaged value there (keeps the discretization second order)
Potential square_well(const GridPtr& g, double c) {
    RadialField v(g);
    for (int i = 0; i < v.nodes(); ++i) {
        const double r = g->r(i);
        if (r < 1.0 - 1e-12)
            v[i] = c;
        else if (r < 1.0 + 1e-12)
            v[i] = 0.5 * c;
    }
    Potential p{std::move(v), 4.0, 0.0, false};
    p.y_norm = y_norm_on_grid(p.values, p.beta);
    return p;
}

}  // namespace

TEST_CASE("free Dirichlet laplacian has no negative spectrum") {
    const GridPtr g = make_grid(1024, 30.0);
    const Tridiagonal t = assemble_schroedinger(zero_potential(g));
    CHECK(sturm_count_below(t, 0.0) == 0);
    const SpectralData spec = negative_eigenpairs(t, g);
    CHECK(spec.n_neg == 0);
    const double pi = 3.14159265358979323846;
    CHECK(spec.gap == doctest::Approx(std::pow(pi / 30.0, 2)).epsilon(1e-3));
    CHECK(spec.gap > 0.0);
}

TEST_CASE("square well bound-state criterion") {
    const GridPtr g = make_grid(8192, 32.0);  // dr = 1/256, interface on node 256
    CHECK(negative_eigenpairs(assemble_schroedinger(square_well(g, 2.0)), g).n_neg == 0);
    CHECK(negative_eigenpairs(assemble_schroedinger(square_well(g, 2.8)), g).n_neg == 1);
}

TEST_CASE("square well c=4 eigenvalue against the dispersion oracle") {
    const int n = 16384;
    const double r_max = 16.0;
    const GridPtr g = make_grid(n, r_max);
    const double dr = g->dr();
    const int m = 1024;  // r = 1
    REQUIRE(g->r(m) == doctest::Approx(1.0).epsilon(1e-14));

    const SpectralData spec = negative_eigenpairs(assemble_schroedinger(square_well(g, 4.0)), g);
    REQUIRE(spec.n_neg == 1);
    const double lam = spec.eigs[0].eigenvalue;

    // independent root of the discrete matching condition
    const double oracle = testsupport::square_well_discrete_eig(n, dr, m, 4.0, -1.0, -0.05);
    CHECK(std::abs(lam - oracle) <= 1e-6);

    // and the continuum transcendental root, within discretization error
    const double k_cont = testsupport::square_well_continuum_k(4.0);
    CHECK(spec.eigs[0].k == doctest::Approx(k_cont).epsilon(2e-5));
}

TEST_CASE("eigenpair invariants") {
    const GridPtr g = make_grid(4096, 40.0);
    const Potential v = gaussian_potential(g, 20.0, 1.0);  // two s-wave bound states
    const SpectralData spec = negative_eigenpairs(assemble_schroedinger(v), g);
    REQUIRE(spec.n_neg == 2);
    CHECK(spec.eigs[0].eigenvalue <= spec.eigs[1].eigenvalue);
    CHECK(spec.eigs[1].eigenvalue < 0.0);

    SUBCASE("orthonormality to 1e-10") {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j <= i; ++j) {
                const double ip = inner_l2(spec.eigs[static_cast<size_t>(i)].rho,
                                           spec.eigs[static_cast<size_t>(j)].rho);
                CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-10);
            }
    }
    SUBCASE("eigen residual below 1e-8") {
        for (const auto& e : spec.eigs) CHECK(e.residual <= 1e-8);
    }
    SUBCASE("eigenfunctions decay: outer tail mass below 1e-8") {
        for (const auto& e : spec.eigs) {
            RadialPair p{e.rho, RadialField(g)};
            CHECK(annulus_energy(p, 0.9 * g->r_max(), g->r_max()) <= 1e-8);
        }
    }
    SUBCASE("polynomial decay proxy (1+r)^2 |rho| bounded on the outer half") {
        for (const auto& e : spec.eigs) {
            double outer = 0.0;
            for (int i = 0; i < e.rho.nodes(); ++i)
                if (g->r(i) >= 0.5 * g->r_max())
                    outer = std::max(outer, std::pow(1.0 + g->r(i), 2) * std::abs(e.rho[i]));
            CHECK(outer <= 1.0);  // exponentially small in reality
        }
    }
}

TEST_CASE("oscillation count cross-check") {
    const GridPtr g = make_grid(4096, 40.0);
    const RadialField zero(g);
    for (double amp : {1.0, 6.0, 20.0, 45.0}) {
        const Potential v = gaussian_potential(g, amp, 1.0);
        const int n_neg = negative_eigenpairs(assemble_schroedinger(v), g).n_neg;
        CHECK(oscillation_count(v, zero) == n_neg);
    }
}

TEST_CASE("negative count is monotone in the coupling") {
    const GridPtr g = make_grid(2048, 40.0);
    const Potential v = gaussian_potential(g, 10.0, 1.0);
    int prev = 0;
    for (double alpha : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const int n = negative_eigenpairs(assemble_schroedinger(scaled_family(v, alpha)), g).n_neg;
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("classify the zero state over a one-bound-state well") {
    const GridPtr g = make_grid(2048, 40.0);
    const Potential v = gaussian_potential(g, 6.0, 1.0);
    const RadialField zero(g);
    REQUIRE(negative_eigenpairs(assemble_schroedinger(v), g).n_neg == 1);
    const Classification c = classify(v, zero);
    CHECK(c.kind == StabilityKind::Unstable);
    CHECK(c.n_unstable == 1);
    CHECK_FALSE(c.near_degenerate);
}

TEST_CASE("unstable coefficient extraction") {
    const GridPtr g = make_grid(2048, 40.0);
    const Potential v = gaussian_potential(g, 6.0, 1.0);
    const RadialField phi(g);  // the zero state
    const SpectralData spec = negative_eigenpairs(assemble_linearized(v, phi), g);
    REQUIRE(spec.n_neg == 1);
    const EigenPair& e = spec.eigs[0];

    RadialPair at_phi{phi, RadialField(g)};
    CHECK(unstable_coefficient(at_phi, phi, spec, 0) == doctest::Approx(0.0).epsilon(1e-12));

    const double s = 0.37;
    RadialPair grow = pair_add_scaled(at_phi, RadialPair{e.rho, scaled(e.rho, e.k)}, s);
    CHECK(unstable_coefficient(grow, phi, spec, 0) == doctest::Approx(s).epsilon(1e-10));

    RadialPair decay = pair_add_scaled(at_phi, RadialPair{e.rho, scaled(e.rho, -e.k)}, s);
    CHECK(std::abs(unstable_coefficient(decay, phi, spec, 0)) <= 1e-10);

    CHECK_THROWS_AS(unstable_coefficient(grow, phi, spec, 1), std::invalid_argument);
}
