#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "renormlab/epstein.hpp"

using namespace renormlab;

namespace {

EpsteinMap bottom_map(double c, int n_level, int N = 2) {
    QuadraticMap f{c};
    auto levels = renorm_cascade(f, N, n_level);
    REQUIRE(static_cast<int>(levels.size()) >= n_level);
    return rescale(f, levels[static_cast<std::size_t>(n_level - 1)], 1.05);
}

double feig_c() {
    static double c = feigenbaum_parameter(10).extrapolated;
    return c;
}

} // namespace

TEST_CASE("rescale basics at the superstable 2-cycle") {
    EpsteinMap g = bottom_map(-1.0, 1);
    CHECK(g(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g(-1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g(0.0) == doctest::Approx(0.0).epsilon(1e-12));  // superstable: g(0) = 0

    // Even map on samples.
    for (int i = 0; i <= 16; ++i) {
        double x = -1.0 + 2.0 * i / 16.0;
        CHECK(g(x) == doctest::Approx(g(-x)).epsilon(1e-13));
    }
    CHECK(g.j_prime > 1.0);
    CHECK(g.j_prime < g.j());
}

TEST_CASE("rescale at the accumulation parameter: g(0) < 0") {
    EpsteinMap g = bottom_map(feig_c(), 1);
    CHECK(g(0.0) < 0.0);
    // Oracle: high-precision composition of the raw iterates.
    long double beta = g.level_beta;
    long double x = 0.0L;
    for (int i = 0; i < g.q; ++i) x = x * x + static_cast<long double>(g.base.c);
    CHECK(g(0.0) == doctest::Approx(static_cast<double>(x / beta)).epsilon(1e-12));
}

TEST_CASE("complex evaluation agrees with real iteration") {
    EpsteinMap g = bottom_map(feig_c(), 2);
    for (int i = 0; i <= 32; ++i) {
        double x = -1.0 + 2.0 * i / 32.0;
        Complex w = g(Complex(x, 0.0));
        CHECK(w.imag() == 0.0);
        CHECK(w.real() == doctest::Approx(g(x)).epsilon(1e-12));
    }
    // Conjugation symmetry on complex samples.
    for (int i = 0; i < 24; ++i) {
        Complex z(-0.9 + 0.08 * i, 0.21 - 0.015 * i);
        CHECK(std::abs(g(std::conj(z)) - std::conj(g(z))) < 1e-12);
    }
}

TEST_CASE("epstein_verify on cascade levels") {
    for (int n : {1, 2, 3, 4}) {
        EpsteinMap g = bottom_map(feig_c(), n);
        EpsteinReport rep = epstein_verify(g);
        CHECK(rep.unimodal);
        CHECK(rep.closure_inside);
        CHECK(rep.inverse_chain_ok);
        CHECK(rep.boundary_identity);
    }
    // Boundary equality case at c = -1: passes with g(0) = 0.
    EpsteinMap g1 = bottom_map(-1.0, 1);
    CHECK(epstein_verify(g1).all_pass());

    // Fabricated violation: J' pushed out to J.
    EpsteinMap broken = bottom_map(feig_c(), 2);
    broken.j_prime = broken.j();
    EpsteinReport rep = epstein_verify(broken);
    CHECK_FALSE(rep.closure_inside);
}

TEST_CASE("boundary fixed point multiplier") {
    EpsteinMap g = bottom_map(-1.0, 1);
    double mult = boundary_fixed_point_multiplier(g);
    CHECK(mult > 1.0);
    // Oracle: finite differences of the rescaled map at the boundary point.
    double fd = oracle::fd_derivative([&](double x) { return g(x); }, 1.0, 1e-6);
    CHECK(mult == doctest::Approx(fd).epsilon(1e-6));

    for (int n : {1, 2, 3, 4}) {
        EpsteinMap gn = bottom_map(feig_c(), n);
        CHECK(boundary_fixed_point_multiplier(gn) > 1.0);
    }
}

TEST_CASE("inverse chain inverts the map") {
    EpsteinMap g = bottom_map(feig_c(), 2);
    for (int iy = -4; iy <= 4; ++iy) {
        for (int ix = -6; ix <= 6; ++ix) {
            Complex w(0.15 * ix, 0.1 * iy);
            if (w.imag() == 0.0 && std::abs(w.real()) >= g.j()) continue;
            if (!g.chain.well_defined(g.scale * w)) continue;
            auto [zp, zm] = g.preimages(w);
            CHECK(std::abs(g(zp) - w) < 1e-9);
            CHECK(std::abs(g(zm) - w) < 1e-9);
            CHECK(std::abs(zp + zm) < 1e-12);  // the two branches are opposite
        }
    }
}

TEST_CASE("omega_boundary at c = -1") {
    EpsteinMap g = bottom_map(-1.0, 1);
    Curve omega = omega_boundary(g, 1200);
    REQUIRE(omega.points.size() > 100);

    // Symmetry under z -> -z (exact by construction) and conjugation.
    Curve negated = omega;
    for (auto& p : negated.points) p = -p;
    CHECK(hausdorff_distance(omega, negated) < 1e-12);
    Curve conjugated = omega;
    for (auto& p : conjugated.points) p = std::conj(p);
    CHECK(hausdorff_distance(omega, conjugated) < 1e-6 * bounding_box(omega).diameter());

    double j_prime_traced = 1e300;
    double w_traced = 0.0;
    for (const auto& p : omega.points) {
        if (p.imag() == 0.0 && p.real() > 0.0) {
            j_prime_traced = std::min(j_prime_traced, p.real());
            w_traced = std::max(w_traced, p.real());
        }
    }
    // Omega meets R exactly in J' (up to the trace tolerance).
    CHECK(j_prime_traced == doctest::Approx(g.j_prime).epsilon(1e-8));
    CHECK(w_traced >= j_prime_traced);

    // Forward mapping: interior samples stay inside C_J.
    for (int i = 0; i < 200; ++i) {
        double x = -0.95 + 1.9 * i / 199.0;
        Complex z(x, 0.12);
        if (!point_in_polygon(omega, z)) continue;
        Complex w = g(z);
        bool in_cj = w.imag() != 0.0 || std::abs(w.real()) < g.j();
        CHECK(in_cj);
    }
}

TEST_CASE("omega_boundary refinement stability") {
    EpsteinMap g = bottom_map(-1.0, 1);
    Curve a = omega_boundary(g, 800);
    Curve b = omega_boundary(g, 1600);
    CHECK(hausdorff_distance(a, b) < 1e-6 * bounding_box(a).diameter());
}

TEST_CASE("omega real extremum") {
    // The closure of Omega meets R in [-w, w]; w is the traced real extremum,
    // a critical point of the extension whose image lands at or above w.
    for (double c : {-1.0, feig_c()}) {
        EpsteinMap g = bottom_map(c, c == -1.0 ? 1 : 2);
        Curve omega = omega_boundary(g, 1200);
        double w_traced = 0.0;
        for (const auto& p : omega.points)
            if (p.imag() == 0.0) w_traced = std::max(w_traced, std::abs(p.real()));
        for (std::size_t i = 0; i + 1 < omega.points.size(); ++i) {
            const Complex& p = omega.points[i];
            const Complex& q = omega.points[i + 1];
            if ((p.imag() > 0.0) != (q.imag() > 0.0)) {
                double t = p.imag() / (p.imag() - q.imag());
                double x = p.real() + t * (q.real() - p.real());
                w_traced = std::max(w_traced, std::abs(x));
            }
        }
        CHECK(w_traced >= g.j_prime - 1e-6);
        CHECK(g(w_traced) >= w_traced - 1e-3);
        // Oracle: the departure point from R is a critical point of g.
        double fd = oracle::fd_derivative([&](double x) { return g(x); }, w_traced, 1e-7);
        CHECK(std::abs(fd) < 1e-2 * std::max(1.0, std::abs(g.derivative(1.0))));
    }
}

TEST_CASE("tower checks at m = 5") {
    QuadraticMap f{feig_c()};
    auto levels = renorm_cascade(f, 2, 5);
    REQUIRE(levels.size() >= 5);
    Tower tower = build_tower(f, levels, 5, 1.05, 2);
    CHECK(tower.all_checks_pass);
    REQUIRE(tower.levels.size() == 5);

    // Period doubling: p_{m,n} = 2^{m-n} exactly.
    for (const auto& tl : tower.levels) CHECK(tl.p == (1 << (5 - tl.n)));
    // Direct beta ratios as oracle for (e-I).
    for (const auto& tl : tower.levels) {
        if (tl.n == 5) continue;
        double direct = std::abs(levels[static_cast<std::size_t>(tl.n - 1)].beta /
                                 levels[4].beta);
        CHECK(std::abs(tl.beta) == doctest::Approx(direct).epsilon(1e-12));
        CHECK(std::abs(tl.beta) > std::pow(tower.mu_hat, 5 - tl.n));
        CHECK(std::abs(tl.beta) < std::pow(tower.lambda_hat, 5 - tl.n));
    }
    // Composition identity at 257 points within 1e-9.
    for (const auto& tl : tower.levels) CHECK(tl.composition_error <= 1e-9);

    // Nesting I_{m,n} in J_{m,n} in I_{m,n-1}.
    for (std::size_t i = 0; i + 1 < tower.levels.size(); ++i) {
        const auto& fine = tower.levels[i];      // n = m down to 1
        const auto& coarse = tower.levels[i + 1];
        CHECK(fine.I.hi < fine.J.hi);
        CHECK(fine.J.hi < coarse.I.hi);
    }

    // Trivial single-map tower.
    Tower t1 = build_tower(f, levels, 1, 1.05, 2);
    CHECK(t1.all_checks_pass);
    CHECK(t1.levels.size() == 1);
    CHECK(t1.levels[0].p == 1);
}

TEST_CASE("tower intermediate composition g_{m,n} = g_{m,n-1}^{a_n}") {
    QuadraticMap f{feig_c()};
    auto levels = renorm_cascade(f, 2, 4);
    Tower tower = build_tower(f, levels, 4, 1.05, 2);
    // maps[k] is g_{m, m-k}; a_n = 2 throughout the doubling cascade.
    for (std::size_t k = 0; k + 1 < tower.maps.size(); ++k) {
        const EpsteinMap& finer = tower.maps[k];        // g_{m,n}
        const EpsteinMap& coarser = tower.maps[k + 1];  // g_{m,n-1}
        double r = std::abs(tower.levels[k].beta);
        double err = 0.0;
        for (int i = 0; i <= 64; ++i) {
            double x = -r + 2.0 * r * i / 64.0;
            err = std::max(err, std::abs(finer(x) - coarser(coarser(x))));
        }
        CHECK(err < 1e-9);
    }
}

TEST_CASE("convergence of renormalizations on a compact rectangle") {
    QuadraticMap f{feig_c()};
    auto levels = renorm_cascade(f, 2, 5);
    REQUIRE(levels.size() >= 5);
    std::vector<EpsteinMap> maps;
    for (int n = 2; n <= 5; ++n)
        maps.push_back(rescale(f, levels[static_cast<std::size_t>(n - 1)], 1.05));
    BoundingBox rect{-0.9, 0.9, -0.2, 0.2};
    ConvergenceResult res = convergence_estimate(maps, rect, 48);
    REQUIRE(res.sups.size() == 3);
    CHECK(res.sups[0] > res.sups[1]);
    CHECK(res.sups[1] > res.sups[2]);

    // Identical maps give zero.
    std::vector<EpsteinMap> twice{maps[0], maps[0]};
    ConvergenceResult zero = convergence_estimate(twice, rect, 16);
    CHECK(zero.sups[0] == 0.0);
}
