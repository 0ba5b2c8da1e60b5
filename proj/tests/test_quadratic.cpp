#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "renormlab/quadratic.hpp"

using namespace renormlab;

TEST_CASE("iterate basics") {
    CHECK(iterate(QuadraticMap{-1.0}, 0.0, 2) == 0.0);
    CHECK(iterate(QuadraticMap{0.0}, 0.5, 3) == doctest::Approx(0.00390625).epsilon(1e-15));
    CHECK(iterate(QuadraticMap{0.0}, 0.5, 0) == 0.5);
    // Orbit boundedness near the accumulation parameter.
    double v = iterate(QuadraticMap{-1.401155}, 0.0, 16);
    long double vl = 0.0L;
    for (int i = 0; i < 16; ++i) vl = vl * vl + (-1.401155L);
    CHECK(v == doctest::Approx(static_cast<double>(vl)).epsilon(1e-10));
    CHECK(std::abs(v) <= 1.0);
    // Escape is permitted output, no exception.
    CHECK(iterate(QuadraticMap{1.0}, 2.0, 8) > 4.0);
}

TEST_CASE("find_superstable against the long-double oracle") {
    CHECK(find_superstable(2, {-1.5, -0.5}) == doctest::Approx(-1.0).epsilon(1e-13));

    double c4 = find_superstable(4, {-1.4, -1.2});
    double c4_oracle = static_cast<double>(oracle::superstable(4, -1.4L, -1.2L));
    CHECK(c4 == doctest::Approx(c4_oracle).epsilon(1e-12));
    CHECK(c4 == doctest::Approx(-1.3107026413368329).epsilon(1e-10));

    double c8 = find_superstable(8, {-1.41, -1.36});
    double c8_oracle = static_cast<double>(oracle::superstable(8, -1.41L, -1.36L));
    CHECK(c8 == doctest::Approx(c8_oracle).epsilon(1e-12));
    CHECK(std::abs(iterate(QuadraticMap{c8}, 0.0, 8)) <= 1e-12);

    double c3 = find_superstable(3, {-1.8, -1.7});
    CHECK(c3 == doctest::Approx(-1.7548776662466928).epsilon(1e-10));

    CHECK_THROWS_AS(find_superstable(2, {0.1, 0.2}), NoRootError);
}

TEST_CASE("superstable residual and primitivity") {
    for (int q : {4, 8, 16}) {
        FeigenbaumResult fr = feigenbaum_parameter(4);
        int k = q == 4 ? 2 : (q == 8 ? 3 : 4);
        double c = fr.parameters[k];
        QuadraticMap f{c};
        CHECK(std::abs(iterate(f, 0.0, q)) <= 1e-12);
        for (int qp = 1; qp < q; ++qp) CHECK(std::abs(iterate(f, 0.0, qp)) > 1e-6);
    }
}

TEST_CASE("feigenbaum_parameter sequence, ratios, extrapolation") {
    FeigenbaumResult r4 = feigenbaum_parameter(4);
    CHECK(r4.parameters.size() == 5);  // c(1), c(2), c(4), c(8), c(16)
    CHECK(r4.ratios.size() == 3);
    CHECK(r4.parameters[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r4.parameters[2] == doctest::Approx(-1.3107026413368329).epsilon(1e-10));

    FeigenbaumResult r8 = feigenbaum_parameter(8);
    const auto& rr = r8.ratios;
    for (std::size_t i = rr.size() - 2; i + 1 < rr.size(); ++i)
        CHECK(std::abs(rr[i + 1] - rr[i]) < 1e-2);
    // Frozen from the high-precision oracle run.
    FeigenbaumResult r10 = feigenbaum_parameter(10);
    CHECK(r10.extrapolated == doctest::Approx(-1.4011551890926397).epsilon(1e-10));
}

TEST_CASE("detect_renormalization at the period-4 superstable parameter") {
    QuadraticMap f{-1.3107026413368329};
    auto level = detect_renormalization(f, 2);
    REQUIRE(level.has_value());
    CHECK(level->q == 2);
    // 0 is a local maximum of f^2 here, so beta < 0.
    CHECK(level->beta < 0.0);
    CHECK(level->beta == doctest::Approx(-0.7492808496638508).epsilon(1e-10));

    // Oracle: direct interval-image computation on a fine grid.
    double r = std::abs(level->beta);
    auto [img_lo, img_hi] = oracle::interval_image(f.c, 2, -r, r);
    CHECK(img_lo >= -r - 1e-9);
    CHECK(img_hi <= r + 1e-9);
    // High return: 0 inside the image.
    CHECK(img_lo <= 0.0);
    CHECK(img_hi >= 0.0);

    // Second derivative sign convention: beta > 0 iff local minimum at 0.
    double h = 1e-5;
    double second = iterate(f, h, 2) - 2.0 * iterate(f, 0.0, 2) + iterate(f, -h, 2);
    CHECK(((second > 0.0) == (level->beta > 0.0)));
}

TEST_CASE("detect_renormalization rejections") {
    CHECK_FALSE(detect_renormalization(QuadraticMap{0.0}, 2).has_value());
    // No period-3 level in the doubling combinatorics; oracle agrees: every
    // fixed point of f^3 on the required side fails the multiplier test.
    QuadraticMap f{-1.4011551890920506};
    CHECK_FALSE(detect_renormalization(f, 3).has_value());
    auto roots = oracle::fixed_point_scan(f.c, 3, -f.boundary_fixed_point(), 0.0);
    for (double b : roots) {
        double mult = iterate_derivative(f, b, 3);
        CHECK_FALSE(mult > 1.0 + 1e-9);
    }
}

TEST_CASE("renorm_cascade structure") {
    FeigenbaumResult fr = feigenbaum_parameter(10);
    QuadraticMap f{fr.extrapolated};
    auto levels = renorm_cascade(f, 2, 6);
    REQUIRE(levels.size() == 6);
    int q = 1;
    double prev = 1e300;
    for (const auto& lv : levels) {
        q *= 2;
        CHECK(lv.q == q);
        CHECK(std::abs(lv.beta) < prev);
        prev = std::abs(lv.beta);
    }
    // Superstable-window bracketing oracle: each level's beta is a genuine
    // fixed point of f^q with repelling multiplier.
    for (const auto& lv : levels) {
        CHECK(iterate(f, lv.beta, lv.q) == doctest::Approx(lv.beta).epsilon(1e-8));
        CHECK(iterate_derivative(f, lv.beta, lv.q) > 1.0);
    }

    auto only_one = renorm_cascade(QuadraticMap{-1.0}, 2, 3);
    CHECK(only_one.size() == 1);
    CHECK(only_one[0].q == 2);

    CHECK(renorm_cascade(QuadraticMap{0.2}, 4, 4).empty());
}

TEST_CASE("monotone_range") {
    QuadraticMap f{-1.3107026413368329};
    auto level = detect_renormalization(f, 2);
    REQUIRE(level.has_value());
    auto [wc, w] = monotone_range(f, *level);
    double r = std::abs(level->beta);
    CHECK(w.lo < -r);
    CHECK(w.hi > r);
    // q = 2: the only critical point of f^{q-1} = f is 0, so W_c ends at 0.
    CHECK(wc.hi == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(wc.lo < f.c);

    // Oracle: sign-change scan of d/dx f^{q-1} over a fine grid finds no
    // critical point inside W_c.
    auto df = [&](double x) { return iterate_derivative(f, x, level->q - 1); };
    int sign0 = df(wc.mid()) > 0 ? 1 : -1;
    for (int i = 1; i < 2000; ++i) {
        double x = wc.lo + (wc.hi - wc.lo) * i / 2000.0;
        CHECK((df(x) > 0 ? 1 : -1) == sign0);
    }

    // Deeper level: W_n nested inside I(q_{n-1}).
    FeigenbaumResult fr = feigenbaum_parameter(10);
    QuadraticMap g{fr.extrapolated};
    auto levels = renorm_cascade(g, 2, 4);
    REQUIRE(levels.size() >= 3);
    for (std::size_t n = 1; n + 1 < levels.size(); ++n) {
        const Interval in_prev = levels[n - 1].interval.as_interval();
        CHECK(levels[n].w.lo >= in_prev.lo - 1e-12);
        CHECK(levels[n].w.hi <= in_prev.hi + 1e-12);
    }
}

TEST_CASE("verify_real_bounds on the cascade") {
    FeigenbaumResult fr = feigenbaum_parameter(10);
    QuadraticMap f{fr.extrapolated};
    auto levels = renorm_cascade(f, 2, 6);
    REQUIRE(levels.size() >= 5);
    RealBoundsReport rep = verify_real_bounds(f, levels, 1.05);
    for (std::size_t i = 1; i < rep.pairs.size(); ++i) {
        CHECK(rep.pairs[i].nested);
        CHECK(rep.pairs[i].enlargement_fits);
    }
    CHECK(rep.mu_hat > 1.0);
    CHECK(rep.lambda_hat < 10.0);
    CHECK(rep.L_hat > 1.05);
    // Ratio sequence stabilizes: successive differences below 1% of value.
    const auto& p = rep.pairs;
    for (std::size_t i = 2; i + 1 < p.size(); ++i)
        CHECK(std::abs(p[i + 1].ratio - p[i].ratio) < 0.01 * p[i].ratio);
}

TEST_CASE("verify_real_bounds flags a ratio violation") {
    FeigenbaumResult fr = feigenbaum_parameter(6);
    QuadraticMap f{fr.extrapolated};
    auto levels = renorm_cascade(f, 2, 3);
    REQUIRE(levels.size() >= 2);
    auto broken = levels;
    broken[1].beta = broken[0].beta;  // hypothetical ratio-1 pair
    RealBoundsReport rep = verify_real_bounds(f, broken, 1.05);
    CHECK(rep.pairs[0].ratio == doctest::Approx(1.0));
    CHECK_FALSE(rep.pairs[0].nested);
    CHECK_FALSE(rep.all_pass);
}
