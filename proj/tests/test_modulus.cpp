#include <doctest.h>

#include <cmath>

#include "renormlab/modulus.hpp"

using namespace renormlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

Curve circle(double r, Complex center = {}, int n = 720) {
    Curve c;
    c.closed = true;
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * kPi * i / n;
        c.points.push_back(center + Complex(r * std::cos(a), r * std::sin(a)));
    }
    return c;
}

Curve square(double half, Complex center = {}) {
    Curve c;
    c.closed = true;
    const int per_side = 128;
    auto edge = [&](Complex a, Complex b) {
        for (int i = 0; i < per_side; ++i)
            c.points.push_back(a + (b - a) * (static_cast<double>(i) / per_side));
    };
    Complex tr = center + Complex(half, half), tl = center + Complex(-half, half),
            bl = center + Complex(-half, -half), br = center + Complex(half, -half);
    edge(tr, tl);
    edge(tl, bl);
    edge(bl, br);
    edge(br, tr);
    return c;
}

} // namespace

TEST_CASE("round annulus calibration") {
    // mod({1 < |z| < e^{2pi}}) = 1.
    ModulusEstimate big = annulus_modulus(circle(std::exp(2.0 * kPi)), circle(1.0), 512);
    CHECK(std::abs(big.value - 1.0) < 0.02);
    CHECK(std::abs(big.richardson - 1.0) < std::abs(big.value - 1.0) + 1e-12);

    // mod({1 < |z| < e}) = 1/(2 pi).
    double target = 1.0 / (2.0 * kPi);
    ModulusEstimate small = annulus_modulus(circle(std::exp(1.0)), circle(1.0), 512);
    CHECK(std::abs(small.value - target) / target < 0.02);
    CHECK(std::abs(small.richardson - target) < std::abs(small.value - target) + 1e-12);
}

TEST_CASE("modulus convention and invariants") {
    // Conformal invariance proxy: z -> 2z + 1 leaves the modulus unchanged.
    Curve out1 = circle(4.0), in1 = circle(1.0);
    Curve out2 = circle(8.0, Complex(1.0, 0.0)), in2 = circle(2.0, Complex(1.0, 0.0));
    ModulusEstimate a = annulus_modulus(out1, in1, 192);
    ModulusEstimate b = annulus_modulus(out2, in2, 192);
    CHECK(std::abs(a.richardson - b.richardson) < 2.0 * (a.tolerance() + b.tolerance()) + 1e-4);

    // Monotonicity: shrinking the inner boundary increases the modulus.
    ModulusEstimate shrunk = annulus_modulus(out1, circle(0.5), 192);
    CHECK(shrunk.richardson > a.richardson);

    // Grid convergence: the (grid, 2 grid) gap decreases with resolution.
    Curve sq_out = square(2.0), sq_in = square(0.5);
    ModulusEstimate coarse = annulus_modulus(sq_out, sq_in, 96);
    ModulusEstimate fine = annulus_modulus(sq_out, sq_in, 192);
    CHECK(std::abs(fine.value - fine.richardson) <
          std::abs(coarse.value - coarse.richardson) + 1e-6);

    // value = 1/energy and positivity.
    CHECK(a.value == doctest::Approx(1.0 / a.energy).epsilon(1e-12));
    CHECK(a.value > 0.0);
}

TEST_CASE("square annulus against the fine-grid oracle") {
    // Concentric squares, side ratio 4. Oracle: self-convergence of the same
    // solver at high resolution (Richardson at 768/1536).
    Curve sq_out = square(2.0), sq_in = square(0.5);
    ModulusEstimate oracle = annulus_modulus(sq_out, sq_in, 768);
    ModulusEstimate est = annulus_modulus(sq_out, sq_in, 192);
    CHECK(std::abs(est.richardson - oracle.richardson) / oracle.richardson < 0.01);
}

TEST_CASE("grid annulus structure") {
    GridAnnulus ga = build_grid_annulus(circle(4.0), circle(1.0), 128);
    CHECK(ga.nx > 0);
    CHECK(ga.ny == 128);
    int counts[4] = {0, 0, 0, 0};
    for (auto m : ga.mask) ++counts[m];
    CHECK(counts[0] > 0);  // inside-inner
    CHECK(counts[1] > 0);  // annulus
    CHECK(counts[2] > 0);  // outside-outer
    CHECK(counts[3] > 0);  // boundary band
}

TEST_CASE("geometry errors") {
    CHECK_THROWS_AS(annulus_modulus(circle(1.0), circle(2.0), 64), GeometryError);
    // Coincident boundaries leave no resolvable annulus.
    CHECK_THROWS_AS(annulus_modulus(circle(1.0), circle(1.0 - 1e-9), 64), GeometryError);
}

TEST_CASE("modulus lower bound check") {
    ModulusEstimate est;
    est.value = 1.0;
    est.richardson = 1.0;
    CHECK(modulus_lower_bound_check(est, 0.5));
    ModulusEstimate small;
    small.value = 0.1592;
    small.richardson = 0.1592;
    CHECK_FALSE(modulus_lower_bound_check(small, 0.2));
}
