#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "renormlab/curve.hpp"
#include "renormlab/interval.hpp"

namespace renormlab {

// The slit plane C_A = (C \ R) u A for an open interval A.
struct SlitPlane {
    Interval A;
    bool contains(Complex z) const {
        return z.imag() != 0.0 || A.contains_strict(z.real());
    }
};

struct Disk {
    Complex center;
    double radius = 0.0;
    bool contains(Complex z) const { return std::abs(z - center) < radius; }
};

// Two-disk Poincare neighborhood D(A, theta): conjugate-symmetric disks whose
// boundary circles pass through the endpoints of A and meet R at external
// angle theta. theta = pi/2 degenerates to the round disk over A.
struct PoincareRegion {
    Interval A;
    double theta = 0.0;
    Disk upper;
    Disk lower;
};

struct KThetaValue {
    double formula = 0.0;   // log tan(pi/2 - theta/2), as printed in the source formula
    double measured = 0.0;  // geodesic distance from the boundary arc to A
    bool discrepant = false;
};

struct SchwarzViolation {
    Complex sample;  // boundary sample of D(B, theta)
    Complex image;   // its image, found outside D(target, theta)
    double excess = 0.0;
};

struct SchwarzReport {
    bool inclusion_holds = true;
    int samples_checked = 0;
    std::vector<SchwarzViolation> violations;  // capped
    Interval target;                           // interval actually tested against
};

KThetaValue k_of_theta(double theta);

PoincareRegion poincare_region(Interval A, double theta);

bool region_contains(const PoincareRegion& region, Complex z);

// Hyperbolic distance in C_A through the strip uniformization w -> sin(w)
// (after the affine normalization of A to (-1,1)).
double hyperbolic_distance(Interval A, Complex z1, Complex z2);

// inf over a in A of d(z, a), located by adaptive refinement to 1e-8.
double distance_to_interval(Interval A, Complex z);

// Preimage of (the normalized) z under the strip uniformization sin.
Complex strip_coordinate(Interval A, Complex z);

// Boundary of D(A, theta) for normalized A = (-1,1), as a closed polyline.
Curve poincare_boundary(Interval A, double theta, int resolution);

// Image of the boundary of D((-1,1), theta) under z -> z^2, deduplicated to a
// simple closed curve.
Curve square_image_boundary(double theta, int resolution);

// Crossing point in H+ of the boundaries of Q(D((-1,1),theta)) and
// D((-K,1),theta); nullopt when they do not cross (theta above the empirical
// threshold).
std::optional<Complex> ls_intersection(double K, double theta);

using AnalyticMap = std::function<Complex(Complex)>;

// Samples the boundary of D(B, theta), maps each sample, and tests membership
// in D(target, theta); target defaults to the image interval Psi(B). A clean
// report is sampling evidence, not a certificate.
SchwarzReport schwarz_inclusion_check(const AnalyticMap& map, Interval A, Interval B,
                                      double theta, int samples,
                                      std::optional<Interval> target = std::nullopt);

} // namespace renormlab
