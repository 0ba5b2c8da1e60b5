#include "renormlab/slit_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace renormlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_theta(double theta) {
    if (!(theta > 0.0 && theta < kPi))
        throw std::domain_error("theta must lie in (0, pi)");
}

void require_interval(const Interval& A) {
    if (!(A.hi > A.lo)) throw std::domain_error("degenerate interval");
}

// Affine chart sending A to (-1, 1).
struct Normalizer {
    double mid, half;
    explicit Normalizer(Interval A) : mid(A.mid()), half(0.5 * A.length()) {}
    Complex to_unit(Complex z) const { return (z - mid) / half; }
    Complex from_unit(Complex w) const { return mid + half * w; }
};

// Hyperbolic distance in the half-plane.
double halfplane_distance(Complex a, Complex b) {
    double num = std::norm(a - b);
    double den = 2.0 * a.imag() * b.imag();
    return std::acosh(1.0 + num / den);
}

// Strip {|Re w| < pi/2} to H+ : w -> i e^{iw}.
Complex strip_to_halfplane(Complex w) {
    return Complex(0.0, 1.0) * std::exp(Complex(0.0, 1.0) * w);
}

} // namespace

KThetaValue k_of_theta(double theta) {
    require_theta(theta);
    KThetaValue v;
    v.formula = std::log(std::tan(kPi / 2.0 - theta / 2.0));
    // Measured: distance from the apex of the upper boundary arc to A; the
    // boundary is equidistant from A, so the apex represents it.
    double apex = 1.0 / std::tan(theta / 2.0);
    v.measured = distance_to_interval({-1.0, 1.0}, Complex(0.0, apex));
    v.discrepant = std::abs(v.formula - v.measured) > 1e-6;
    return v;
}

PoincareRegion poincare_region(Interval A, double theta) {
    require_theta(theta);
    require_interval(A);
    Normalizer nrm(A);
    // In the normalized chart the disk bounding the H+ side has center
    // i cot(theta) and radius 1/sin(theta); its top point is i cot(theta/2).
    double ct = 1.0 / std::tan(theta);
    double r = 1.0 / std::sin(theta);
    PoincareRegion region;
    region.A = A;
    region.theta = theta;
    region.upper = Disk{nrm.from_unit(Complex(0.0, ct)), nrm.half * r};
    region.lower = Disk{nrm.from_unit(Complex(0.0, -ct)), nrm.half * r};
    return region;
}

bool region_contains(const PoincareRegion& region, Complex z) {
    if (z.imag() == 0.0) return region.A.contains_strict(z.real());
    return region.upper.contains(z) || region.lower.contains(z);
}

Complex strip_coordinate(Interval A, Complex z) {
    require_interval(A);
    Normalizer nrm(A);
    return std::asin(nrm.to_unit(z));
}

double hyperbolic_distance(Interval A, Complex z1, Complex z2) {
    require_interval(A);
    SlitPlane plane{A};
    if (!plane.contains(z1) || !plane.contains(z2))
        throw std::domain_error("hyperbolic_distance: point on the slit");
    Complex w1 = strip_coordinate(A, z1);
    Complex w2 = strip_coordinate(A, z2);
    return halfplane_distance(strip_to_halfplane(w1), strip_to_halfplane(w2));
}

double distance_to_interval(Interval A, Complex z) {
    require_interval(A);
    SlitPlane plane{A};
    if (z.imag() == 0.0 && A.contains_strict(z.real())) return 0.0;
    if (!plane.contains(z)) throw std::domain_error("distance_to_interval: point on the slit");
    // Adaptive refinement of the infimum over a discretization of A.
    double margin = 1e-9 * A.length();
    double lo = A.lo + margin, hi = A.hi - margin;
    double best_a = lo, best_d = std::numeric_limits<double>::infinity();
    const int coarse = 65;
    for (int i = 0; i < coarse; ++i) {
        double a = lo + (hi - lo) * static_cast<double>(i) / (coarse - 1);
        double d = hyperbolic_distance(A, z, Complex(a, 0.0));
        if (d < best_d) {
            best_d = d;
            best_a = a;
        }
    }
    double step = (hi - lo) / (coarse - 1);
    while (step > 1e-8 * std::max(1.0, A.length())) {
        double a_lo = std::max(lo, best_a - step);
        double a_hi = std::min(hi, best_a + step);
        for (int i = 0; i <= 16; ++i) {
            double a = a_lo + (a_hi - a_lo) * static_cast<double>(i) / 16.0;
            double d = hyperbolic_distance(A, z, Complex(a, 0.0));
            if (d < best_d) {
                best_d = d;
                best_a = a;
            }
        }
        step = (a_hi - a_lo) / 16.0;
    }
    return best_d;
}

Curve poincare_boundary(Interval A, double theta, int resolution) {
    require_theta(theta);
    require_interval(A);
    PoincareRegion region = poincare_region(A, theta);
    Normalizer nrm(A);
    double ct = 1.0 / std::tan(theta);
    double r = 1.0 / std::sin(theta);
    (void)region;
    // Upper arc of the upper circle from +1 to -1, then lower arc of the
    // lower circle from -1 back to +1 (normalized chart, then mapped out).
    Curve c;
    c.closed = true;
    int half = std::max(resolution / 2, 8);
    double phi0 = theta - kPi / 2.0;  // angle of the point +1 on the upper circle
    double phi1 = kPi - theta + kPi / 2.0;
    for (int i = 0; i < half; ++i) {
        double phi = phi0 + (phi1 - phi0) * static_cast<double>(i) / half;
        Complex w = Complex(0.0, ct) + r * std::exp(Complex(0.0, phi));
        c.points.push_back(nrm.from_unit(w));
    }
    for (int i = 0; i < half; ++i) {
        double phi = -phi1 + (phi1 - phi0) * static_cast<double>(i) / half;
        Complex w = Complex(0.0, -ct) + r * std::exp(Complex(0.0, phi));
        c.points.push_back(nrm.from_unit(w));
    }
    return c;
}

Curve square_image_boundary(double theta, int resolution) {
    require_theta(theta);
    double ct = 1.0 / std::tan(theta);
    double r = 1.0 / std::sin(theta);
    // D((-1,1),theta) is symmetric under z -> -z, so Q covers its image twice;
    // mapping the Re >= 0 half of the boundary once gives the simple curve.
    // That half: upper-circle arc from apex to +1, lower-circle arc +1 down to
    // the lower apex.
    Curve c;
    c.closed = true;
    int half = std::max(resolution / 2, 8);
    double phi_apex = kPi / 2.0;
    double phi_at_1 = theta - kPi / 2.0;
    for (int i = 0; i < half; ++i) {
        double phi = phi_apex + (phi_at_1 - phi_apex) * static_cast<double>(i) / half;
        Complex z = Complex(0.0, ct) + r * std::exp(Complex(0.0, phi));
        c.points.push_back(z * z);
    }
    for (int i = 0; i < half; ++i) {
        double phi = -phi_at_1 + (-phi_apex + phi_at_1) * static_cast<double>(i) / half;
        Complex z = Complex(0.0, -ct) + r * std::exp(Complex(0.0, phi));
        c.points.push_back(z * z);
    }
    return c;
}

std::optional<Complex> ls_intersection(double K, double theta) {
    if (!(K > 1.0)) throw std::domain_error("ls_intersection: K must exceed 1");
    require_theta(theta);
    // Boundary arc of Q(D((-1,1),theta)) in H+ is the image of the quarter
    // arc of the upper circle between +1 and the apex.
    double a_ct = 1.0 / std::tan(theta);
    double a_r = 1.0 / std::sin(theta);
    Complex a_center(0.0, a_ct);
    // D((-K,1),theta) upper circle.
    double mid = 0.5 * (1.0 - K), half = 0.5 * (K + 1.0);
    Complex k_center(mid, half / std::tan(theta));
    double k_r = half / std::sin(theta);

    auto arc_point = [&](double phi) { return a_center + a_r * std::exp(Complex(0.0, phi)); };
    auto s_of = [&](double phi) {
        Complex w = arc_point(phi);
        return std::abs(w * w - k_center) - k_r;
    };

    double phi_lo = theta - kPi / 2.0, phi_hi = kPi / 2.0;
    const int n = 4096;
    double prev_phi = phi_lo;
    double prev_s = s_of(prev_phi);
    std::optional<Complex> found;
    for (int i = 1; i <= n; ++i) {
        double phi = phi_lo + (phi_hi - phi_lo) * static_cast<double>(i) / n;
        double s = s_of(phi);
        if ((s < 0.0) != (prev_s < 0.0)) {
            // Seed for a 2-D Newton iteration on the two implicit equations
            // |sqrt(w) - a_center|^2 = a_r^2, |w - k_center|^2 = k_r^2.
            double lo = prev_phi, hi2 = phi, slo = prev_s;
            for (int it = 0; it < 90; ++it) {
                double m = 0.5 * (lo + hi2);
                if ((s_of(m) < 0.0) == (slo < 0.0)) lo = m;
                else hi2 = m;
            }
            Complex z0 = arc_point(0.5 * (lo + hi2));
            Complex w = z0 * z0;
            auto F1 = [&](Complex u) { return std::norm(std::sqrt(u) - a_center) - a_r * a_r; };
            auto F2 = [&](Complex u) { return std::norm(u - k_center) - k_r * k_r; };
            double h = 1e-7 * std::max(1.0, std::abs(w));
            for (int it = 0; it < 40; ++it) {
                double f1 = F1(w), f2 = F2(w);
                if (std::abs(f1) + std::abs(f2) < 1e-13 * std::max(1.0, std::norm(w))) break;
                double a11 = (F1(w + h) - f1) / h, a12 = (F1(w + Complex(0, h)) - f1) / h;
                double a21 = (F2(w + h) - f2) / h, a22 = (F2(w + Complex(0, h)) - f2) / h;
                double det = a11 * a22 - a12 * a21;
                if (std::abs(det) < 1e-30) break;
                double dx = (f1 * a22 - f2 * a12) / det;
                double dy = (f2 * a11 - f1 * a21) / det;
                w -= Complex(dx, dy);
            }
            // Reject the shared endpoint crossing at w = 1 and anything that
            // is not genuinely in H+ to the right of it.
            if (w.imag() > 1e-6 && w.real() > 1.0 + 1e-6) {
                found = w;
                break;
            }
        }
        prev_phi = phi;
        prev_s = s;
    }
    return found;
}

SchwarzReport schwarz_inclusion_check(const AnalyticMap& map, Interval A, Interval B,
                                      double theta, int samples,
                                      std::optional<Interval> target) {
    require_theta(theta);
    require_interval(A);
    require_interval(B);
    if (!(B.lo >= A.lo && B.hi <= A.hi))
        throw std::domain_error("schwarz_inclusion_check: B must be a subinterval of A");

    SchwarzReport rep;
    Interval image;
    if (target) {
        image = *target;
    } else {
        double u = map(Complex(B.lo, 0.0)).real();
        double v = map(Complex(B.hi, 0.0)).real();
        image = {std::min(u, v), std::max(u, v)};
    }
    rep.target = image;
    PoincareRegion target_region = poincare_region(image, theta);

    Curve boundary = poincare_boundary(B, theta, samples);
    double slack = 1e-9 * std::max(1.0, image.length());
    PoincareRegion slack_region = target_region;
    slack_region.upper.radius += slack;
    slack_region.lower.radius += slack;
    Interval widened{image.lo - slack, image.hi + slack};
    slack_region.A = widened;

    for (const auto& z : boundary.points) {
        Complex w = map(z);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw std::runtime_error("schwarz_inclusion_check: map evaluation failed");
        ++rep.samples_checked;
        bool inside = region_contains(slack_region, w) ||
                      (std::abs(w.imag()) <= slack && widened.contains(w.real()));
        if (!inside) {
            rep.inclusion_holds = false;
            if (rep.violations.size() < 16) {
                double excess = std::min(std::abs(w - target_region.upper.center) - target_region.upper.radius,
                                         std::abs(w - target_region.lower.center) - target_region.lower.radius);
                rep.violations.push_back({z, w, excess});
            }
        }
    }
    return rep;
}

} // namespace renormlab
