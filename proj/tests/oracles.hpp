#pragma once

// Independent oracle computations for the test suite. These deliberately use
// different algorithms (and higher precision where it matters) than the
// library implementation they check.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace oracle {

using ldbl = long double;

inline ldbl fq0(ldbl c, int q) {
    ldbl x = 0.0L;
    for (int i = 0; i < q; ++i) x = x * x + c;
    return x;
}

// Long-double bisection on c -> f_c^q(0) over a sign-changing bracket.
inline ldbl superstable(int q, ldbl lo, ldbl hi) {
    ldbl flo = fq0(lo, q);
    for (int it = 0; it < 200; ++it) {
        ldbl mid = 0.5L * (lo + hi);
        ldbl fm = fq0(mid, q);
        if (fm == 0.0L) return mid;
        if ((fm < 0.0L) == (flo < 0.0L)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5L * (lo + hi);
}

// All fixed points of f_c^q in [lo, hi] by exhaustive sign scan + bisection.
inline std::vector<double> fixed_point_scan(double c, int q, double lo, double hi, int n = 200000) {
    auto g = [&](ldbl x) {
        ldbl y = x;
        for (int i = 0; i < q; ++i) y = y * y + c;
        return y - x;
    };
    std::vector<double> roots;
    ldbl prev_x = lo, prev_g = g(lo);
    for (int i = 1; i <= n; ++i) {
        ldbl x = lo + (hi - lo) * static_cast<ldbl>(i) / n;
        ldbl gx = g(x);
        if ((gx < 0.0L) != (prev_g < 0.0L)) {
            ldbl a = prev_x, b = x, ga = prev_g;
            for (int it = 0; it < 120; ++it) {
                ldbl m = 0.5L * (a + b);
                ldbl gm = g(m);
                if ((gm < 0.0L) == (ga < 0.0L)) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            roots.push_back(static_cast<double>(0.5L * (a + b)));
        }
        prev_x = x;
        prev_g = gx;
    }
    return roots;
}

// Image of f^q over [lo, hi] on a dense grid.
inline std::pair<double, double> interval_image(double c, int q, double lo, double hi,
                                                int n = 100000) {
    ldbl mn = 1e300L, mx = -1e300L;
    for (int i = 0; i <= n; ++i) {
        ldbl x = lo + (hi - lo) * static_cast<ldbl>(i) / n;
        ldbl y = x;
        for (int k = 0; k < q; ++k) y = y * y + c;
        mn = std::min(mn, y);
        mx = std::max(mx, y);
    }
    return {static_cast<double>(mn), static_cast<double>(mx)};
}

inline double fd_derivative(const std::function<double(double)>& f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Distance from z to the interval (-1,1) in the slit plane C_(-1,1), by an
// independent route: uniformize to the half-plane, send the geodesic carried
// by (-1,1) to the imaginary axis with a Moebius map, and use the closed-form
// distance to that axis, sinh d = |cot arg|.
inline double strip_distance_to_unit_interval(std::complex<double> z) {
    std::complex<double> zeta =
        std::complex<double>(0.0, 1.0) * std::exp(std::complex<double>(0.0, 1.0) * std::asin(z));
    std::complex<double> v = (zeta - 1.0) / (zeta + 1.0);
    double psi = std::arg(v);
    return std::asinh(std::abs(1.0 / std::tan(psi)));
}

// Z(K, theta) located purely by bisection on the circle-arc parameter of the
// boundary of Q(D((-1,1),theta)) against the implicit circle of D((-K,1),theta).
inline std::optional<std::complex<double>> arc_crossing(double K, double theta) {
    using C = std::complex<double>;
    const double pi = 3.14159265358979323846;
    C a_center(0.0, 1.0 / std::tan(theta));
    double a_r = 1.0 / std::sin(theta);
    double mid = 0.5 * (1.0 - K), half = 0.5 * (K + 1.0);
    C k_center(mid, half / std::tan(theta));
    double k_r = half / std::sin(theta);
    auto s_of = [&](double phi) {
        C z = a_center + a_r * std::exp(C(0.0, phi));
        return std::abs(z * z - k_center) - k_r;
    };
    double phi_lo = theta - pi / 2.0, phi_hi = pi / 2.0;
    const int n = 20000;
    double prev_phi = phi_lo, prev_s = s_of(phi_lo);
    for (int i = 1; i <= n; ++i) {
        double phi = phi_lo + (phi_hi - phi_lo) * i / static_cast<double>(n);
        double s = s_of(phi);
        if ((s < 0.0) != (prev_s < 0.0)) {
            double a = prev_phi, b = phi, sa = prev_s;
            for (int it = 0; it < 90; ++it) {
                double m = 0.5 * (a + b);
                if ((s_of(m) < 0.0) == (sa < 0.0)) a = m;
                else b = m;
            }
            C z = a_center + a_r * std::exp(C(0.0, 0.5 * (a + b)));
            C w = z * z;
            if (w.imag() > 1e-6 && w.real() > 1.0 + 1e-6) return w;
        }
        prev_phi = phi;
        prev_s = s;
    }
    return std::nullopt;
}

} // namespace oracle
