#include "renormlab/epstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace renormlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool on_cut(Complex w, double c, double tol) {
    // The branch cut of sqrt(w - c) is the ray (-inf, c]; signed zeros select
    // an edge, so only an exact zero imaginary part with Re <= c is ambiguous
    // -- and that still carries a sign bit. A true failure is only the branch
    // point itself.
    return std::abs(w - Complex(c, 0.0)) < tol;
}

Complex sqrt_step(Complex w, double c, int sign) {
    return static_cast<double>(sign) * std::sqrt(w - c);
}

// Nearest of the two square roots of zeta to the reference point.
Complex nearest_root(Complex zeta, Complex ref) {
    Complex r = std::sqrt(zeta);
    return (std::norm(r - ref) <= std::norm(-r - ref)) ? r : -r;
}

} // namespace

Complex InverseChain::pull(Complex w) const {
    // Invert f^{q-1} : W_c -> W step by step, landing in the prescribed
    // backward interval at each stage.
    for (int k = q - 2; k >= 0; --k) w = sqrt_step(w, c, branch_signs[static_cast<std::size_t>(k)]);
    return w;
}

Complex InverseChain::f_inverse(Complex w) const {
    return pull(w) - c;
}

bool InverseChain::well_defined(Complex w, double tol) const {
    for (int k = q - 2; k >= 0; --k) {
        if (on_cut(w, c, tol)) return false;
        w = sqrt_step(w, c, branch_signs[static_cast<std::size_t>(k)]);
    }
    return true;
}

Complex EpsteinMap::operator()(Complex z) const {
    Complex w = scale * z;
    for (int i = 0; i < q; ++i) w = w * w + base.c;
    return w / scale;
}

double EpsteinMap::operator()(double x) const {
    return iterate(base, scale * x, q) / scale;
}

double EpsteinMap::derivative(double x) const {
    return iterate_derivative(base, scale * x, q);
}

std::pair<Complex, Complex> EpsteinMap::preimages(Complex w) const {
    Complex u = chain.f_inverse(scale * w);
    Complex r = std::sqrt(u);
    return {r / scale, -r / scale};
}

EpsteinMap rescale(const QuadraticMap& f, const RenormLevel& level, double L) {
    if (L <= 1.0) throw std::invalid_argument("rescale: enlargement must exceed 1");
    double beta = level.beta;
    if (std::abs(iterate(f, beta, level.q) - beta) > 1e-8 * std::max(1.0, std::abs(beta)))
        throw std::invalid_argument("rescale: level does not belong to this map");
    double r = std::abs(beta);
    if (!(level.w.lo < -L * r && level.w.hi > L * r))
        throw std::invalid_argument("rescale: L-enlarged interval does not fit inside W");

    EpsteinMap g;
    g.base = f;
    g.q = level.q;
    g.scale = beta;
    g.level_beta = beta;
    g.enlargement = L;
    g.p = 1;

    g.chain.c = f.c;
    g.chain.q = level.q;
    g.chain.w_c = level.w_c;
    g.chain.branch_signs.clear();
    double mid = level.w_c.mid();
    for (int j = 0; j <= level.q - 2; ++j) {
        double v = iterate(f, mid, j);
        if (v == 0.0) throw std::invalid_argument("rescale: backward interval touches the critical point");
        g.chain.branch_signs.push_back(v > 0.0 ? 1 : -1);
    }

    // J' = (-j', j') with g(+-j') = sup J; g is monotone beyond the boundary
    // fixed point, so bisection on [b, j] suffices.
    double b = std::abs(g.boundary());
    double j = g.j();
    double lo = b, hi = j;
    double glo = g(lo), ghi = g(hi);
    if (!(ghi > j)) {
        g.j_prime = j;  // degenerate; epstein_verify reports the failure
    } else {
        (void)glo;
        for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (lo + hi);
            if (g(m) < j) lo = m;
            else hi = m;
            if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
        }
        g.j_prime = 0.5 * (lo + hi);
    }
    return g;
}

EpsteinReport epstein_verify(const EpsteinMap& g, int samples) {
    EpsteinReport rep;
    double b = std::abs(g.boundary());
    double j = g.j();

    // (iv) boundary identity g(+-b) = b (signed).
    double sb = g.boundary();
    rep.boundary_identity = std::abs(g(std::abs(sb)) - sb) <= 1e-12 * std::max(1.0, std::abs(sb)) &&
                            std::abs(g(-std::abs(sb)) - sb) <= 1e-12 * std::max(1.0, std::abs(sb));

    // (i) unimodality on J': derivative sign constant on each side of 0.
    {
        const int n = 2048;
        int pos_sign = 0, neg_sign = 0;
        for (int i = 1; i <= n; ++i) {
            double x = g.j_prime * static_cast<double>(i) / n * 0.999999;
            double d = g.derivative(x);
            int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
            if (s == 0) continue;
            if (pos_sign == 0) pos_sign = s;
            else if (s != pos_sign) rep.unimodal = false;
            d = g.derivative(-x);
            s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
            if (s == 0) continue;
            if (neg_sign == 0) neg_sign = s;
            else if (s != neg_sign) rep.unimodal = false;
        }
        if (pos_sign == 0 || neg_sign == 0 || pos_sign == neg_sign) rep.unimodal = false;
    }

    // (ii) closure(J') inside J.
    rep.closure_margin = j - g.j_prime;
    rep.closure_inside = rep.closure_margin > 1e-12 * std::max(1.0, j);

    // (iii) inverse-branch chain well-defined on a grid over C_J (physical
    // coordinates), avoiding the slits themselves.
    {
        double jp = j * std::abs(g.scale);
        int nx = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(samples) * 1.6)));
        int ny = std::max(5, samples / nx);
        int checked = 0;
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                double x = -2.0 * jp + 4.0 * jp * (ix + 0.5) / nx;
                double y = -jp + 2.0 * jp * (iy + 0.5) / ny;
                Complex w(x, y);
                if (std::abs(y) < 1e-12 * jp && std::abs(x) >= jp) continue;  // on the slit
                ++checked;
                bool ok = g.chain.well_defined(w);
                if (ok) {
                    // Forward consistency: f^{q-1}(h(w)) should recover w.
                    Complex z = g.chain.pull(w);
                    for (int i = 0; i < g.q - 1; ++i) z = z * z + g.base.c;
                    ok = std::abs(z - w) <= 1e-7 * std::max(1.0, std::abs(w));
                }
                if (!ok) {
                    ++rep.chain_failures;
                    if (rep.chain_failures == 1) rep.chain_witness = w;
                }
            }
        }
        rep.inverse_chain_ok = (rep.chain_failures == 0) && checked > 0;
    }
    return rep;
}

double boundary_fixed_point_multiplier(const EpsteinMap& g) {
    return g.derivative(std::abs(g.boundary()));
}

double escape_radius(const EpsteinMap& g) {
    // Physical escape: |w| beyond the positive fixed point of f grows under
    // every application of f, so any cap at or beyond it is forward-stable.
    double phys = g.base.boundary_fixed_point() * (1.0 + 1e-9) + 1e-9;
    double r = phys / std::abs(g.scale);
    return std::max(r, 1.5 * g.j());
}

Curve slit_plane_boundary(const EpsteinMap& g, int resolution) {
    double j = g.j();
    double R = escape_radius(g);
    Curve loop;
    loop.closed = true;
    int n_edge = std::max(resolution / 6, 24);
    // Arc chords carry real geometric error (sagitta R dphi^2 / 8) that the
    // adaptive lift cannot repair, so sample them finely regardless of the
    // requested output resolution.
    int n_arc = std::max(resolution, 2048);

    // Edge samples exclude both endpoints; tips and corner points are pushed
    // explicitly with exact signed-zero tags. Quadratic grading clusters the
    // samples toward the slit tip.
    auto add_edge = [&](double from, double to, double imag_sign) {
        bool dense_at_start = std::abs(from) < std::abs(to);
        for (int i = 1; i < n_edge; ++i) {
            double t = static_cast<double>(i) / n_edge;
            double grade = dense_at_start ? t * t : 1.0 - (1.0 - t) * (1.0 - t);
            double x = from + (to - from) * grade;
            loop.points.emplace_back(x, std::copysign(0.0, imag_sign));
        }
    };
    auto add_arc = [&](double phi0, double phi1) {
        for (int i = 1; i < n_arc; ++i) {
            double phi = phi0 + (phi1 - phi0) * static_cast<double>(i) / n_arc;
            loop.points.emplace_back(R * std::cos(phi), R * std::sin(phi));
        }
    };

    loop.points.emplace_back(j, +0.0);   // right slit tip
    add_edge(j, R, +1.0);                // upper edge of the right slit, outward
    loop.points.emplace_back(R, +0.0);
    add_arc(0.0, kPi);                   // upper semicircle
    loop.points.emplace_back(-R, +0.0);
    add_edge(-R, -j, +1.0);              // upper edge of the left slit, inward
    loop.points.emplace_back(-j, +0.0);  // left slit tip
    add_edge(-j, -R, -1.0);              // lower edge of the left slit, outward
    loop.points.emplace_back(-R, -0.0);
    add_arc(kPi, 2.0 * kPi);             // lower semicircle
    loop.points.emplace_back(R, -0.0);
    add_edge(R, j, -1.0);                // lower edge of the right slit, inward
    return loop;
}

namespace {

struct LiftState {
    const EpsteinMap* g;
    double out_cap = 0.0;
    double sagitta = 0.0;
    std::vector<Complex>* out;
};

Complex lift_value(const EpsteinMap& g, Complex input_pt) {
    return g.chain.f_inverse(g.scale * input_pt);
}

void lift_segment(LiftState& st, Complex a, Complex z_a, Complex b, int depth) {
    const EpsteinMap& g = *st.g;
    Complex zeta_b = lift_value(g, b);
    Complex s_b = nearest_root(zeta_b, z_a);
    Complex m = 0.5 * (a + b);
    Complex zeta_m = lift_value(g, m);
    Complex s_m = nearest_root(zeta_m, z_a);
    Complex s_b2 = nearest_root(zeta_b, s_m);

    bool branch_stable = std::norm(s_b - s_b2) < 1e-30 ||
                         std::abs(s_b - s_b2) < 1e-12 * std::abs(s_b);
    double seg = std::abs(s_b - z_a);
    double dev = std::abs(s_m - 0.5 * (z_a + s_b));
    bool too_long = seg > st.out_cap;
    bool too_curved = dev > st.sagitta;
    bool near_branch_point = seg > 0.6 * std::max({std::abs(z_a), std::abs(s_b), 1e-12});

    if ((too_long || too_curved || !branch_stable || near_branch_point) && depth < 48) {
        lift_segment(st, a, z_a, m, depth + 1);
        Complex z_m = st.out->empty() ? s_m : st.out->back();
        lift_segment(st, m, z_m, b, depth + 1);
        return;
    }
    if (!branch_stable)
        throw TraceError("pullback_boundary: branch choice unresolved after max refinement");
    st.out->push_back(s_m);
    st.out->push_back(s_b);
}

} // namespace

Curve pullback_boundary(const EpsteinMap& g, const Curve& region_boundary, int resolution) {
    if (region_boundary.points.size() < 8)
        throw std::invalid_argument("pullback_boundary: degenerate input loop");

    // Rough pass: winding of F^{-1}(beta * loop) around 0 must be +-1, and the
    // estimated perimeter of the lift sets the output step cap.
    const auto& pts = region_boundary.points;
    std::size_t n = pts.size();
    double winding = 0.0;
    double perimeter = 0.0;
    {
        Complex prev_zeta = lift_value(g, pts[0]);
        Complex prev_root = std::sqrt(prev_zeta);
        double prev_arg = std::arg(prev_zeta);
        for (std::size_t i = 1; i <= n; ++i) {
            Complex zeta = lift_value(g, pts[i % n]);
            double arg = std::arg(zeta);
            double d = arg - prev_arg;
            while (d > kPi) d -= 2.0 * kPi;
            while (d < -kPi) d += 2.0 * kPi;
            winding += d;
            Complex root = nearest_root(zeta, prev_root);
            perimeter += std::abs(root - prev_root);
            prev_root = root;
            prev_arg = arg;
            prev_zeta = zeta;
        }
        winding /= 2.0 * kPi;
    }
    if (std::abs(std::abs(winding) - 1.0) > 0.15)
        throw TraceError("pullback_boundary: interior critical value missing (winding != 1)");

    LiftState st;
    st.g = &g;
    st.out_cap = std::max(2.0 * perimeter / std::max(resolution, 16), 1e-12);
    st.sagitta = 4e-8 * perimeter;
    std::vector<Complex> half;
    st.out = &half;

    Complex z0 = std::sqrt(lift_value(g, pts[0]));
    half.push_back(z0);
    Complex z_prev = z0;
    for (std::size_t i = 1; i <= n; ++i) {
        lift_segment(st, pts[(i - 1) % n], z_prev, pts[i % n], 0);
        z_prev = half.back();
    }
    // One full traversal of the input loop lifts onto half the boundary and
    // ends at -z0; the second sheet is the exact negation.
    Curve out;
    out.closed = true;
    out.points.reserve(2 * half.size());
    for (const auto& z : half) out.points.push_back(z / g.scale);
    for (const auto& z : half) out.points.push_back(-z / g.scale);
    out = decimate(out, 0.25 * st.sagitta / std::abs(g.scale));
    return out;
}

Curve omega_boundary(const EpsteinMap& g, int resolution) {
    Curve region = slit_plane_boundary(g, resolution);
    return pullback_boundary(g, region, resolution);
}

Tower build_tower(const QuadraticMap& f, const std::vector<RenormLevel>& levels, int m,
                  double L, int N) {
    if (m < 1 || m > static_cast<int>(levels.size()))
        throw std::invalid_argument("build_tower: m out of range");
    Tower tower;
    tower.m = m;
    tower.N = N;
    tower.L = L;

    double beta_m = levels[static_cast<std::size_t>(m - 1)].beta;
    int q_m = levels[static_cast<std::size_t>(m - 1)].q;

    // Empirical ratio bounds over the available levels, widened so the strict
    // inequalities remain meaningful when the extremal ratio is attained.
    double mu = std::numeric_limits<double>::infinity(), lam = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
        double ratio = std::abs(levels[static_cast<std::size_t>(i)].beta) /
                       std::abs(levels[static_cast<std::size_t>(i + 1)].beta);
        mu = std::min(mu, ratio);
        lam = std::max(lam, ratio);
    }
    tower.mu_hat = mu * (1.0 - 1e-9);
    tower.lambda_hat = lam * (1.0 + 1e-9);

    EpsteinMap bottom;
    tower.all_checks_pass = true;
    std::vector<double> xs(257);
    for (int i = 0; i < 257; ++i) xs[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / 256.0;

    for (int n = m; n >= 1; --n) {
        const RenormLevel& lv = levels[static_cast<std::size_t>(n - 1)];
        EpsteinMap gm = rescale(f, lv, L);
        gm.scale = beta_m;  // shared rescaling z -> beta_m z
        gm.p = q_m / lv.q;
        // j_prime was solved in bottom coordinates; recompute in the shared
        // frame where the boundary point is beta_n / beta_m.
        {
            double b = std::abs(gm.boundary());
            double j = gm.j();
            double lo = b, hi = j;
            if (gm(hi) > j) {
                for (int it = 0; it < 200; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (gm(mid) < j) lo = mid;
                    else hi = mid;
                }
                gm.j_prime = 0.5 * (lo + hi);
            } else {
                gm.j_prime = j;
            }
        }
        if (n == m) bottom = gm;

        TowerLevel tl;
        tl.n = n;
        tl.p = gm.p;
        tl.beta = lv.beta / beta_m;
        tl.I = Interval{-std::abs(tl.beta), std::abs(tl.beta)};
        tl.J = Interval{-L * std::abs(tl.beta), L * std::abs(tl.beta)};

        int k = m - n;
        double p2 = std::pow(2.0, k), pN = std::pow(static_cast<double>(N), k);
        tl.p_bounds_ok = (tl.p >= p2 - 0.5) && (tl.p <= pN + 0.5);
        double ab = std::abs(tl.beta);
        tl.beta_bounds_ok = (k == 0) ? (std::abs(ab - 1.0) < 1e-12)
                                     : (ab > std::pow(tower.mu_hat, k) && ab < std::pow(tower.lambda_hat, k));

        double err = 0.0;
        for (double x : xs) {
            double y = x;
            for (int i = 0; i < tl.p; ++i) y = gm(y);
            err = std::max(err, std::abs(bottom(x) - y));
        }
        tl.composition_error = err;
        tl.composition_ok = err <= 1e-9;

        tower.all_checks_pass = tower.all_checks_pass && tl.p_bounds_ok && tl.beta_bounds_ok &&
                                tl.composition_ok;
        tower.maps.push_back(gm);
        tower.levels.push_back(tl);
    }
    return tower;
}

ConvergenceResult convergence_estimate(const std::vector<EpsteinMap>& maps,
                                       BoundingBox rect, int grid) {
    if (maps.size() < 2) throw std::invalid_argument("convergence_estimate: need >= 2 maps");
    ConvergenceResult res;
    std::vector<Complex> pts;
    for (int iy = 0; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix)
            pts.emplace_back(rect.xmin + rect.width() * (ix + 0.5) / grid,
                             rect.ymin + rect.height() * (iy + 0.5) / grid);

    auto in_domain = [](const EpsteinMap& g, Complex z) {
        Complex w = g(z);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
        return w.imag() != 0.0 || std::abs(w.real()) < g.j();
    };

    for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
        double sup = 0.0;
        int used = 0;
        for (const auto& z : pts) {
            if (!in_domain(maps[i], z) || !in_domain(maps[i + 1], z)) {
                ++res.excluded_points;
                continue;
            }
            sup = std::max(sup, std::abs(maps[i](z) - maps[i + 1](z)));
            ++used;
        }
        if (used == 0) throw std::invalid_argument("convergence_estimate: empty common domain");
        res.sups.push_back(sup);
    }
    return res;
}

} // namespace renormlab
