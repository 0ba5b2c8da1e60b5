#include "renormlab/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace renormlab {

namespace {

constexpr double kBetaTol = 1e-13;
constexpr double kResolutionFloor = 1e-9;

// Sign of (f^q)'(x) without under/overflow: parity of negative chain factors.
// Returns 0 if some orbit point is within eps of the critical point.
int derivative_sign(const QuadraticMap& f, double x, int q, double eps = 1e-13) {
    int neg = 0;
    double y = x;
    for (int i = 0; i < q; ++i) {
        if (std::abs(y) <= eps) return 0;
        if (y < 0.0) ++neg;
        y = f(y);
    }
    return (neg % 2 == 0) ? 1 : -1;
}

double fq_minus_x(const QuadraticMap& f, double x, int q) {
    return iterate(f, x, q) - x;
}

// Refine a bracketed root of g(x) = f^q(x) - x by bisection + Newton polish.
double refine_fixed_point(const QuadraticMap& f, int q, double lo, double hi) {
    double flo = fq_minus_x(f, lo, q);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = fq_minus_x(f, mid, q);
        if (fm == 0.0 || hi - lo < 1e-16 * (1.0 + std::abs(mid))) {
            lo = hi = mid;
            break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        double d = iterate_derivative(f, x, q) - 1.0;
        if (std::abs(d) < 1e-12) break;
        double step = fq_minus_x(f, x, q) / d;
        double xn = x - step;
        if (!std::isfinite(xn) || std::abs(xn - x) > 0.5) break;
        x = xn;
    }
    return x;
}

} // namespace

double QuadraticMap::boundary_fixed_point() const {
    double disc = 1.0 - 4.0 * c;
    if (disc < 0.0) throw std::domain_error("quadratic map has no real fixed point");
    return 0.5 * (1.0 + std::sqrt(disc));
}

double iterate(const QuadraticMap& f, double x, int k) {
    if (k < 0) throw std::invalid_argument("iterate: negative count");
    for (int i = 0; i < k; ++i) x = f(x);
    return x;
}

double iterate_derivative(const QuadraticMap& f, double x, int k) {
    double d = 1.0;
    double y = x;
    for (int i = 0; i < k; ++i) {
        d *= 2.0 * y;
        y = f(y);
    }
    return d;
}

double find_superstable(int q, Interval bracket, double tol) {
    if (q < 1) throw std::invalid_argument("find_superstable: q must be positive");
    auto h = [q](double c) { return iterate(QuadraticMap{c}, 0.0, q); };
    double lo = bracket.lo, hi = bracket.hi;
    double flo = h(lo), fhi = h(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw NoRootError("find_superstable: no sign change in bracket");
    // Bisection with a secant probe once the bracket is small.
    for (int it = 0; it < 300; ++it) {
        double mid;
        if (it > 20 && std::abs(fhi - flo) > 0.0) {
            mid = lo - flo * (hi - lo) / (fhi - flo);
            double m2 = 0.5 * (lo + hi);
            if (!(mid > lo && mid < hi)) mid = m2;
        } else {
            mid = 0.5 * (lo + hi);
        }
        double fm = h(mid);
        if (std::abs(fm) <= tol) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if (hi - lo < 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
            double best = (std::abs(flo) < std::abs(fhi)) ? lo : hi;
            if (std::abs(h(best)) <= tol) return best;
            throw ToleranceError("find_superstable: residual above tolerance at bracket floor");
        }
    }
    throw ToleranceError("find_superstable: did not converge");
}

FeigenbaumResult feigenbaum_parameter(int depth) {
    if (depth < 4) throw std::invalid_argument("feigenbaum_parameter: depth must be >= 4");
    FeigenbaumResult out;
    out.parameters.push_back(0.0);                                    // c(1)
    out.parameters.push_back(find_superstable(2, {-1.5, -0.5}));      // c(2)
    for (int k = 2; k <= depth; ++k) {
        int q = 1 << k;
        double prev = out.parameters[k - 1];
        double gap = out.parameters[k - 1] - out.parameters[k - 2];   // negative
        auto h = [q](double c) { return iterate(QuadraticMap{c}, 0.0, q); };
        // Walk down from just below the previous superstable parameter until
        // h changes sign; h(prev) = 0 exactly, so start strictly below.
        double c0 = prev + gap * 1e-3;
        double s0 = h(c0);
        double step = gap / 16.0;
        double c1 = c0, s1 = s0;
        bool bracketed = false;
        for (int i = 0; i < 64; ++i) {
            double cn = c1 + step;
            double sn = h(cn);
            if ((sn < 0.0) != (s1 < 0.0)) {
                out.parameters.push_back(find_superstable(q, {cn, c1}));
                bracketed = true;
                break;
            }
            c1 = cn;
            s1 = sn;
        }
        if (!bracketed)
            throw NoRootError("feigenbaum_parameter: cascade bracket walk failed at depth " +
                              std::to_string(k));
    }
    const auto& cs = out.parameters;
    for (std::size_t n = 2; n < cs.size(); ++n)
        out.ratios.push_back((cs[n - 1] - cs[n - 2]) / (cs[n] - cs[n - 1]));
    double delta = out.ratios.back();
    out.extrapolated = cs.back() + (cs.back() - cs[cs.size() - 2]) / (delta - 1.0);
    return out;
}

std::optional<RenormLevel> detect_renormalization(const QuadraticMap& f, int q) {
    if (q < 2) throw std::invalid_argument("detect_renormalization: q must be >= 2");
    if (!f.admits_invariant_interval()) return std::nullopt;

    // Side convention: f^q(x) = f^{q-1}(x^2 + c) near 0, so 0 is a local
    // minimum iff (f^{q-1})'(c) > 0.
    int side = derivative_sign(f, f.c, q - 1);
    if (side == 0) {
        // Degenerate chain factor; probe directly.
        double d = iterate(f, 1e-4, q) - iterate(f, 0.0, q);
        side = (d > 0.0) ? 1 : -1;
    }

    double x_max = f.boundary_fixed_point();
    // Scan the prescribed side for fixed points of f^q, nearest first.
    const int n_scan = 4096;
    double prev_x = side > 0 ? 1e-9 : -1e-9;
    double prev_g = fq_minus_x(f, prev_x, q);
    std::vector<double> candidates;
    for (int i = 1; i <= n_scan; ++i) {
        double x = side * (x_max + 1e-9) * static_cast<double>(i) / n_scan;
        double g = fq_minus_x(f, x, q);
        if (g == 0.0) {
            candidates.push_back(x);
        } else if ((g < 0.0) != (prev_g < 0.0)) {
            double a = std::min(prev_x, x), b = std::max(prev_x, x);
            candidates.push_back(refine_fixed_point(f, q, a, b));
        }
        prev_x = x;
        prev_g = g;
    }

    for (double beta : candidates) {
        double mult = iterate_derivative(f, beta, q);
        if (!(mult > 1.0 + 1e-9)) continue;

        // First repelling candidate on the correct side; run all checks.
        RenormLevel level;
        level.q = q;
        level.beta = beta;
        level.interval = SignedInterval{beta};
        level.a = q;

        double r = std::abs(beta);
        double image_lo = iterate(f, beta, q);       // = beta up to tolerance
        double image_ext = iterate(f, 0.0, q);       // the fold value
        // f^q(I) is spanned by the endpoint value and the critical value.
        if (std::abs(image_lo - beta) > 1e-8 * std::max(1.0, r)) return std::nullopt;
        if (std::abs(image_ext) > r + 1e-9) return std::nullopt;  // f^q(I) not inside I
        // High return 0 in f^q(I): fold value on the opposite side of beta.
        if (beta * image_ext > 1e-9) return std::nullopt;

        // Unimodality of f^q on I: the derivative vanishes only at 0, i.e.
        // no orbit point f^i(x), 1 <= i <= q-1, hits 0 for x in I.
        {
            const int n_grid = 2048;
            int sign_pos = 0;
            for (int i = 1; i <= n_grid; ++i) {
                double x = r * static_cast<double>(i) / n_grid;
                int s = derivative_sign(f, x, q);
                if (s == 0) {
                    if (i < n_grid) return std::nullopt;  // interior critical point
                    continue;
                }
                if (sign_pos == 0) sign_pos = s;
                else if (s != sign_pos) return std::nullopt;
            }
            int sign_neg = 0;
            for (int i = 1; i <= n_grid; ++i) {
                double x = -r * static_cast<double>(i) / n_grid;
                int s = derivative_sign(f, x, q);
                if (s == 0) {
                    if (i < n_grid) return std::nullopt;
                    continue;
                }
                if (sign_neg == 0) sign_neg = s;
                else if (s != sign_neg) return std::nullopt;
            }
            if (sign_pos == 0 || sign_neg == 0 || sign_pos == sign_neg) return std::nullopt;
        }

        // Periodicity: the interval cycle I, f(I), ..., f^{q-1}(I) must have
        // pairwise disjoint interiors (touching endpoints allowed).
        {
            std::vector<Interval> cycle;
            cycle.push_back({-r, r});
            for (int i = 1; i < q; ++i) {
                const Interval& k = cycle.back();
                Interval img;
                if (k.lo < 0.0 && k.hi > 0.0) {
                    img = {f.c, std::max(f(k.lo), f(k.hi))};
                } else {
                    double a = f(k.lo), b = f(k.hi);
                    img = {std::min(a, b), std::max(a, b)};
                }
                cycle.push_back(img);
            }
            std::vector<Interval> sorted = cycle;
            std::sort(sorted.begin(), sorted.end(),
                      [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
            double tol = 1e-10 * std::max(1.0, x_max);
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
                if (sorted[i].hi > sorted[i + 1].lo + tol) return std::nullopt;
        }

        auto [wc, wrange] = monotone_range(f, level);
        level.w_c = wc;
        level.w = wrange;
        if (!(wrange.lo < -r && wrange.hi > r)) return std::nullopt;  // I not inside W
        return level;
    }
    return std::nullopt;
}

std::pair<Interval, Interval> monotone_range(const QuadraticMap& f, const RenormLevel& level) {
    int q = level.q;
    double r = std::abs(level.beta);
    // f(I) = [c, c + beta^2].
    Interval fi{f.c, f.c + r * r};
    double cap = f.boundary_fixed_point() + 1.0;

    // March each endpoint outward until the sign of (f^{q-1})' flips, then
    // bisect the flip to locate the critical point of the chain.
    auto dsign = [&](double x) { return derivative_sign(f, x, q - 1); };
    int s_mid = dsign(fi.mid());
    if (s_mid == 0) throw ToleranceError("monotone_range: degenerate derivative inside f(I)");

    double h = std::max(fi.length(), 1e-6) / 1024.0;
    auto march = [&](double start, double dir, bool& capped) {
        double x = start;
        capped = false;
        while (true) {
            double xn = x + dir * h;
            if (std::abs(xn) > cap) {
                capped = true;
                return dir > 0 ? cap : -cap;
            }
            int s = dsign(xn);
            if (s != s_mid) {
                // Bisect [x, xn] on the sign flip.
                double a = x, b = xn;
                for (int it = 0; it < 100; ++it) {
                    double m = 0.5 * (a + b);
                    if (dsign(m) == s_mid) a = m;
                    else b = m;
                    if (std::abs(b - a) < 1e-14 * std::max(1.0, std::abs(m))) break;
                }
                double loc = 0.5 * (a + b);
                if (std::abs(b - a) > 1e-10)
                    throw ToleranceError("monotone_range: endpoint localization above 1e-10");
                return loc;
            }
            x = xn;
        }
    };

    bool cap_lo = false, cap_hi = false;
    double lo = march(fi.lo, -1.0, cap_lo);
    double hi = march(fi.hi, +1.0, cap_hi);
    Interval wc{lo, hi};
    double wa = iterate(f, lo, q - 1), wb = iterate(f, hi, q - 1);
    Interval w{std::min(wa, wb), std::max(wa, wb)};
    return {wc, w};
}

namespace {

// Restrict the monotone range of a level to the enclosing periodic interval.
// The full maximal range always reaches critical values of coarser levels, so
// the renormalization-scale statement I(q_n) in W_n in I(q_{n-1}) holds for
// the clipped range only; every property used downstream (L.I in W, inverse
// branch on C_J) survives the restriction.
void clip_range_to(const QuadraticMap& f, RenormLevel& level, double r_prev) {
    Interval w = level.w;
    double lo = std::max(w.lo, -r_prev);
    double hi = std::min(w.hi, r_prev);
    if (lo == w.lo && hi == w.hi) return;
    // Pull the clipped endpoints back through the monotone branch.
    auto value = [&](double x) { return iterate(f, x, level.q - 1); };
    double a = level.w_c.lo, b = level.w_c.hi;
    bool increasing = value(a) < value(b);
    auto pull = [&](double y) {
        double xa = a, xb = b;
        for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (xa + xb);
            if ((value(m) < y) == increasing) xa = m;
            else xb = m;
            if (xb - xa < 1e-16 * std::max(1.0, std::abs(m))) break;
        }
        return 0.5 * (xa + xb);
    };
    double ca = pull(increasing ? lo : hi);
    double cb = pull(increasing ? hi : lo);
    level.w = {lo, hi};
    level.w_c = {std::min(ca, cb), std::max(ca, cb)};
    level.w_capped_lo = level.w_capped_hi = false;
}

} // namespace

std::vector<RenormLevel> renorm_cascade(const QuadraticMap& f, int N, int max_depth) {
    if (N < 2) throw std::invalid_argument("renorm_cascade: N must be >= 2");
    std::vector<RenormLevel> levels;
    int q_prev = 1;
    double r_prev = std::numeric_limits<double>::infinity();
    for (int depth = 0; depth < max_depth; ++depth) {
        bool found = false;
        for (int a = 2; a <= N; ++a) {
            int q = q_prev * a;
            auto level = detect_renormalization(f, q);
            if (!level) continue;
            double r = std::abs(level->beta);
            if (!(r < r_prev * (1.0 - 1e-12))) continue;  // must nest strictly
            level->a = a;
            if (!levels.empty()) clip_range_to(f, *level, r_prev);
            levels.push_back(*level);
            q_prev = q;
            r_prev = r;
            found = true;
            break;
        }
        if (!found) break;
        if (2.0 * r_prev < kResolutionFloor) break;  // numerical resolution floor
    }
    return levels;
}

RealBoundsReport verify_real_bounds(const QuadraticMap& f,
                                    const std::vector<RenormLevel>& levels, double L) {
    if (levels.size() < 2)
        throw std::invalid_argument("verify_real_bounds: need at least two levels");
    RealBoundsReport rep;
    rep.L = L;
    rep.mu_hat = std::numeric_limits<double>::infinity();
    rep.lambda_hat = 0.0;
    rep.L_hat = std::numeric_limits<double>::infinity();
    rep.all_pass = true;
    (void)f;

    for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
        RealBoundsLevelCheck chk;
        chk.n = static_cast<int>(n + 1);
        double rn = std::abs(levels[n].beta);
        double rn1 = std::abs(levels[n + 1].beta);
        chk.ratio = rn / rn1;
        chk.nested = rn1 < rn * (1.0 - 1e-12);
        const Interval& w = levels[n].w;
        chk.enlargement_fits = (w.lo < -L * rn) && (w.hi > L * rn);
        double fit = std::min(-w.lo, w.hi) / rn;
        rep.L_hat = std::min(rep.L_hat, fit);
        rep.mu_hat = std::min(rep.mu_hat, chk.ratio);
        rep.lambda_hat = std::max(rep.lambda_hat, chk.ratio);
        rep.all_pass = rep.all_pass && chk.nested && chk.enlargement_fits && chk.ratio > 1.0;
        rep.pairs.push_back(chk);
    }
    for (std::size_t i = 0; i + 1 < rep.pairs.size(); ++i)
        rep.ratio_diffs.push_back(std::abs(rep.pairs[i + 1].ratio - rep.pairs[i].ratio));
    return rep;
}

} // namespace renormlab
