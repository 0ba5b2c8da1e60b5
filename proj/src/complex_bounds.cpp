#include "renormlab/complex_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "renormlab/modulus.hpp"
#include "renormlab/slit_geometry.hpp"

namespace renormlab {

namespace {

// Deterministic 64-bit mix for sampling (splitmix64).
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

} // namespace

InvariantSetApprox invariant_set(const EpsteinMap& g, int depth, int density) {
    if (depth < 0 || density < 2) throw std::invalid_argument("invariant_set: bad parameters");
    InvariantSetApprox set;
    set.depth = depth;
    set.points_by_depth.resize(static_cast<std::size_t>(depth) + 1);

    auto& seeds = set.points_by_depth[0];
    for (int i = 0; i < density; ++i)
        seeds.emplace_back(-1.0 + 2.0 * static_cast<double>(i) / (density - 1), 0.0);

    double fwd_tol = 1e-9;
    for (int d = 1; d <= depth; ++d) {
        const auto& prev = set.points_by_depth[static_cast<std::size_t>(d - 1)];
        auto& cur = set.points_by_depth[static_cast<std::size_t>(d)];
        cur.reserve(2 * prev.size());
        for (const auto& w : prev) {
            if (!g.chain.well_defined(g.scale * w)) {
                ++set.skipped_branch_failures;
                continue;
            }
            auto [zp, zm] = g.preimages(w);
            for (const Complex& z : {zp, zm}) {
                Complex back = g(z);
                if (std::abs(back - w) > fwd_tol * std::max(1.0, std::abs(w))) {
                    ++set.skipped_domain_exits;
                    continue;
                }
                cur.push_back(z);
            }
        }
    }
    return set;
}

Curve hull_boundary_of_points(const std::vector<Complex>& cloud, int resolution) {
    if (cloud.empty()) throw std::invalid_argument("hull_boundary: empty cloud");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : cloud) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    double diameter = std::max(xmax - xmin, ymax - ymin);
    if (diameter <= 0.0) diameter = 1.0;
    double h = diameter / std::max(resolution, 4);

    const int pad = 3;
    int w = static_cast<int>(std::ceil((xmax - xmin) / h)) + 2 * pad + 1;
    int hgt = static_cast<int>(std::ceil((ymax - ymin) / h)) + 2 * pad + 1;
    std::vector<std::uint8_t> filled(static_cast<std::size_t>(w) * hgt, 0);
    auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * w + i; };

    for (const auto& p : cloud) {
        int i = pad + static_cast<int>(std::floor((p.real() - xmin) / h));
        int j = pad + static_cast<int>(std::floor((p.imag() - ymin) / h));
        filled[idx(i, j)] = 1;
    }
    // One-cell dilation closes sampling gaps.
    std::vector<std::uint8_t> dil = filled;
    for (int j = 0; j < hgt; ++j)
        for (int i = 0; i < w; ++i)
            if (filled[idx(i, j)])
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        int i2 = i + di, j2 = j + dj;
                        if (i2 >= 0 && i2 < w && j2 >= 0 && j2 < hgt) dil[idx(i2, j2)] = 1;
                    }

    // Exterior flood fill from the border; everything unreached is "inside"
    // (cloud plus its holes).
    std::vector<std::uint8_t> exterior(static_cast<std::size_t>(w) * hgt, 0);
    std::queue<std::pair<int, int>> bfs;
    auto push_if = [&](int i, int j) {
        if (i < 0 || i >= w || j < 0 || j >= hgt) return;
        std::size_t k = idx(i, j);
        if (exterior[k] || dil[k]) return;
        exterior[k] = 1;
        bfs.push({i, j});
    };
    for (int i = 0; i < w; ++i) {
        push_if(i, 0);
        push_if(i, hgt - 1);
    }
    for (int j = 0; j < hgt; ++j) {
        push_if(0, j);
        push_if(w - 1, j);
    }
    while (!bfs.empty()) {
        auto [i, j] = bfs.front();
        bfs.pop();
        push_if(i + 1, j);
        push_if(i - 1, j);
        push_if(i, j + 1);
        push_if(i, j - 1);
    }

    // Directed boundary edges between filled (non-exterior) and exterior,
    // region on the left; assemble into loops.
    auto is_filled = [&](int i, int j) {
        if (i < 0 || i >= w || j < 0 || j >= hgt) return false;
        return exterior[idx(i, j)] == 0;
    };
    // Key corners by (i, j) lattice index; each directed edge start -> end.
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
    auto add_edge = [&](int i0, int j0, int i1, int j1) {
        edges[{i0, j0}].push_back({i1, j1});
    };
    for (int j = 0; j < hgt; ++j)
        for (int i = 0; i < w; ++i) {
            if (!is_filled(i, j)) continue;
            if (!is_filled(i, j + 1)) add_edge(i + 1, j + 1, i, j + 1);  // top, westward
            if (!is_filled(i, j - 1)) add_edge(i, j, i + 1, j);          // bottom, eastward
            if (!is_filled(i - 1, j)) add_edge(i, j + 1, i, j);          // left, southward
            if (!is_filled(i + 1, j)) add_edge(i + 1, j, i + 1, j + 1);  // right, northward
        }

    std::vector<Curve> loops;
    while (!edges.empty()) {
        auto it = edges.begin();
        std::pair<int, int> start = it->first;
        std::pair<int, int> cur = start;
        std::pair<int, int> prev_dir{0, 0};
        Curve loop;
        loop.closed = true;
        while (true) {
            auto jt = edges.find(cur);
            if (jt == edges.end() || jt->second.empty()) break;
            // Prefer the left-most turn relative to the incoming direction to
            // keep touching loops separate.
            std::size_t pick = 0;
            if (jt->second.size() > 1 && (prev_dir.first != 0 || prev_dir.second != 0)) {
                int best = -3;
                for (std::size_t k = 0; k < jt->second.size(); ++k) {
                    auto [ni, nj] = jt->second[k];
                    std::pair<int, int> d{ni - cur.first, nj - cur.second};
                    int cross = prev_dir.first * d.second - prev_dir.second * d.first;
                    int dot = prev_dir.first * d.first + prev_dir.second * d.second;
                    int score = cross > 0 ? 2 : (cross == 0 && dot > 0 ? 1 : 0);
                    if (score > best) {
                        best = score;
                        pick = k;
                    }
                }
            }
            auto next = jt->second[pick];
            jt->second.erase(jt->second.begin() + static_cast<std::ptrdiff_t>(pick));
            if (jt->second.empty()) edges.erase(jt);
            prev_dir = {next.first - cur.first, next.second - cur.second};
            loop.points.emplace_back(xmin + (cur.first - pad) * h, ymin + (cur.second - pad) * h);
            cur = next;
            if (cur == start) break;
        }
        if (loop.points.size() >= 4) loops.push_back(std::move(loop));
    }
    if (loops.empty()) throw std::runtime_error("hull_boundary: no contour found");

    std::size_t best = 0;
    double best_area = -1.0;
    for (std::size_t k = 0; k < loops.size(); ++k) {
        double a = std::abs(polygon_area(loops[k]));
        if (a > best_area) {
            best_area = a;
            best = k;
        }
    }
    Curve out = loops[best];
    if (polygon_area(out) < 0.0) std::reverse(out.points.begin(), out.points.end());
    // Merge collinear staircase runs.
    Curve merged;
    merged.closed = true;
    std::size_t n = out.points.size();
    for (std::size_t k = 0; k < n; ++k) {
        Complex a = out.points[(k + n - 1) % n];
        Complex b = out.points[k];
        Complex c = out.points[(k + 1) % n];
        double cross = (b.real() - a.real()) * (c.imag() - a.imag()) -
                       (b.imag() - a.imag()) * (c.real() - a.real());
        if (std::abs(cross) > 1e-12 * h * h) merged.points.push_back(b);
    }
    return merged.points.size() >= 4 ? merged : out;
}

Curve hull_boundary(const InvariantSetApprox& set, int resolution) {
    std::vector<Complex> cloud;
    cloud.reserve(set.total_points());
    for (const auto& v : set.points_by_depth) cloud.insert(cloud.end(), v.begin(), v.end());
    return hull_boundary_of_points(cloud, resolution);
}

ContainmentReport compact_containment_check(const InvariantSetApprox& set, Interval J0,
                                            double bound) {
    ContainmentReport rep;
    rep.slit_distance = std::numeric_limits<double>::infinity();
    for (const auto& level : set.points_by_depth) {
        for (const auto& z : level) {
            rep.max_modulus = std::max(rep.max_modulus, std::abs(z));
            // Distance to the rays R \ J0.
            double d_right = (z.real() >= J0.hi) ? std::abs(z.imag())
                                                 : std::abs(z - Complex(J0.hi, 0.0));
            double d_left = (z.real() <= J0.lo) ? std::abs(z.imag())
                                                : std::abs(z - Complex(J0.lo, 0.0));
            rep.slit_distance = std::min({rep.slit_distance, d_right, d_left});
            if (std::abs(z.imag()) < 1e-4 && std::abs(z.real()) > 1.0 + 1e-4) {
                rep.tangential_alarm = true;
                ++rep.alarm_count;
            }
        }
    }
    rep.bounded = rep.max_modulus <= bound;
    return rep;
}

InvarianceReport invariance_check(const Curve& hull, const EpsteinMap& g, int samples,
                                  double tolerance, std::uint64_t seed) {
    InvarianceReport rep;
    BoundingBox bb = bounding_box(hull);
    if (tolerance <= 0.0) tolerance = 0.02 * bb.diameter();
    rep.tolerance = tolerance;

    auto inside_enlarged = [&](Complex z) {
        return point_in_polygon(hull, z) || distance_to_curve(hull, z) <= tolerance;
    };

    Rng rng(seed);
    int found = 0;
    int guard = 0;
    while (found < samples && guard < samples * 200) {
        ++guard;
        Complex z(bb.xmin + bb.width() * rng.uniform(), bb.ymin + bb.height() * rng.uniform());
        if (!point_in_polygon(hull, z)) continue;
        ++found;
        ++rep.samples;
        Complex fwd = g(z);
        if (!inside_enlarged(fwd)) ++rep.forward_escapes;
        if (g.chain.well_defined(g.scale * z)) {
            auto [zp, zm] = g.preimages(z);
            if (!inside_enlarged(zp)) ++rep.backward_escapes;
            if (!inside_enlarged(zm)) ++rep.backward_escapes;
        } else {
            ++rep.backward_skipped;
        }
    }
    return rep;
}

namespace {

bool curve_inside_polygon(const Curve& inner, const Curve& outer) {
    for (const auto& p : inner.points)
        if (!point_in_polygon(outer, p)) return false;
    return true;
}

bool core_inside_polygon(const Curve& poly) {
    for (int i = 0; i <= 32; ++i) {
        double x = -1.0 + 2.0 * i / 32.0;
        if (!point_in_polygon(poly, Complex(x, 0.0))) return false;
    }
    return true;
}

double trace_step(const Curve& c, int resolution) {
    return bounding_box(c).diameter() / std::max(resolution, 16);
}

PLRestriction try_candidate(Curve V, Curve Vp, const PLParams& params, int resolution,
                            const std::string& strategy, double dial) {
    PLRestriction cand;
    cand.V = std::move(V);
    cand.V_prime = std::move(Vp);
    cand.strategy = strategy;
    cand.k_or_theta = dial;

    if (!core_inside_polygon(cand.V_prime)) {
        cand.failure = "core [-1,1] not inside V'";
        return cand;
    }
    if (!params.hull.empty() && !curve_inside_polygon(params.hull, cand.V_prime)) {
        cand.failure = "hull not inside V'";
        return cand;
    }
    if (!curve_inside_polygon(cand.V_prime, cand.V)) {
        cand.failure = "V' not inside V";
        return cand;
    }
    double sep = curve_distance(cand.V, cand.V_prime);
    cand.separation = sep;
    double h = trace_step(cand.V_prime, resolution);
    if (sep <= params.separation_factor * h) {
        cand.failure = "separation below discretization threshold";
        return cand;
    }
    ModulusEstimate est = annulus_modulus(cand.V, cand.V_prime, params.grid);
    cand.modulus_raw = est.value;
    cand.modulus = est.richardson;
    if (!(cand.modulus > 0.0)) {
        cand.failure = "nonpositive modulus";
        return cand;
    }
    cand.found = true;
    return cand;
}

} // namespace

PLRestriction find_pl_restriction(const EpsteinMap& g, PLStrategy strategy,
                                  const PLParams& params) {
    PLRestriction best;
    auto keep_best = [&](const PLRestriction& cand) {
        if (cand.separation > best.separation) best = cand;
    };

    if (strategy == PLStrategy::Preimage) {
        Curve region = slit_plane_boundary(g, params.resolution);
        Curve vk = pullback_boundary(g, region, params.resolution);
        for (int k = 1; k <= params.k_max; ++k) {
            Curve vk1 = pullback_boundary(g, vk, params.resolution);
            PLRestriction cand =
                try_candidate(vk, vk1, params, params.resolution, "preimage", k);
            if (cand.found) return cand;
            keep_best(cand);
            vk = std::move(vk1);
        }
        if (best.failure.empty()) best.failure = "no candidate";
        best.strategy = "preimage";
        return best;
    }

    // Poincare dial: V = D((-s, s), theta) for s between 1 and L.
    std::vector<double> scales = params.scale_dial;
    if (scales.empty()) {
        double L = g.enlargement * std::abs(g.boundary());
        scales = {1.0 + 0.6 * (L - 1.0), 1.0 + 0.3 * (L - 1.0)};
    }
    for (double s : scales) {
        for (double theta : params.theta_dial) {
            Curve V = poincare_boundary({-s, s}, theta, params.resolution);
            Curve Vp;
            try {
                Vp = pullback_boundary(g, V, params.resolution);
            } catch (const TraceError&) {
                continue;
            }
            PLRestriction cand = try_candidate(V, Vp, params, params.resolution, "poincare", theta);
            if (cand.found) return cand;
            keep_best(cand);
        }
    }
    if (best.failure.empty()) best.failure = "no candidate";
    best.strategy = "poincare";
    return best;
}

SweepTable complex_bounds_sweep(const QuadraticMap& f, int N, int n_from, int n_to,
                                PLStrategy strategy, const PLParams& params_in,
                                int set_depth, int set_density, int hull_resolution) {
    SweepTable table;
    table.min_modulus = std::numeric_limits<double>::infinity();
    if (n_from > n_to) return table;

    auto levels = renorm_cascade(f, N, n_to);
    for (int n = n_from; n <= n_to; ++n) {
        SweepRow row;
        row.n = n;
        if (n > static_cast<int>(levels.size())) {
            row.status = "cascade level unavailable";
            ++table.failures;
            table.rows.push_back(row);
            continue;
        }
        const RenormLevel& level = levels[static_cast<std::size_t>(n - 1)];
        row.q = level.q;
        try {
            EpsteinMap g = rescale(f, level, 1.05);
            EpsteinReport ver = epstein_verify(g);
            if (!ver.all_pass()) {
                row.status = "epstein verification failed";
                ++table.failures;
                table.rows.push_back(row);
                continue;
            }
            InvariantSetApprox set = invariant_set(g, set_depth, set_density);
            ContainmentReport cont =
                compact_containment_check(set, {-g.j(), g.j()}, 100.0);
            if (cont.tangential_alarm || !cont.bounded || !(cont.slit_distance > 0.0)) {
                row.status = "compact containment failed";
                ++table.failures;
                table.rows.push_back(row);
                continue;
            }
            PLParams params = params_in;
            params.hull = hull_boundary(set, hull_resolution);
            PLRestriction pl = find_pl_restriction(g, strategy, params);
            if (!pl.found) {
                row.status = "no PL restriction: " + pl.failure;
                ++table.failures;
                table.rows.push_back(row);
                continue;
            }
            row.modulus = pl.modulus;
            row.separation = pl.separation;
            row.strategy = pl.strategy;
            row.k_or_theta = pl.k_or_theta;
            row.status = "ok";
            table.min_modulus = std::min(table.min_modulus, pl.modulus);
            table.max_modulus = std::max(table.max_modulus, pl.modulus);
        } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
            ++table.failures;
        }
        table.rows.push_back(row);
    }
    if (!std::isfinite(table.min_modulus)) table.min_modulus = 0.0;
    return table;
}

} // namespace renormlab
