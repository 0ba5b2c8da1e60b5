#include "renormlab/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace renormlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex polygon_centroid(const Curve& c) {
    double a = 0.0, cx = 0.0, cy = 0.0;
    std::size_t n = c.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex& p = c.points[i];
        const Complex& q = c.points[(i + 1) % n];
        double w = p.real() * q.imag() - q.real() * p.imag();
        a += w;
        cx += (p.real() + q.real()) * w;
        cy += (p.imag() + q.imag()) * w;
    }
    if (std::abs(a) < 1e-300) return c.points.empty() ? Complex{} : c.points[0];
    return {cx / (3.0 * a), cy / (3.0 * a)};
}

// Crossing radii of the ray from center at angle phi with the polygon.
void ray_crossings(const Curve& poly, Complex center, double cph, double sph,
                   std::vector<double>& out) {
    out.clear();
    std::size_t n = poly.points.size();
    // Rotate so the ray is the positive real axis.
    double pu = 0.0, pv = 0.0;
    bool have_prev = false;
    double first_u = 0.0, first_v = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const Complex& p = poly.points[i % n];
        double dx = p.real() - center.real();
        double dy = p.imag() - center.imag();
        double u = dx * cph + dy * sph;
        double v = -dx * sph + dy * cph;
        if (!have_prev) {
            have_prev = true;
            first_u = u;
            first_v = v;
        } else {
            // Half-open rule on v.
            if ((pv <= 0.0 && v > 0.0) || (pv > 0.0 && v <= 0.0)) {
                double t = pv / (pv - v);
                double uc = pu + t * (u - pu);
                if (uc > 0.0) out.push_back(uc);
            }
        }
        pu = u;
        pv = v;
    }
    (void)first_u;
    (void)first_v;
    std::sort(out.begin(), out.end());
}

struct Solve {
    double energy = 0.0;
};

// One full Dirichlet solve at the given angular resolution.
Solve solve_once(const Curve& outer, const Curve& inner, Complex center, int grid_n,
                 GridAnnulus* keep) {
    int ny = grid_n;
    double h = 2.0 * kPi / ny;

    // Radial extent from the polygon vertices.
    double rmin = 1e300, rmax = 0.0;
    for (const auto& p : inner.points) rmin = std::min(rmin, std::abs(p - center));
    for (const auto& p : outer.points) rmax = std::max(rmax, std::abs(p - center));
    if (!(rmin > 0.0)) throw GeometryError("annulus_modulus: inner boundary touches its centroid");
    double x_lo = std::log(rmin) - 2.0 * h;
    double x_hi = std::log(rmax) + 2.0 * h;
    int nx = static_cast<int>(std::ceil((x_hi - x_lo) / h)) + 1;

    // Labels per node: 0 inside-inner, 1 annulus, 2 outside-outer.
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny, 2);
    std::vector<double> in_cross, out_cross;
    for (int j = 0; j < ny; ++j) {
        double phi = -kPi + (j + 0.5) * h;  // offset rows dodge vertex alignments
        double cph = std::cos(phi), sph = std::sin(phi);
        ray_crossings(inner, center, cph, sph, in_cross);
        ray_crossings(outer, center, cph, sph, out_cross);
        for (int i = 0; i < nx; ++i) {
            double r = std::exp(x_lo + i * h);
            auto parity_inside = [&](const std::vector<double>& cr) {
                std::size_t k = static_cast<std::size_t>(
                    std::upper_bound(cr.begin(), cr.end(), r) - cr.begin());
                return ((cr.size() - k) % 2) == 1;
            };
            bool in_inner = parity_inside(in_cross);
            bool in_outer = parity_inside(out_cross);
            std::uint8_t lab;
            if (in_inner) lab = 0;
            else if (in_outer) lab = 1;
            else lab = 2;
            mask[static_cast<std::size_t>(j) * nx + i] = lab;
        }
    }

    auto at = [&](int i, int j) -> std::uint8_t& {
        return mask[static_cast<std::size_t>((j + ny) % ny) * nx + i];
    };

    // Rasterize the boundary polylines into one-cell bands with the Dirichlet
    // value of their side. This also grounds zero-width slit hairs that are
    // invisible to the parity mask.
    auto stamp = [&](const Curve& poly, std::uint8_t value) {
        std::size_t n = poly.points.size();
        for (std::size_t s = 0; s < n; ++s) {
            Complex a = poly.points[s] - center;
            Complex b2 = poly.points[(s + 1) % n] - center;
            double ra = std::abs(a), rb = std::abs(b2);
            if (ra <= 0.0 || rb <= 0.0) throw GeometryError("annulus_modulus: boundary through centroid");
            // Chart-length estimate of the segment for sampling density.
            double xa = std::log(ra), xb = std::log(rb);
            double ya = std::atan2(a.imag(), a.real());
            double yb = std::atan2(b2.imag(), b2.real());
            double dy = yb - ya;
            while (dy > kPi) dy -= 2.0 * kPi;
            while (dy < -kPi) dy += 2.0 * kPi;
            double len = std::hypot(xb - xa, dy);
            int steps = std::max(1, static_cast<int>(std::ceil(len / (0.5 * h))));
            for (int t = 0; t <= steps; ++t) {
                Complex p = a + (b2 - a) * (static_cast<double>(t) / steps);
                double r = std::abs(p);
                if (r <= 0.0) continue;
                double x = std::log(r);
                double phi = std::atan2(p.imag(), p.real());
                int i = static_cast<int>(std::lround((x - x_lo) / h));
                int j = static_cast<int>(std::floor((phi + kPi) / h));
                if (i < 0 || i >= nx) continue;
                at(i, j) = value;
            }
        }
    };
    stamp(inner, 0);
    stamp(outer, 2);
    // A 0-node adjacent to a 2-node means the annulus is unresolved here.
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (at(i, j) != 0) continue;
            if ((i + 1 < nx && at(i + 1, j) == 2) || (i > 0 && at(i - 1, j) == 2) ||
                at(i, j + 1) == 2 || at(i, j - 1) == 2)
                throw GeometryError("annulus_modulus: boundaries collide at this grid resolution");
        }

    // Connectivity of the annulus region (4-neighbor, angular wrap).
    {
        std::size_t total = 0;
        int si = -1, sj = -1;
        for (int j = 0; j < ny && si < 0; ++j)
            for (int i = 0; i < nx; ++i)
                if (at(i, j) == 1) {
                    si = i;
                    sj = j;
                    break;
                }
        for (const auto& m : mask)
            if (m == 1) ++total;
        if (total == 0) throw GeometryError("annulus_modulus: empty annulus region");
        std::vector<std::uint8_t> seen(mask.size(), 0);
        std::queue<std::pair<int, int>> bfs;
        bfs.push({si, sj});
        seen[static_cast<std::size_t>(sj) * nx + si] = 1;
        std::size_t reached = 0;
        while (!bfs.empty()) {
            auto [i, j] = bfs.front();
            bfs.pop();
            ++reached;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int i2 = i + di[k], j2 = (j + dj[k] + ny) % ny;
                if (i2 < 0 || i2 >= nx) continue;
                std::size_t idx = static_cast<std::size_t>(j2) * nx + i2;
                if (mask[idx] == 1 && !seen[idx]) {
                    seen[idx] = 1;
                    bfs.push({i2, j2});
                }
            }
        }
        if (reached != total)
            throw GeometryError("annulus_modulus: annulus region is disconnected");
    }

    // Unknowns = annulus nodes; Dirichlet data on the rest.
    std::vector<int> index(mask.size(), -1);
    std::vector<int> nodes;
    for (std::size_t k = 0; k < mask.size(); ++k)
        if (mask[k] == 1) {
            index[k] = static_cast<int>(nodes.size());
            nodes.push_back(static_cast<int>(k));
        }
    int m = static_cast<int>(nodes.size());

    auto neighbor = [&](int k, int dir) -> int {
        int i = k % nx, j = k / nx;
        switch (dir) {
            case 0: return (i + 1 < nx) ? k + 1 : -1;
            case 1: return (i > 0) ? k - 1 : -1;
            case 2: return ((j + 1) % ny) * nx + i;
            default: return ((j - 1 + ny) % ny) * nx + i;
        }
    };

    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    std::vector<std::uint8_t> degree(static_cast<std::size_t>(m), 0);
    for (int r = 0; r < m; ++r) {
        int k = nodes[static_cast<std::size_t>(r)];
        int deg = 0;
        double rhs = 0.0;
        for (int d = 0; d < 4; ++d) {
            int k2 = neighbor(k, d);
            if (k2 < 0) continue;  // radial wall beyond the outer region margin
            ++deg;
            if (mask[static_cast<std::size_t>(k2)] == 2) rhs += 1.0;
        }
        degree[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(deg);
        b[static_cast<std::size_t>(r)] = rhs;
    }

    // Conjugate gradients with a symmetric Gauss-Seidel preconditioner;
    // fixed sweep order keeps runs deterministic.
    auto apply_A = [&](const std::vector<double>& u, std::vector<double>& out) {
        for (int r = 0; r < m; ++r) {
            int k = nodes[static_cast<std::size_t>(r)];
            double s = degree[static_cast<std::size_t>(r)] * u[static_cast<std::size_t>(r)];
            for (int d = 0; d < 4; ++d) {
                int k2 = neighbor(k, d);
                if (k2 < 0) continue;
                int r2 = index[static_cast<std::size_t>(k2)];
                if (r2 >= 0) s -= u[static_cast<std::size_t>(r2)];
            }
            out[static_cast<std::size_t>(r)] = s;
        }
    };
    auto precond = [&](const std::vector<double>& r_in, std::vector<double>& z) {
        std::fill(z.begin(), z.end(), 0.0);
        for (int pass = 0; pass < 2; ++pass) {
            bool forward = pass == 0;
            for (int t = 0; t < m; ++t) {
                int r = forward ? t : m - 1 - t;
                int k = nodes[static_cast<std::size_t>(r)];
                double s = r_in[static_cast<std::size_t>(r)];
                for (int d = 0; d < 4; ++d) {
                    int k2 = neighbor(k, d);
                    if (k2 < 0) continue;
                    int r2 = index[static_cast<std::size_t>(k2)];
                    if (r2 >= 0) s += z[static_cast<std::size_t>(r2)];
                }
                z[static_cast<std::size_t>(r)] = s / degree[static_cast<std::size_t>(r)];
            }
        }
    };

    std::vector<double> u(static_cast<std::size_t>(m), 0.5);
    std::vector<double> r(static_cast<std::size_t>(m)), z(static_cast<std::size_t>(m)),
        p(static_cast<std::size_t>(m)), Ap(static_cast<std::size_t>(m));
    apply_A(u, Ap);
    double bnorm = 0.0;
    for (int i = 0; i < m; ++i) {
        r[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - Ap[static_cast<std::size_t>(i)];
        bnorm = std::max(bnorm, std::abs(b[static_cast<std::size_t>(i)]));
    }
    precond(r, z);
    p = z;
    double rz = 0.0;
    for (int i = 0; i < m; ++i) rz += r[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    double target = 1e-10 * std::max(1.0, bnorm);
    int max_iter = 40 * static_cast<int>(std::sqrt(static_cast<double>(m))) + 200;
    for (int it = 0; it < max_iter; ++it) {
        double rmax = 0.0;
        for (int i = 0; i < m; ++i) rmax = std::max(rmax, std::abs(r[static_cast<std::size_t>(i)]));
        if (rmax <= target) break;
        apply_A(p, Ap);
        double pAp = 0.0;
        for (int i = 0; i < m; ++i) pAp += p[static_cast<std::size_t>(i)] * Ap[static_cast<std::size_t>(i)];
        if (pAp == 0.0) break;
        double alpha = rz / pAp;
        for (int i = 0; i < m; ++i) {
            u[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
            r[static_cast<std::size_t>(i)] -= alpha * Ap[static_cast<std::size_t>(i)];
        }
        precond(r, z);
        double rz_new = 0.0;
        for (int i = 0; i < m; ++i) rz_new += r[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
        double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < m; ++i)
            p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
    }
    {
        double rmax = 0.0;
        for (int i = 0; i < m; ++i) rmax = std::max(rmax, std::abs(r[static_cast<std::size_t>(i)]));
        if (rmax > 1e3 * target)
            throw std::runtime_error("annulus_modulus: solver did not reach residual target");
    }

    // Dirichlet energy over all edges with at least one annulus endpoint.
    auto value_of = [&](int k) -> double {
        std::uint8_t lab = mask[static_cast<std::size_t>(k)];
        if (lab == 0) return 0.0;
        if (lab == 2) return 1.0;
        return u[static_cast<std::size_t>(index[static_cast<std::size_t>(k)])];
    };
    double energy = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int k = j * nx + i;
            std::uint8_t l0 = mask[static_cast<std::size_t>(k)];
            // Right and up edges, counted once each.
            if (i + 1 < nx) {
                int k2 = k + 1;
                std::uint8_t l1 = mask[static_cast<std::size_t>(k2)];
                if (l0 == 1 || l1 == 1) {
                    double d = value_of(k) - value_of(k2);
                    energy += d * d;
                }
            }
            int k2 = ((j + 1) % ny) * nx + i;
            std::uint8_t l1 = mask[static_cast<std::size_t>(k2)];
            if (l0 == 1 || l1 == 1) {
                double d = value_of(k) - value_of(k2);
                energy += d * d;
            }
        }
    }

    if (keep) {
        keep->grid_n = grid_n;
        keep->nx = nx;
        keep->ny = ny;
        keep->cell_size = h;
        keep->x0 = x_lo;
        keep->center = center;
        keep->mask = mask;
        // Mark the first fixed layer adjacent to the annulus as boundary band.
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                std::size_t k = static_cast<std::size_t>(j) * nx + i;
                if (keep->mask[k] == 1) continue;
                bool adj = false;
                if (i + 1 < nx && keep->mask[k + 1] == 1) adj = true;
                if (i > 0 && keep->mask[k - 1] == 1) adj = true;
                if (keep->mask[static_cast<std::size_t>((j + 1) % ny) * nx + i] == 1) adj = true;
                if (keep->mask[static_cast<std::size_t>((j - 1 + ny) % ny) * nx + i] == 1) adj = true;
                if (adj) keep->mask[k] = 3;
            }
    }

    Solve s;
    s.energy = energy;
    return s;
}

void validate_pair(const Curve& outer, const Curve& inner) {
    if (outer.points.size() < 3 || inner.points.size() < 3)
        throw GeometryError("annulus_modulus: degenerate boundary");
    for (const auto& p : inner.points)
        if (!point_in_polygon(outer, p))
            throw GeometryError("annulus_modulus: inner boundary not inside outer");
}

} // namespace

GridAnnulus build_grid_annulus(const Curve& outer, const Curve& inner, int grid_n) {
    validate_pair(outer, inner);
    GridAnnulus ga;
    solve_once(outer, inner, polygon_centroid(inner), grid_n, &ga);
    return ga;
}

ModulusEstimate annulus_modulus(const Curve& outer, const Curve& inner, int grid_n) {
    validate_pair(outer, inner);
    Complex center = polygon_centroid(inner);
    Solve coarse = solve_once(outer, inner, center, grid_n, nullptr);
    Solve fine = solve_once(outer, inner, center, 2 * grid_n, nullptr);
    ModulusEstimate est;
    est.grid_n = grid_n;
    est.energy = coarse.energy;
    est.value = 1.0 / coarse.energy;
    double value_fine = 1.0 / fine.energy;
    // First-order band offset dominates; Richardson on h and h/2.
    est.richardson = 2.0 * value_fine - est.value;
    return est;
}

bool modulus_lower_bound_check(const ModulusEstimate& estimate, double m) {
    return estimate.richardson >= m - estimate.tolerance();
}

} // namespace renormlab
