#include "renormlab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace renormlab {

double BoundingBox::diameter() const {
    return std::hypot(width(), height());
}

BoundingBox bounding_box(const Curve& c) {
    BoundingBox b;
    if (c.points.empty()) return b;
    b.xmin = b.xmax = c.points[0].real();
    b.ymin = b.ymax = c.points[0].imag();
    for (const auto& p : c.points) {
        b.xmin = std::min(b.xmin, p.real());
        b.xmax = std::max(b.xmax, p.real());
        b.ymin = std::min(b.ymin, p.imag());
        b.ymax = std::max(b.ymax, p.imag());
    }
    return b;
}

double polygon_area(const Curve& c) {
    double s = 0.0;
    std::size_t n = c.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex& a = c.points[i];
        const Complex& b = c.points[(i + 1) % n];
        s += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * s;
}

int winding_number(const Curve& c, Complex z) {
    // Crossing count against the upward ray from z (half-open rule).
    int w = 0;
    std::size_t n = c.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        Complex a = c.points[i];
        Complex b = c.points[(i + 1) % n];
        if (a.imag() <= z.imag()) {
            if (b.imag() > z.imag()) {
                double cross = (b.real() - a.real()) * (z.imag() - a.imag()) -
                               (z.real() - a.real()) * (b.imag() - a.imag());
                if (cross > 0.0) ++w;
            }
        } else {
            if (b.imag() <= z.imag()) {
                double cross = (b.real() - a.real()) * (z.imag() - a.imag()) -
                               (z.real() - a.real()) * (b.imag() - a.imag());
                if (cross < 0.0) --w;
            }
        }
    }
    return w;
}

bool point_in_polygon(const Curve& c, Complex z) {
    return winding_number(c, z) != 0;
}

double distance_to_segment(Complex z, Complex a, Complex b) {
    Complex ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    double t = ((z.real() - a.real()) * ab.real() + (z.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

double distance_to_curve(const Curve& c, Complex z) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t n = c.points.size();
    std::size_t m = c.closed ? n : n - 1;
    for (std::size_t i = 0; i < m; ++i)
        best = std::min(best, distance_to_segment(z, c.points[i], c.points[(i + 1) % n]));
    return best;
}

double curve_distance(const Curve& a, const Curve& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : a.points) best = std::min(best, distance_to_curve(b, p));
    for (const auto& p : b.points) best = std::min(best, distance_to_curve(a, p));
    return best;
}

double hausdorff_distance(const Curve& a, const Curve& b) {
    double da = 0.0, db = 0.0;
    for (const auto& p : a.points) da = std::max(da, distance_to_curve(b, p));
    for (const auto& p : b.points) db = std::max(db, distance_to_curve(a, p));
    return std::max(da, db);
}

Curve decimate(const Curve& c, double tol) {
    if (c.points.size() < 8) return c;
    Curve out;
    out.closed = c.closed;
    std::size_t n = c.points.size();
    std::size_t anchor = 0;
    out.points.push_back(c.points[0]);
    for (std::size_t i = 2; i < n; ++i) {
        // Keep the vertex before i if any skipped vertex strays beyond tol
        // from the chord anchor->i.
        bool ok = true;
        for (std::size_t k = anchor + 1; k < i; ++k) {
            if (distance_to_segment(c.points[k], c.points[anchor], c.points[i]) > tol) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            out.points.push_back(c.points[i - 1]);
            anchor = i - 1;
        }
    }
    out.points.push_back(c.points[n - 1]);
    return out;
}

std::string curve_to_json(const Curve& c) {
    nlohmann::json j;
    j["closed"] = c.closed;
    auto pts = nlohmann::json::array();
    for (const auto& p : c.points) pts.push_back({p.real(), p.imag()});
    j["points"] = std::move(pts);
    return j.dump();
}

Curve curve_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Curve c;
    c.closed = j.at("closed").get<bool>();
    for (const auto& p : j.at("points")) c.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return c;
}

void write_curve(const Curve& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_curve: cannot open " + path);
    out << curve_to_json(c) << "\n";
}

Curve read_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_curve: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return curve_from_json(ss.str());
}

} // namespace renormlab
