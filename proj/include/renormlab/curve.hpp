#pragma once

#include <complex>
#include <string>
#include <vector>

#include "renormlab/interval.hpp"

namespace renormlab {

using Complex = std::complex<double>;

// Closed or open polyline in the plane; the shared boundary representation
// for traced domains (Omega, V, V', hulls) and exported curve files.
struct Curve {
    bool closed = true;
    std::vector<Complex> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

struct BoundingBox {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double diameter() const;
};

BoundingBox bounding_box(const Curve& c);

// Signed polygon area (shoelace); positive for counterclockwise loops.
double polygon_area(const Curve& c);

// Winding number of a closed curve around z.
int winding_number(const Curve& c, Complex z);

bool point_in_polygon(const Curve& c, Complex z);

double distance_to_segment(Complex z, Complex a, Complex b);

double distance_to_curve(const Curve& c, Complex z);

// Minimum distance between two polylines (vertex-to-segment, both ways).
double curve_distance(const Curve& a, const Curve& b);

// One-sided Hausdorff-style distance: max over vertices of a of the distance
// to b, symmetrized.
double hausdorff_distance(const Curve& a, const Curve& b);

// Drop vertices whose removal perturbs the polyline by less than tol.
Curve decimate(const Curve& c, double tol);

std::string curve_to_json(const Curve& c);
Curve curve_from_json(const std::string& text);
void write_curve(const Curve& c, const std::string& path);
Curve read_curve(const std::string& path);

} // namespace renormlab
