#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "renormlab/curve.hpp"

namespace renormlab {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Masked grid for the Dirichlet solve. The grid lives in the log chart
// zeta = log(z - z_c) around the inner-region centroid: the Dirichlet energy
// is conformally invariant, so the 5-point discretization there resolves
// annuli of any radius ratio; Im(zeta) wraps with period 2 pi.
struct GridAnnulus {
    int grid_n = 0;        // cells across the 2 pi circumference
    int nx = 0, ny = 0;    // actual node counts (radial, angular)
    double cell_size = 0.0;
    double x0 = 0.0;       // radial chart origin
    Complex center;        // z_c
    // Node labels: 0 inside-inner, 1 annulus, 2 outside-outer, 3 boundary-band.
    std::vector<std::uint8_t> mask;

    std::uint8_t label(int i, int j) const { return mask[static_cast<std::size_t>(j) * nx + i]; }
};

struct ModulusEstimate {
    double value = 0.0;      // 1 / (discrete Dirichlet energy) at grid_n
    double richardson = 0.0; // extrapolated from grid_n and 2*grid_n
    double energy = 0.0;
    int grid_n = 0;
    double tolerance() const { return std::abs(value - richardson); }
};

GridAnnulus build_grid_annulus(const Curve& outer, const Curve& inner, int grid_n);

// Conformal modulus of the topological annulus between the closed polylines,
// via the discrete Dirichlet problem (u = 0 at the inner band, u = 1 at the
// outer), solved to residual 1e-10; modulus = 1/energy, with mandatory
// Richardson extrapolation from grid_n and 2*grid_n.
ModulusEstimate annulus_modulus(const Curve& outer, const Curve& inner, int grid_n);

bool modulus_lower_bound_check(const ModulusEstimate& estimate, double m);

} // namespace renormlab
