#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "renormlab/curve.hpp"
#include "renormlab/interval.hpp"
#include "renormlab/quadratic.hpp"

namespace renormlab {

struct TraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inverse-branch data for F^{-1} = h - c where h inverts the homeomorphism
// f^{q-1} : W_c -> W. branch_signs[k] is the sign of the k-th backward
// interval, so the chain never crosses a cut except along prescribed edges.
struct InverseChain {
    double c = 0.0;
    int q = 0;
    Interval w_c;
    std::vector<int> branch_signs;  // size q-1; sign of f^j(W_c), j = 0..q-2

    // h(w) for w in C_{J}; preserves signed-zero edge semantics.
    Complex pull(Complex w) const;
    // F^{-1}(w) = h(w) - c, the univalent decomposition factor.
    Complex f_inverse(Complex w) const;
    bool well_defined(Complex w, double tol = 1e-14) const;
};

// Rescaled iterate g(z) = beta^{-1} f^q(beta z) with its Epstein data, in the
// rescaled coordinates where the periodic interval becomes <-b, b>
// (b = level_beta / scale; b = 1 for a bottom map).
struct EpsteinMap {
    QuadraticMap base;
    int q = 0;
    double scale = 1.0;       // the rescaling beta (signed)
    double level_beta = 1.0;  // physical boundary fixed point of f^q (signed)
    double enlargement = 1.05;  // L with J = L . <-b, b>
    double j_prime = 0.0;     // half-width of J', the unimodal preimage of J
    int p = 1;                // tower iterate count (1 at the bottom)
    InverseChain chain;

    double boundary() const { return level_beta / scale; }       // rescaled fixed point
    double j() const { return enlargement * std::abs(boundary()); }  // half-width of J

    Complex operator()(Complex z) const;
    double operator()(double x) const;
    double derivative(double x) const;

    // Both g-preimages of w (rescaled coordinates), via the exact chain.
    std::pair<Complex, Complex> preimages(Complex w) const;
};

struct EpsteinReport {
    bool unimodal = true;
    bool closure_inside = true;       // closure(J') inside J
    bool inverse_chain_ok = true;     // branch chain defined on the sample grid
    bool boundary_identity = true;    // g(+-b) = b to 1e-12
    double closure_margin = 0.0;      // j - j'
    int chain_failures = 0;
    Complex chain_witness;            // a failing grid point, if any
    bool all_pass() const {
        return unimodal && closure_inside && inverse_chain_ok && boundary_identity;
    }
};

// Finite tower string {g_{m,n}} sharing one rescaling (Prop-style data).
struct TowerLevel {
    int n = 0;
    int p = 0;           // p_{m,n} = q_m / q_n
    double beta = 0.0;   // beta_{m,n} = beta_n / beta_m
    Interval I;
    Interval J;
    bool p_bounds_ok = false;       // 2^{m-n} <= p <= N^{m-n}
    bool beta_bounds_ok = false;    // mu^{m-n} < |beta| < lambda^{m-n}
    double composition_error = 0.0; // sup |g_{m,m} - g_{m,n}^p| on [-1,1]
    bool composition_ok = false;
};

struct Tower {
    int m = 0;
    int N = 0;
    double L = 0.0;
    double mu_hat = 0.0;
    double lambda_hat = 0.0;
    std::vector<EpsteinMap> maps;    // g_{m,m}, g_{m,m-1}, ..., g_{m,1}
    std::vector<TowerLevel> levels;
    bool all_checks_pass = false;
};

EpsteinMap rescale(const QuadraticMap& f, const RenormLevel& level, double L = 1.05);

EpsteinReport epstein_verify(const EpsteinMap& g, int samples = 1000);

double boundary_fixed_point_multiplier(const EpsteinMap& g);

// Pull the closed boundary loop of a region X inside C_J back through g: the
// traced curve bounds the 0-component of g^{-1}(X). Input and output are in
// rescaled coordinates; real points must carry signed-zero edge tags.
Curve pullback_boundary(const EpsteinMap& g, const Curve& region_boundary, int resolution);

// Boundary of Omega_g = g^{-1}(C_J), capped at an escape radius R with
// g^{-1}(D_R) inside D_R; closed polyline, symmetric w.r.t. R and iR.
Curve omega_boundary(const EpsteinMap& g, int resolution);

// Boundary loop of the capped slit plane C_J n D_R, edge-tagged.
Curve slit_plane_boundary(const EpsteinMap& g, int resolution);

double escape_radius(const EpsteinMap& g);

Tower build_tower(const QuadraticMap& f, const std::vector<RenormLevel>& levels, int m,
                  double L, int N);

struct ConvergenceResult {
    std::vector<double> sups;  // sup |g_i - g_{i+1}| per consecutive pair
    int excluded_points = 0;
};

ConvergenceResult convergence_estimate(const std::vector<EpsteinMap>& maps,
                                       BoundingBox rect, int grid);

} // namespace renormlab
