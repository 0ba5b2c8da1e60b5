#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "renormlab/interval.hpp"

namespace renormlab {

struct NoRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The real quadratic family x^2 + c.
struct QuadraticMap {
    double c = 0.0;

    double operator()(double x) const { return x * x + c; }

    // Orientation-preserving fixed point (1 + sqrt(1-4c))/2; bounds the
    // invariant interval [-fix, fix] for c in [-2, 1/4].
    double boundary_fixed_point() const;

    bool admits_invariant_interval() const { return c >= -2.0 && c <= 0.25; }
};

// One renormalization level: period q, boundary fixed point beta of f^q
// (signed: beta > 0 iff 0 is a local minimum of f^q), the periodic interval
// I = <-beta, beta>, the monotone extension range W (and its f-preimage W_c),
// and the period ratio a relative to the previous level.
struct RenormLevel {
    int q = 0;
    double beta = 0.0;
    SignedInterval interval;   // I
    Interval w;                // W, maximal monotone range around I
    Interval w_c;              // W_c with f^{q-1} : W_c -> W injective
    bool w_capped_lo = false;  // expansion stopped at the scan cap, not a critical point
    bool w_capped_hi = false;
    int a = 0;
};

struct RealBoundsLevelCheck {
    int n = 0;             // index of the coarser level of the pair
    double ratio = 0.0;    // |I(q_n)| / |I(q_{n+1})|
    bool nested = false;   // I(q_{n+1}) strictly inside I(q_n)
    bool enlargement_fits = false;  // L.I(q_n) inside W_n
};

struct RealBoundsReport {
    double L = 0.0;
    std::vector<RealBoundsLevelCheck> pairs;
    double mu_hat = 0.0;      // min ratio
    double lambda_hat = 0.0;  // max ratio
    double L_hat = 0.0;       // largest enlargement fitting every checked W_n
    bool all_pass = false;
    std::vector<double> ratio_diffs;  // |r_{k+1} - r_k| successive differences
};

struct FeigenbaumResult {
    std::vector<double> parameters;  // superstable c(2^k), k = 0..depth
    std::vector<double> ratios;      // (c_{n-1}-c_{n-2}) / (c_n-c_{n-1})
    double extrapolated = 0.0;       // geometric-ratio limit estimate
};

double iterate(const QuadraticMap& f, double x, int k);

// Derivative of f^k at x by the chain rule, prod 2 f^i(x).
double iterate_derivative(const QuadraticMap& f, double x, int k);

// Solve f_c^q(0) = 0 for c inside the bracket; |f_c^q(0)| <= tol on return.
double find_superstable(int q, Interval bracket, double tol = 1e-12);

// Superstable parameters along the period-doubling cascade (auto-bracketed)
// plus ratio sequence and the geometric extrapolation of the accumulation
// parameter. depth >= 4; parameters are c(2^k) for k = 0..depth.
FeigenbaumResult feigenbaum_parameter(int depth);

std::optional<RenormLevel> detect_renormalization(const QuadraticMap& f, int q);

// Greedy nested cascade with period ratios in [2, N]; stops at max_depth or
// when |I| < 1e-9. Levels carry a = q_{n+1}/q_n.
std::vector<RenormLevel> renorm_cascade(const QuadraticMap& f, int N, int max_depth);

// Maximal interval W_c containing f(I) on which f^{q-1} is injective, and
// its image W = f^{q-1}(W_c) (contains I).
std::pair<Interval, Interval> monotone_range(const QuadraticMap& f, const RenormLevel& level);

RealBoundsReport verify_real_bounds(const QuadraticMap& f,
                                    const std::vector<RenormLevel>& levels, double L);

} // namespace renormlab
