#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "renormlab/curve.hpp"
#include "renormlab/epstein.hpp"
#include "renormlab/interval.hpp"

namespace renormlab {

// Finite approximation of the smallest completely invariant set containing
// [-1,1]: all inverse images up to the given depth, kept per depth so the
// nesting T_{n-1} subset T_n is structural.
struct InvariantSetApprox {
    int depth = 0;
    std::vector<std::vector<Complex>> points_by_depth;
    int skipped_branch_failures = 0;
    int skipped_domain_exits = 0;

    std::size_t total_points() const {
        std::size_t n = 0;
        for (const auto& v : points_by_depth) n += v.size();
        return n;
    }
};

struct ContainmentReport {
    double slit_distance = 0.0;   // min distance from the cloud to R \ J0
    double max_modulus = 0.0;     // max |z| over the cloud
    bool bounded = false;         // max_modulus <= bound
    bool tangential_alarm = false;  // points hugging (1, +inf) tangentially
    int alarm_count = 0;
};

struct InvarianceReport {
    int samples = 0;
    int forward_escapes = 0;
    int backward_escapes = 0;
    int backward_skipped = 0;
    double tolerance = 0.0;  // hull enlargement used for the escape test
};

struct PLRestriction {
    bool found = false;
    Curve V;
    Curve V_prime;
    double modulus = 0.0;      // Richardson-extrapolated modulus of V \ closure(V')
    double modulus_raw = 0.0;  // single-grid value
    double separation = 0.0;   // min distance between the two boundaries
    std::string strategy;      // "preimage" | "poincare"
    double k_or_theta = 0.0;
    std::string failure;       // reason when !found (best candidate kept above)
};

enum class PLStrategy { Preimage, Poincare };

struct PLParams {
    int k_max = 6;
    int resolution = 1200;
    int grid = 192;                  // modulus grid (Richardson pairs with 2x)
    double separation_factor = 10.0;
    Curve hull;                      // containment target; may be empty
    std::vector<double> theta_dial = {0.9, 0.7, 0.55, 0.45, 0.35};
    std::vector<double> scale_dial;  // interval half-widths for Poincare V; default from L
};

struct SweepRow {
    int n = 0;
    int q = 0;
    double modulus = 0.0;
    double separation = 0.0;
    std::string strategy;
    double k_or_theta = 0.0;
    std::string status;  // "ok" or failure tag
};

struct SweepTable {
    std::vector<SweepRow> rows;
    double min_modulus = 0.0;
    double max_modulus = 0.0;
    int failures = 0;
};

InvariantSetApprox invariant_set(const EpsteinMap& g, int depth, int density);

// Outer contour of the point cloud at scale h = diameter / resolution; fills
// interior holes by construction.
Curve hull_boundary(const InvariantSetApprox& set, int resolution);
Curve hull_boundary_of_points(const std::vector<Complex>& cloud, int resolution);

ContainmentReport compact_containment_check(const InvariantSetApprox& set, Interval J0,
                                            double bound);

InvarianceReport invariance_check(const Curve& hull, const EpsteinMap& g, int samples,
                                  double tolerance = 0.0, std::uint64_t seed = 0x5eed5eedULL);

PLRestriction find_pl_restriction(const EpsteinMap& g, PLStrategy strategy,
                                  const PLParams& params);

SweepTable complex_bounds_sweep(const QuadraticMap& f, int N, int n_from, int n_to,
                                PLStrategy strategy, const PLParams& params,
                                int set_depth = 12, int set_density = 512,
                                int hull_resolution = 128);

} // namespace renormlab
