#pragma once

#include <utility>
#include <vector>

#include "foliate/chart.hpp"
#include "foliate/relatedness.hpp"

namespace foliate {

// Chart whose coordinates split into (transverse, leaf) blocks: the first
// d-n entries are constant along the local plaque, the last n vary on it.
struct FoliatedChart {
    Chart chart;
    int transverse_dim = 0;
    int leaf_dim = 0;
};

struct RegularFoliation {
    std::vector<FoliatedChart> charts;
    int ambient_dim = 0;
    int leaf_dim = 0;
};

// Point-dependent leaf dimension with a distinguished chart at each point.
struct SingularFoliationSample {
    std::function<int(const Vec&)> leaf_dim_at;
    std::function<FoliatedChart(const Vec&)> distinguished_chart_at;
    std::function<bool(const Vec&, const Vec&)> leaf_membership;
    int ambient_dim = 0;
};

// Built-in validated example: circles about the origin, plus the origin as
// its own zero-dimensional leaf.
SingularFoliationSample concentric_circle_foliation();

struct LeafChain {
    std::vector<BallChart> balls;
    std::vector<Vec> waypoints;  // waypoints[i] lies in balls[i] ∩ balls[i+1]
};

std::pair<Vec, Vec> leaf_coordinates(const FoliatedChart& f, const Vec& p);

// Worst off-block Jacobian entry |∂(transverse out)/∂(leaf in)| of the
// transition b ∘ a⁻¹ over the samples, by central differences.
double verify_foliated_transition(const FoliatedChart& a, const FoliatedChart& b,
                                  const std::vector<Vec>& samples,
                                  double step = 1e-5);

// Flows of the standard coordinate frame are translations.
Transformation standard_frame_translation(const Vec& offsets);

// Translation conjugated through the ball chart and the ball↔Euclidean
// homeomorphism; maps the ball bijectively to itself.
Transformation ball_transformation(const BallChart& b, const Vec& offsets);

// Composite of per-ball transformations carrying p to q along the chain.
Transformation leaf_navigate(const LeafChain& chain, const Vec& p, const Vec& q);

// Shortest chain through the cover from a ball containing p to one containing
// q; ties break to lowest ball indices. Waypoints are midpoints of sampled
// intersection points.
LeafChain find_chain(const std::vector<BallChart>& balls, const Vec& p, const Vec& q,
                     std::uint64_t seed = 0, int n_samples = 256);

struct SingularChartReport {
    bool centered = false;           // chart sends x to the origin
    bool mates_on_slice = false;     // leaf-mates have ≈0 transverse coordinates
    bool non_mates_off_slice = false;
    double worst_mate_transverse = 0.0;
    bool pass() const { return centered && mates_on_slice && non_mates_off_slice; }
};

SingularChartReport verify_singular_distinguished_chart(
    const SingularFoliationSample& s, const Vec& x, const std::vector<Vec>& samples,
    double tol = 1e-6);

// Theorem-2 construction: ball transformations with a spanning offset set per
// ball generate a pseudogroup acting transitively on the covered leaf.
Pseudogroup leaf_pseudogroup(const std::vector<BallChart>& balls,
                             double offset_unit = 1.0, std::uint64_t seed = 0);

}  // namespace foliate
