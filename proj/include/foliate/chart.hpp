#pragma once

#include <optional>
#include <vector>

#include "foliate/errors.hpp"
#include "foliate/vec.hpp"

namespace foliate {

// Abstract manifold points are coordinate vectors in a designated reference
// chart; every other chart is expressed relative to it.
struct Chart {
    Predicate domain;    // membership test on reference-chart points
    VecMap forward;      // reference point -> chart coordinates
    VecMap inverse;      // chart coordinates -> reference point
    int dim = 0;
    Predicate codomain;  // membership test on chart coordinates
};

Chart identity_chart(int dim);

// Chart whose codomain is an open ball centered on its own coordinate origin.
// `center` and `radius` live in reference coordinates for the axis-aligned
// factory below; arbitrary charts may be supplied directly.
struct BallChart {
    Vec center;
    double radius = 0.0;
    Chart chart;
};

// Ball of given radius around `center` in the reference chart, coordinates
// p - center.
BallChart make_ball_chart(const Vec& center, double radius);

struct Atlas {
    std::vector<Chart> charts;
    int dim = 0;
};

Vec transition_map(const Chart& a, const Chart& b, const Vec& x);

// Homeomorphism between the open radius-r ball and all of Euclidean space,
// y_i = x_i / (r - |x|), and its inverse x_i = r*y_i / (1 + |y|).
Vec ball_to_euclidean(const BallChart& b, const Vec& x);
Vec euclidean_to_ball(const BallChart& b, const Vec& y);

// Central-difference Jacobian of f at x.
std::vector<Vec> fd_jacobian(const VecMap& f, const Vec& x, double step = 1e-5);

struct SmoothnessReport {
    std::vector<std::vector<Vec>> jacobians;  // per sample
    double max_neighbor_jump = 0.0;           // worst Jacobian-entry jump between
                                              // consecutive samples, scaled by distance
    bool pass = false;
};

// Finite-difference check that the transition b o a^{-1} has a Jacobian that
// exists and varies continuously along the sample sequence. Samples are
// treated as a path; the jump metric is |J_{i+1}-J_i|_max / dist(x_i, x_{i+1}).
SmoothnessReport verify_transition_smoothness(const Chart& a, const Chart& b,
                                              const std::vector<Vec>& samples,
                                              double step = 1e-5,
                                              double tolerance = 10.0);

}  // namespace foliate
