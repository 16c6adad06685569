#pragma once

#include <string>
#include <vector>

#include "foliate/errors.hpp"
#include "foliate/vec.hpp"

namespace foliate {

// Partially defined invertible map on coordinate space.
struct Transformation {
    Predicate domain;
    VecMap forward;
    VecMap inverse;
    std::string label;
};

Transformation identity_transformation(int dim);
Transformation translation(const Vec& offset);
Transformation rotation2d(double angle);  // about the origin, domain all of R^2

// Restrict a transformation to a smaller domain.
Transformation restrict_to(const Transformation& t, const Predicate& sub_domain,
                           const std::string& label_suffix = "|restricted");

Transformation invert(const Transformation& t);

// g after f; domain = points of f's domain whose image lies in g's domain.
// Throws EmptyOverlap when no sample survives both domains.
Transformation compose(const Transformation& g, const Transformation& f,
                       const std::vector<Vec>& samples);
// Unchecked variant for callers that know the overlap is nonempty.
Transformation compose(const Transformation& g, const Transformation& f);

// Generators plus the closure depth to which composites are materialized.
struct Pseudogroup {
    std::vector<Transformation> generators;
    int closure_depth = 3;
};

struct AxiomCheck {
    std::string name;
    bool pass = false;
    double worst_residual = 0.0;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;  // restriction, patching, composition, identity, inverse
    bool all_pass() const;
};

// Sample-based verification of the five pseudogroup conditions: closure under
// restriction, patching consistency on sampled covers, closure under
// composition up to closure_depth, identity membership, inverse closure.
AxiomReport verify_pseudogroup_axioms(const Pseudogroup& p,
                                      const std::vector<Vec>& samples,
                                      double tolerance = 1e-9);

// Breadth-first closure of x under the generators, deterministic ordering by
// composition word (word length, then generator indices).
std::vector<Vec> orbit(const Pseudogroup& p, const Vec& x, int budget,
                       double dedup_tol = 1e-7);

struct RelatednessMember {
    Pseudogroup group;
    Predicate domain;
};

struct RelatednessNotion {
    std::vector<RelatednessMember> members;
    int ambient_dim = 0;
};

struct RelatednessReport {
    bool domains_disjoint = false;
    bool domains_cover = false;
    bool orbits_partition = false;
    std::vector<int> partition;  // per-sample cell id, -1 if uncovered
    std::vector<std::string> failures;
    bool all_pass() const { return domains_disjoint && domains_cover && orbits_partition; }
};

RelatednessReport verify_relatedness(const RelatednessNotion& n,
                                     const std::vector<Vec>& samples,
                                     int orbit_budget = 64,
                                     double tol = 1e-7);

struct Metric {
    std::function<double(const Vec&, const Vec&)> distance;
};

Metric euclidean_metric();
Metric squared_euclidean_metric();

// Worst deviation of f from invariance under the given transformations.
double invariant_check(const std::function<double(const Vec&)>& f,
                       const std::vector<Transformation>& ts,
                       const std::vector<Vec>& samples);

// Each sample goes to the nearest reference; ties break to the lowest index.
std::vector<int> similarity_partition(const std::vector<Vec>& refs, const Metric& m,
                                      const std::vector<Vec>& samples);

// Convenience generator sets.
Pseudogroup translation_pseudogroup(int dim, double unit = 1.0, int depth = 3);
Pseudogroup rotation_pseudogroup(int n_angles, int depth = 3);

}  // namespace foliate
