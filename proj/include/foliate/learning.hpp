#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "foliate/exec.hpp"
#include "foliate/relatedness.hpp"
#include "foliate/vec.hpp"

namespace foliate {

struct TaskPoint {
    Vec coords;
};

struct ModelPoint {
    Vec coords;
};

using LossFn = std::function<double(const TaskPoint&, const ModelPoint&)>;
using GradFn = std::function<Vec(const TaskPoint&, const ModelPoint&)>;

struct LossSurface {
    LossFn eval;
    std::optional<GradFn> grad_model;  // analytic gradient, when available
};

// Squared-distance loss Σ(m_i - t_i)^2 with its analytic gradient.
LossSurface quadratic_loss();

struct LearnerMap {
    std::function<ModelPoint(const TaskPoint&)> solve;
};

// Exact minimizer of the quadratic family: solve(t) = t.
LearnerMap exact_quadratic_learner();

struct FlowConfig {
    double step = 1e-3;
    double max_time = 10.0;
    double divergence_ceiling = 1e12;
};

Vec loss_gradient(const LossSurface& L, const TaskPoint& t, const ModelPoint& m,
                  double fd_step = 1e-5);

// RK4 integration of dm/ds = -∇_m L(t, m) for time k; k = 0 returns m0.
ModelPoint gradient_flow(const LossSurface& L, const TaskPoint& t,
                         const ModelPoint& m0, double k, const FlowConfig& cfg);

// Integrate until loss ≤ eps; first crossing refined by bisection inside the
// bracketing step to 1e-9 time resolution.
std::pair<ModelPoint, double> solve_single_task(const LossSurface& L,
                                                const TaskPoint& t,
                                                const ModelPoint& m0, double eps,
                                                const FlowConfig& cfg);

// Gradient flow on the retrain coordinates only; fixed coordinates stay
// bit-identical to m0.
ModelPoint plaque_restricted_optimize(const LossSurface& L, const TaskPoint& t,
                                      const ModelPoint& m0,
                                      const std::vector<int>& fixed,
                                      const std::vector<int>& retrain, double eps,
                                      const FlowConfig& cfg);

// Members of the loss ball B_t(eps) among the candidates:
// |L(s, learner(t)) - L(t, learner(t))| < eps.
std::vector<int> loss_ball(const LossSurface& L, const LearnerMap& learner,
                           const TaskPoint& t, double eps,
                           const std::vector<TaskPoint>& candidates,
                           Exec exec = Exec::serial);

struct TopologyCounterexample {
    int point_index = 0;
    std::string axiom;
};

struct TopologyReport {
    bool empty_and_full_open = true;
    std::vector<TopologyCounterexample> counterexamples;
    bool pass() const { return empty_and_full_open && counterexamples.empty(); }
};

// Finite verification of the loss-ball topology axioms over a candidate
// universe: each member of the union / intersection of the base balls must
// admit an inner loss ball with some radius from eps_grid.
TopologyReport verify_topology_axioms(
    const LossSurface& L, const LearnerMap& learner,
    const std::vector<TaskPoint>& universe,
    const std::vector<std::pair<TaskPoint, double>>& base_balls,
    const std::vector<double>& eps_grid, Exec exec = Exec::serial);

using Architecture = std::function<Vec(const Vec& params, const Vec& input)>;

bool model_equivalent(const Architecture& arch, const Vec& p1, const Vec& p2,
                      const std::vector<Vec>& probe_inputs, double tol = 1e-9);

// max over tasks of ‖learner(π(t)) − ρ(learner(t))‖.
double equivariance_defect(const LearnerMap& learner,
                           const Transformation& task_transform,
                           const Transformation& model_transform,
                           const std::vector<TaskPoint>& tasks);

}  // namespace foliate
