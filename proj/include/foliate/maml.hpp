#pragma once

#include <vector>

#include "foliate/exec.hpp"
#include "foliate/learning.hpp"

namespace foliate {

// Quadratic-loss meta-learning setup: loss Σ(m_i - t_i)^2, flow started at a
// shared initialization m0 = 0 in the centered chart.
struct QuadraticMamlSetup {
    int dim = 2;
    double eps = 0.01;  // target accuracy
    double k = 0.0;     // flow time
};

struct LeafReport {
    std::vector<TaskPoint> tasks;
    std::vector<double> residuals;       // |Σt_i^2 - eps * e^{4k}| per task
    std::vector<double> numeric_losses;  // loss after integrating for time k
    std::vector<double> loss_errors;     // |numeric loss - eps| per task
};

// Closed-form solution of dm/ds = -2(m - t) from m(0) = 0:
// m_i(k) = t_i (1 - e^{-2k}), so L(t, m(k)) = (Σ t_i^2) e^{-4k}.
ModelPoint analytic_flow(const TaskPoint& t, double k);

// Σt_i^2 - eps * e^{4k}; zero exactly on the (k, eps) leaf sphere.
double leaf_residual(const TaskPoint& t, double eps, double k);

// The unique time where the analytic loss reaches eps:
// k = (1/4) ln(Σt_i^2 / eps).
double time_to_accuracy(const TaskPoint& t, double eps);

// m_i = t_i (1 - sqrt(eps / Σt_j^2)); satisfies L(t, m) = eps.
ModelPoint model_at_accuracy(const TaskPoint& t, double eps);

// Places tasks uniformly on the leaf circle and certifies, by RK4 flow, that
// every one reaches loss eps at time k.
LeafReport scan_leaf(const QuadraticMamlSetup& setup, int n_tasks,
                     double step = 1e-3, Exec exec = Exec::serial);

}  // namespace foliate
