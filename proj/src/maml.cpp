#include "foliate/maml.hpp"

#include <cmath>

namespace foliate {

ModelPoint analytic_flow(const TaskPoint& t, double k) {
    const double shrink = 1.0 - std::exp(-2.0 * k);
    return ModelPoint{scale(t.coords, shrink)};
}

double leaf_residual(const TaskPoint& t, double eps, double k) {
    return norm2(t.coords) - eps * std::exp(4.0 * k);
}

double time_to_accuracy(const TaskPoint& t, double eps) {
    const double r2 = norm2(t.coords);
    if (r2 <= 1e-300) throw DegenerateTask("task coincides with the initialization");
    if (r2 < eps) throw AlreadySatisfied("loss at m0 already within eps");
    return 0.25 * std::log(r2 / eps);
}

ModelPoint model_at_accuracy(const TaskPoint& t, double eps) {
    const double r2 = norm2(t.coords);
    if (r2 <= 1e-300) throw DegenerateTask("task coincides with the initialization");
    if (r2 < eps) throw AlreadySatisfied("loss at m0 already within eps");
    return ModelPoint{scale(t.coords, 1.0 - std::sqrt(eps / r2))};
}

LeafReport scan_leaf(const QuadraticMamlSetup& setup, int n_tasks, double step,
                     Exec exec) {
    LeafReport rep;
    const double radius = std::sqrt(setup.eps * std::exp(4.0 * setup.k));
    for (int i = 0; i < n_tasks; ++i) {
        const double angle = 2.0 * M_PI * i / n_tasks;
        Vec t(setup.dim, 0.0);
        t[0] = radius * std::cos(angle);
        if (setup.dim > 1) t[1] = radius * std::sin(angle);
        rep.tasks.push_back(TaskPoint{t});
    }
    rep.residuals.resize(n_tasks);
    rep.numeric_losses.resize(n_tasks);
    rep.loss_errors.resize(n_tasks);

    const LossSurface L = quadratic_loss();
    FlowConfig cfg;
    cfg.step = step;
    cfg.max_time = setup.k + 1.0;

#ifdef _OPENMP
#pragma omp parallel for if (exec == Exec::parallel) schedule(static)
#endif
    for (int i = 0; i < n_tasks; ++i) {
        const TaskPoint& t = rep.tasks[i];
        const ModelPoint m0{Vec(setup.dim, 0.0)};
        const ModelPoint m = gradient_flow(L, t, m0, setup.k, cfg);
        rep.numeric_losses[i] = L.eval(t, m);
        rep.residuals[i] = std::abs(leaf_residual(t, setup.eps, setup.k));
        rep.loss_errors[i] = std::abs(rep.numeric_losses[i] - setup.eps);
    }
    return rep;
}

}  // namespace foliate
