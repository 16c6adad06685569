#include "foliate/learning.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace foliate {

LossSurface quadratic_loss() {
    LossSurface L;
    L.eval = [](const TaskPoint& t, const ModelPoint& m) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.coords.size(); ++i) {
            const double d = m.coords[i] - t.coords[i];
            s += d * d;
        }
        return s;
    };
    L.grad_model = [](const TaskPoint& t, const ModelPoint& m) {
        Vec g(m.coords.size());
        for (std::size_t i = 0; i < m.coords.size(); ++i)
            g[i] = 2.0 * (m.coords[i] - t.coords[i]);
        return g;
    };
    return L;
}

LearnerMap exact_quadratic_learner() {
    return LearnerMap{[](const TaskPoint& t) { return ModelPoint{t.coords}; }};
}

Vec loss_gradient(const LossSurface& L, const TaskPoint& t, const ModelPoint& m,
                  double fd_step) {
    if (L.grad_model) return (*L.grad_model)(t, m);
    Vec g(m.coords.size());
    for (std::size_t i = 0; i < m.coords.size(); ++i) {
        ModelPoint mp = m, mm = m;
        mp.coords[i] += fd_step;
        mm.coords[i] -= fd_step;
        const double fp = L.eval(t, mp);
        const double fm = L.eval(t, mm);
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NonFinite("loss non-finite near gradient point");
        g[i] = (fp - fm) / (2.0 * fd_step);
    }
    return g;
}

namespace {

// One RK4 step of dm/ds = -∇L, restricted to unmasked coordinates.
// `mask` empty means all coordinates move.
Vec rk4_step(const LossSurface& L, const TaskPoint& t, const Vec& m, double h,
             const std::vector<int>& mask) {
    auto field = [&](const Vec& y) {
        Vec g = loss_gradient(L, t, ModelPoint{y});
        Vec f(y.size(), 0.0);
        if (mask.empty()) {
            for (std::size_t i = 0; i < y.size(); ++i) f[i] = -g[i];
        } else {
            for (int i : mask) f[i] = -g[i];
        }
        return f;
    };
    const Vec k1 = field(m);
    const Vec k2 = field(add(m, scale(k1, h / 2.0)));
    const Vec k3 = field(add(m, scale(k2, h / 2.0)));
    const Vec k4 = field(add(m, scale(k3, h)));
    Vec out = m;
    for (std::size_t i = 0; i < m.size(); ++i)
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

Vec integrate(const LossSurface& L, const TaskPoint& t, const Vec& m0, double k,
              const FlowConfig& cfg, const std::vector<int>& mask) {
    Vec m = m0;
    double s = 0.0;
    while (s < k) {
        const double h = std::min(cfg.step, k - s);
        m = rk4_step(L, t, m, h, mask);
        s += h;
        if (L.eval(t, ModelPoint{m}) > cfg.divergence_ceiling)
            throw Diverged("loss exceeded divergence ceiling");
    }
    return m;
}

std::pair<Vec, double> first_crossing(const LossSurface& L, const TaskPoint& t,
                                      const Vec& m0, double eps,
                                      const FlowConfig& cfg,
                                      const std::vector<int>& mask) {
    Vec m = m0;
    double s = 0.0;
    if (L.eval(t, ModelPoint{m}) <= eps) return {m, 0.0};
    while (s < cfg.max_time) {
        const double h = std::min(cfg.step, cfg.max_time - s);
        const Vec next = rk4_step(L, t, m, h, mask);
        if (L.eval(t, ModelPoint{next}) <= eps) {
            // bisect the crossing time inside [s, s+h]
            double lo = 0.0, hi = h;
            while (hi - lo > 1e-9) {
                const double mid = 0.5 * (lo + hi);
                const Vec probe = rk4_step(L, t, m, mid, mask);
                (L.eval(t, ModelPoint{probe}) <= eps ? hi : lo) = mid;
            }
            return {rk4_step(L, t, m, hi, mask), s + hi};
        }
        m = next;
        s += h;
        if (L.eval(t, ModelPoint{m}) > cfg.divergence_ceiling)
            throw Diverged("loss exceeded divergence ceiling");
    }
    throw BudgetExhausted("max_time reached above target accuracy");
}

}  // namespace

ModelPoint gradient_flow(const LossSurface& L, const TaskPoint& t,
                         const ModelPoint& m0, double k, const FlowConfig& cfg) {
    if (k == 0.0) return m0;
    return ModelPoint{integrate(L, t, m0.coords, k, cfg, {})};
}

std::pair<ModelPoint, double> solve_single_task(const LossSurface& L,
                                                const TaskPoint& t,
                                                const ModelPoint& m0, double eps,
                                                const FlowConfig& cfg) {
    auto [m, k] = first_crossing(L, t, m0.coords, eps, cfg, {});
    return {ModelPoint{std::move(m)}, k};
}

ModelPoint plaque_restricted_optimize(const LossSurface& L, const TaskPoint& t,
                                      const ModelPoint& m0,
                                      const std::vector<int>& fixed,
                                      const std::vector<int>& retrain, double eps,
                                      const FlowConfig& cfg) {
    if (retrain.empty()) return m0;
    auto [m, k] = first_crossing(L, t, m0.coords, eps, cfg, retrain);
    (void)k;
    // fixed coordinates are never integrated; restore them bit-for-bit anyway
    for (int i : fixed) m[i] = m0.coords[i];
    return ModelPoint{std::move(m)};
}

std::vector<int> loss_ball(const LossSurface& L, const LearnerMap& learner,
                           const TaskPoint& t, double eps,
                           const std::vector<TaskPoint>& candidates, Exec exec) {
    const ModelPoint m = learner.solve(t);
    const double base = L.eval(t, m);
    const int n = static_cast<int>(candidates.size());
    std::vector<char> in(n, 0);
#ifdef _OPENMP
#pragma omp parallel for if (exec == Exec::parallel) schedule(static)
#endif
    for (int i = 0; i < n; ++i)
        in[i] = std::abs(L.eval(candidates[i], m) - base) < eps;
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
        if (in[i]) members.push_back(i);
    return members;
}

TopologyReport verify_topology_axioms(
    const LossSurface& L, const LearnerMap& learner,
    const std::vector<TaskPoint>& universe,
    const std::vector<std::pair<TaskPoint, double>>& base_balls,
    const std::vector<double>& eps_grid, Exec exec) {
    TopologyReport rep;
    const int n = static_cast<int>(universe.size());

    std::vector<char> in_union(n, 0), in_inter(n, base_balls.empty() ? 0 : 1);
    for (const auto& [t, eps] : base_balls) {
        std::vector<char> in(n, 0);
        for (int i : loss_ball(L, learner, t, eps, universe, exec)) in[i] = 1;
        for (int i = 0; i < n; ++i) {
            in_union[i] |= in[i];
            in_inter[i] &= in[i];
        }
    }

    // inner-ball check: s in the set must have some B_s(eps') inside the set
    auto check_inner = [&](const std::vector<char>& set, const char* axiom) {
        std::vector<char> bad(n, 0);
#ifdef _OPENMP
#pragma omp parallel for if (exec == Exec::parallel) schedule(dynamic)
#endif
        for (int i = 0; i < n; ++i) {
            if (!set[i]) continue;
            bool found = false;
            for (double eps : eps_grid) {
                bool inside = true;
                for (int j : loss_ball(L, learner, universe[i], eps, universe))
                    if (!set[j]) {
                        inside = false;
                        break;
                    }
                if (inside) {
                    found = true;
                    break;
                }
            }
            if (!found) bad[i] = 1;
        }
        for (int i = 0; i < n; ++i)
            if (bad[i]) rep.counterexamples.push_back({i, axiom});
    };

    check_inner(in_union, "union");
    check_inner(in_inter, "intersection");
    return rep;
}

bool model_equivalent(const Architecture& arch, const Vec& p1, const Vec& p2,
                      const std::vector<Vec>& probe_inputs, double tol) {
    for (const Vec& x : probe_inputs)
        if (dist(arch(p1, x), arch(p2, x)) > tol) return false;
    return true;
}

double equivariance_defect(const LearnerMap& learner,
                           const Transformation& task_transform,
                           const Transformation& model_transform,
                           const std::vector<TaskPoint>& tasks) {
    double worst = 0.0;
    for (const TaskPoint& t : tasks) {
        if (!task_transform.domain(t.coords))
            throw NotInDomain("task outside transform domain");
        const Vec lhs = learner.solve(TaskPoint{task_transform.forward(t.coords)}).coords;
        const Vec m = learner.solve(t).coords;
        if (!model_transform.domain(m))
            throw NotInDomain("model outside transform domain");
        worst = std::max(worst, dist(lhs, model_transform.forward(m)));
    }
    return worst;
}

}  // namespace foliate
