#include "foliate/chart.hpp"

#include <algorithm>
#include <cmath>

namespace foliate {

Chart identity_chart(int dim) {
    Chart c;
    c.dim = dim;
    c.domain = [](const Vec&) { return true; };
    c.codomain = [](const Vec&) { return true; };
    c.forward = [](const Vec& x) { return x; };
    c.inverse = [](const Vec& x) { return x; };
    return c;
}

BallChart make_ball_chart(const Vec& center, double radius) {
    BallChart b;
    b.center = center;
    b.radius = radius;
    b.chart.dim = static_cast<int>(center.size());
    b.chart.domain = [center, radius](const Vec& p) {
        return dist(p, center) < radius;
    };
    b.chart.codomain = [radius](const Vec& x) { return norm(x) < radius; };
    b.chart.forward = [center](const Vec& p) { return sub(p, center); };
    b.chart.inverse = [center](const Vec& x) { return add(x, center); };
    return b;
}

Vec transition_map(const Chart& a, const Chart& b, const Vec& x) {
    if (!a.codomain(x)) throw OutsideOverlap("point not in source chart codomain");
    const Vec p = a.inverse(x);
    if (!b.domain(p)) throw OutsideOverlap("point not in target chart domain");
    return b.forward(p);
}

Vec ball_to_euclidean(const BallChart& b, const Vec& x) {
    const double n = norm(x);
    if (n >= b.radius) throw OutsideBall("|x| >= radius");
    return scale(x, 1.0 / (b.radius - n));
}

Vec euclidean_to_ball(const BallChart& b, const Vec& y) {
    if (!all_finite(y)) throw NonFinite("non-finite euclidean point");
    return scale(y, b.radius / (1.0 + norm(y)));
}

std::vector<Vec> fd_jacobian(const VecMap& f, const Vec& x, double step) {
    const std::size_t n = x.size();
    const Vec f0 = f(x);
    std::vector<Vec> jac(f0.size(), Vec(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        Vec xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        const Vec fp = f(xp);
        const Vec fm = f(xm);
        for (std::size_t i = 0; i < f0.size(); ++i)
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * step);
    }
    return jac;
}

SmoothnessReport verify_transition_smoothness(const Chart& a, const Chart& b,
                                              const std::vector<Vec>& samples,
                                              double step, double tolerance) {
    SmoothnessReport rep;
    const VecMap trans = [&a, &b](const Vec& x) { return transition_map(a, b, x); };
    for (const Vec& x : samples) {
        if (!a.codomain(x) || !b.domain(a.inverse(x)))
            throw OutsideOverlap("smoothness sample outside chart overlap");
        rep.jacobians.push_back(fd_jacobian(trans, x, step));
    }
    for (std::size_t s = 0; s + 1 < samples.size(); ++s) {
        const double d = std::max(dist(samples[s], samples[s + 1]), 1e-12);
        double jump = 0.0;
        const auto& j0 = rep.jacobians[s];
        const auto& j1 = rep.jacobians[s + 1];
        for (std::size_t i = 0; i < j0.size(); ++i)
            for (std::size_t j = 0; j < j0[i].size(); ++j)
                jump = std::max(jump, std::abs(j1[i][j] - j0[i][j]));
        rep.max_neighbor_jump = std::max(rep.max_neighbor_jump, jump / d);
    }
    rep.pass = rep.max_neighbor_jump <= tolerance;
    return rep;
}

}  // namespace foliate
