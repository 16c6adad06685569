#include "foliate/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace foliate {

namespace {

double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a < -M_PI) a += 2.0 * M_PI;
    return a;
}

}  // namespace

SingularFoliationSample concentric_circle_foliation() {
    SingularFoliationSample s;
    s.ambient_dim = 2;
    s.leaf_dim_at = [](const Vec& x) { return norm(x) > 1e-12 ? 1 : 0; };
    s.leaf_membership = [](const Vec& a, const Vec& b) {
        return std::abs(norm(a) - norm(b)) <= 1e-9;
    };
    s.distinguished_chart_at = [](const Vec& x) {
        FoliatedChart fc;
        const double r0 = norm(x);
        if (r0 <= 1e-12) {
            // the origin is a point leaf; both coordinates are transverse
            fc.transverse_dim = 2;
            fc.leaf_dim = 0;
            fc.chart = identity_chart(2);
            return fc;
        }
        const double a0 = std::atan2(x[1], x[0]);
        fc.transverse_dim = 1;  // radius offset
        fc.leaf_dim = 1;        // angle offset
        fc.chart.dim = 2;
        fc.chart.domain = [r0](const Vec& p) {
            const double r = norm(p);
            return r > 1e-12 && std::abs(r - r0) < 0.5 * r0;
        };
        fc.chart.codomain = [r0](const Vec& c) {
            return std::abs(c[0]) < 0.5 * r0 && std::abs(c[1]) < M_PI / 2;
        };
        fc.chart.forward = [r0, a0](const Vec& p) {
            return Vec{norm(p) - r0, wrap_angle(std::atan2(p[1], p[0]) - a0)};
        };
        fc.chart.inverse = [r0, a0](const Vec& c) {
            const double r = r0 + c[0], a = a0 + c[1];
            return Vec{r * std::cos(a), r * std::sin(a)};
        };
        return fc;
    };
    return s;
}

std::pair<Vec, Vec> leaf_coordinates(const FoliatedChart& f, const Vec& p) {
    if (!f.chart.domain(p)) throw OutsideDomain("point outside foliated chart");
    const Vec c = f.chart.forward(p);
    Vec transverse(c.begin(), c.begin() + f.transverse_dim);
    Vec leaf(c.begin() + f.transverse_dim, c.end());
    return {transverse, leaf};
}

double verify_foliated_transition(const FoliatedChart& a, const FoliatedChart& b,
                                  const std::vector<Vec>& samples, double step) {
    const VecMap trans = [&a, &b](const Vec& x) {
        return transition_map(a.chart, b.chart, x);
    };
    double worst = 0.0;
    for (const Vec& x : samples) {
        if (!a.chart.codomain(x) || !b.chart.domain(a.chart.inverse(x)))
            throw OutsideOverlap("foliated-transition sample outside overlap");
        const auto jac = fd_jacobian(trans, x, step);
        for (int i = 0; i < b.transverse_dim; ++i)
            for (std::size_t j = a.transverse_dim; j < x.size(); ++j)
                worst = std::max(worst, std::abs(jac[i][j]));
    }
    return worst;
}

Transformation standard_frame_translation(const Vec& offsets) {
    if (!all_finite(offsets)) throw NonFinite("non-finite translation offsets");
    return translation(offsets);
}

Transformation ball_transformation(const BallChart& b, const Vec& offsets) {
    if (!all_finite(offsets)) throw NonFinite("non-finite offsets");
    const BallChart ball = b;
    auto conjugate = [ball](const Vec& p, const Vec& off) {
        if (!ball.chart.domain(p)) throw OutsideBall("point outside ball chart");
        const Vec c = ball.chart.forward(p);
        if (norm(c) >= ball.radius) throw OutsideBall("chart image outside ball");
        const Vec y = add(ball_to_euclidean(ball, c), off);
        return ball.chart.inverse(euclidean_to_ball(ball, y));
    };
    Transformation t;
    t.domain = [ball](const Vec& p) {
        return ball.chart.domain(p) && norm(ball.chart.forward(p)) < ball.radius;
    };
    t.forward = [conjugate, offsets](const Vec& p) { return conjugate(p, offsets); };
    t.inverse = [conjugate, offsets](const Vec& p) {
        return conjugate(p, scale(offsets, -1.0));
    };
    t.label = "ball_translate";
    return t;
}

Transformation leaf_navigate(const LeafChain& chain, const Vec& p, const Vec& q) {
    if (chain.balls.empty()) throw BrokenChain("empty chain");
    if (!chain.balls.front().chart.domain(p))
        throw BrokenChain("start point outside first ball");
    if (!chain.balls.back().chart.domain(q))
        throw BrokenChain("end point outside last ball");
    if (chain.waypoints.size() + 1 != chain.balls.size())
        throw BrokenChain("waypoint count mismatch");
    for (std::size_t i = 0; i < chain.waypoints.size(); ++i)
        if (!chain.balls[i].chart.domain(chain.waypoints[i]) ||
            !chain.balls[i + 1].chart.domain(chain.waypoints[i]))
            throw BrokenChain("waypoint outside ball intersection");

    Vec cur = p;
    Transformation total = identity_transformation(static_cast<int>(p.size()));
    for (std::size_t i = 0; i < chain.balls.size(); ++i) {
        const BallChart& ball = chain.balls[i];
        const Vec target = (i + 1 < chain.balls.size()) ? chain.waypoints[i] : q;
        const Vec off = sub(ball_to_euclidean(ball, ball.chart.forward(target)),
                            ball_to_euclidean(ball, ball.chart.forward(cur)));
        const Transformation step = ball_transformation(ball, off);
        total = (i == 0) ? step : compose(step, total);
        cur = step.forward(cur);
    }
    return total;
}

namespace {

// mean of sampled points in balls[i] ∩ balls[j], reference coordinates
std::vector<Vec> sample_intersection(const BallChart& a, const BallChart& b,
                                     Rng& rng, int n_samples) {
    std::vector<Vec> hits;
    const int d = a.chart.dim;
    for (int s = 0; s < n_samples; ++s) {
        Vec c(d);
        for (int k = 0; k < d; ++k) c[k] = rng.uniform(-a.radius, a.radius);
        if (norm(c) >= a.radius) continue;
        const Vec p = a.chart.inverse(c);
        if (!a.chart.domain(p)) continue;
        if (b.chart.domain(p)) hits.push_back(p);
    }
    return hits;
}

Vec mean_point(const std::vector<Vec>& pts) {
    Vec m(pts.front().size(), 0.0);
    for (const Vec& p : pts) m = add(m, p);
    return scale(m, 1.0 / static_cast<double>(pts.size()));
}

}  // namespace

LeafChain find_chain(const std::vector<BallChart>& balls, const Vec& p, const Vec& q,
                     std::uint64_t seed, int n_samples) {
    const int B = static_cast<int>(balls.size());
    Rng rng(seed);

    std::vector<std::vector<int>> adj(B);
    std::vector<std::vector<Vec>> midpoints(B, std::vector<Vec>(B));
    for (int i = 0; i < B; ++i)
        for (int j = i + 1; j < B; ++j) {
            const auto hits = sample_intersection(balls[i], balls[j], rng, n_samples);
            if (hits.empty()) continue;
            adj[i].push_back(j);
            adj[j].push_back(i);
            midpoints[i][j] = midpoints[j][i] = mean_point(hits);
        }

    int start = -1, goal = -1;
    for (int i = 0; i < B && start < 0; ++i)
        if (balls[i].chart.domain(p)) start = i;
    for (int i = 0; i < B && goal < 0; ++i)
        if (balls[i].chart.domain(q)) goal = i;
    if (start < 0 || goal < 0) throw BrokenChain("endpoint outside the cover");

    // BFS, lowest-index tie-break via sorted adjacency
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::vector<int> prev(B, -1);
    std::vector<bool> visited(B, false);
    std::deque<int> frontier{start};
    visited[start] = true;
    while (!frontier.empty()) {
        const int cur = frontier.front();
        frontier.pop_front();
        if (cur == goal) break;
        for (int nb : adj[cur])
            if (!visited[nb]) {
                visited[nb] = true;
                prev[nb] = cur;
                frontier.push_back(nb);
            }
    }
    if (!visited[goal]) throw DisconnectedCover("no chain between endpoints");

    std::vector<int> path;
    for (int at = goal; at != -1; at = prev[at]) path.push_back(at);
    std::reverse(path.begin(), path.end());

    LeafChain chain;
    for (std::size_t i = 0; i < path.size(); ++i) {
        chain.balls.push_back(balls[path[i]]);
        if (i + 1 < path.size())
            chain.waypoints.push_back(midpoints[path[i]][path[i + 1]]);
    }
    return chain;
}

SingularChartReport verify_singular_distinguished_chart(
    const SingularFoliationSample& s, const Vec& x, const std::vector<Vec>& samples,
    double tol) {
    SingularChartReport rep;
    const FoliatedChart fc = s.distinguished_chart_at(x);
    rep.centered = norm(fc.chart.forward(x)) <= tol;

    rep.mates_on_slice = true;
    rep.non_mates_off_slice = true;
    for (const Vec& p : samples) {
        if (!fc.chart.domain(p)) continue;
        const auto [transverse, leaf] = leaf_coordinates(fc, p);
        const double t = norm(transverse);
        if (s.leaf_membership(x, p)) {
            rep.worst_mate_transverse = std::max(rep.worst_mate_transverse, t);
            if (t > tol) rep.mates_on_slice = false;
        } else {
            if (t <= tol) rep.non_mates_off_slice = false;
        }
    }
    return rep;
}

Pseudogroup leaf_pseudogroup(const std::vector<BallChart>& balls,
                             double offset_unit, std::uint64_t seed) {
    const int B = static_cast<int>(balls.size());
    if (B == 0) throw DisconnectedCover("empty cover");

    // connectivity of the sampled cover
    Rng rng(seed);
    std::vector<std::vector<int>> adj(B);
    for (int i = 0; i < B; ++i)
        for (int j = i + 1; j < B; ++j)
            if (!sample_intersection(balls[i], balls[j], rng, 256).empty()) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    std::vector<bool> visited(B, false);
    std::deque<int> frontier{0};
    visited[0] = true;
    int count = 1;
    while (!frontier.empty()) {
        const int cur = frontier.front();
        frontier.pop_front();
        for (int nb : adj[cur])
            if (!visited[nb]) {
                visited[nb] = true;
                ++count;
                frontier.push_back(nb);
            }
    }
    if (count < B) throw DisconnectedCover("ball cover is not connected");

    Pseudogroup p;
    p.closure_depth = 3;
    p.generators.push_back(identity_transformation(balls.front().chart.dim));
    for (const BallChart& b : balls)
        for (int k = 0; k < b.chart.dim; ++k) {
            Vec off(b.chart.dim, 0.0);
            off[k] = offset_unit;
            p.generators.push_back(ball_transformation(b, off));
            off[k] = -offset_unit;
            p.generators.push_back(ball_transformation(b, off));
        }
    return p;
}

}  // namespace foliate
