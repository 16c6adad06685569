#include <doctest.h>

#include <cmath>

#include "foliate/foliation.hpp"

using namespace foliate;

namespace {

// 1-D leaf ball chart on the x-axis of R^2
BallChart axis_ball(double c, double r) {
    BallChart b;
    b.center = {c, 0.0};
    b.radius = r;
    b.chart.dim = 1;
    b.chart.domain = [c, r](const Vec& p) {
        return std::abs(p[0] - c) < r && std::abs(p[1]) <= 1e-9;
    };
    b.chart.codomain = [r](const Vec& u) { return std::abs(u[0]) < r; };
    b.chart.forward = [c](const Vec& p) { return Vec{p[0] - c}; };
    b.chart.inverse = [c](const Vec& u) { return Vec{u[0] + c, 0.0}; };
    return b;
}

}  // namespace

TEST_CASE("leaf coordinates split chart output into transverse and leaf parts") {
    // horizontal-line foliation: transverse = y, leaf = x
    FoliatedChart f;
    f.transverse_dim = 1;
    f.leaf_dim = 1;
    f.chart = identity_chart(2);
    f.chart.forward = [](const Vec& p) { return Vec{p[1], p[0]}; };
    f.chart.inverse = [](const Vec& c) { return Vec{c[1], c[0]}; };

    const auto [transverse, leaf] = leaf_coordinates(f, {3.0, 5.0});
    REQUIRE(transverse.size() == 1);
    REQUIRE(leaf.size() == 1);
    CHECK(transverse[0] == doctest::Approx(5.0));
    CHECK(leaf[0] == doctest::Approx(3.0));
}

TEST_CASE("degenerate splits: all-leaf and all-transverse") {
    FoliatedChart whole;
    whole.transverse_dim = 0;
    whole.leaf_dim = 2;
    whole.chart = identity_chart(2);
    const auto [t1, l1] = leaf_coordinates(whole, {1.0, 2.0});
    CHECK(t1.empty());
    CHECK(l1.size() == 2);

    FoliatedChart points;
    points.transverse_dim = 2;
    points.leaf_dim = 0;
    points.chart = identity_chart(2);
    const auto [t2, l2] = leaf_coordinates(points, {1.0, 2.0});
    CHECK(t2.size() == 2);
    CHECK(l2.empty());
}

TEST_CASE("foliated transition detector separates foliated from non-foliated") {
    FoliatedChart a;
    a.transverse_dim = 1;
    a.leaf_dim = 1;
    a.chart = identity_chart(2);
    a.chart.domain = [](const Vec& p) { return p[0] > 0.5; };
    a.chart.codomain = [](const Vec& c) { return c[0] > 0.5; };

    FoliatedChart good;
    good.transverse_dim = 1;
    good.leaf_dim = 1;
    good.chart.dim = 2;
    good.chart.domain = [](const Vec& p) { return p[0] > 0.5; };
    good.chart.codomain = [](const Vec& c) { return c[0] > 1.5; };
    good.chart.forward = [](const Vec& p) { return Vec{p[0] + 1.0, p[0] * p[1]}; };
    good.chart.inverse = [](const Vec& c) {
        return Vec{c[0] - 1.0, c[1] / (c[0] - 1.0)};
    };

    FoliatedChart bad;
    bad.transverse_dim = 1;
    bad.leaf_dim = 1;
    bad.chart.dim = 2;
    bad.chart.domain = [](const Vec& p) { return p[0] > 0.5; };
    bad.chart.codomain = [](const Vec&) { return true; };
    bad.chart.forward = [](const Vec& p) { return Vec{p[0] + p[1], p[1]}; };
    bad.chart.inverse = [](const Vec& c) { return Vec{c[0] - c[1], c[1]}; };

    Rng rng(1);
    std::vector<Vec> samples;
    for (int i = 0; i < 100; ++i)
        samples.push_back({rng.uniform(1.0, 2.0), rng.uniform(-1.0, 1.0)});

    CHECK(verify_foliated_transition(a, good, samples) <= 1e-6);
    CHECK(verify_foliated_transition(a, bad, samples) ==
          doctest::Approx(1.0).epsilon(1e-4));
    CHECK(verify_foliated_transition(a, a, samples) <= 1e-12);
}

TEST_CASE("standard frame flows are translations") {
    const Transformation zero = standard_frame_translation({0.0, 0.0});
    CHECK(dist(zero.forward({0.3, 0.4}), {0.3, 0.4}) == 0.0);

    const Transformation t = standard_frame_translation({1.0, 2.0});
    CHECK(dist(t.forward({0.0, 0.0}), {1.0, 2.0}) == 0.0);

    // additive composition
    const Transformation a = standard_frame_translation({0.5, -0.25});
    const Transformation b = standard_frame_translation({0.25, 1.0});
    const Transformation ab = compose(a, b);
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        const Vec x = rng.uniform_vec(2, -2, 2);
        CHECK(dist(ab.forward(x), add(x, {0.75, 0.75})) <= 1e-12);
    }
}

TEST_CASE("ball transformation with zero offsets is the identity") {
    const BallChart b = make_ball_chart({0.0, 0.0}, 1.0);
    const Transformation t = ball_transformation(b, {0.0, 0.0});
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        Vec p = rng.uniform_vec(2, -0.7, 0.7);
        if (norm(p) >= 1.0) continue;
        CHECK(dist(t.forward(p), p) <= 1e-12);
    }
}

TEST_CASE("offsets h(q) - h(p) send p exactly to q") {
    const BallChart b = make_ball_chart({0.0}, 1.0);
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const Vec p{rng.uniform(-0.9, 0.9)};
        const Vec q{rng.uniform(-0.9, 0.9)};
        const Vec delta = sub(ball_to_euclidean(b, q), ball_to_euclidean(b, p));
        const Transformation t = ball_transformation(b, delta);
        CHECK(dist(t.forward(p), q) <= 1e-9);
    }
}

TEST_CASE("ball transformations preserve the ball") {
    const BallChart b = make_ball_chart({0.0, 0.0}, 1.0);
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        Vec p = rng.uniform_vec(2, -0.99, 0.99);
        if (norm(p) >= 1.0) continue;
        const Transformation t =
            ball_transformation(b, rng.uniform_vec(2, -3.0, 3.0));
        CHECK(norm(t.forward(p)) < 1.0);
    }
}

TEST_CASE("leaf navigation on a single-ball chain with p = q is the identity") {
    LeafChain chain;
    chain.balls = {axis_ball(0.0, 1.0)};
    const Vec p{0.2, 0.0};
    const Transformation t = leaf_navigate(chain, p, p);
    CHECK(dist(t.forward(p), p) <= 1e-12);
}

TEST_CASE("two-ball navigation crosses the overlap") {
    const auto balls = std::vector<BallChart>{axis_ball(0.0, 1.0), axis_ball(1.2, 1.0)};
    const Vec p{-0.5, 0.0}, q{1.8, 0.0};
    const LeafChain chain = find_chain(balls, p, q);
    REQUIRE(chain.balls.size() == 2);
    const Transformation nav = leaf_navigate(chain, p, q);
    CHECK(dist(nav.forward(p), q) <= 1e-9);
    CHECK(dist(nav.inverse(nav.forward(p)), p) <= 1e-9);
}

TEST_CASE("broken chains are rejected") {
    LeafChain chain;
    chain.balls = {axis_ball(0.0, 1.0), axis_ball(1.2, 1.0)};
    chain.waypoints = {{5.0, 0.0}};  // not in either ball
    CHECK_THROWS_AS(leaf_navigate(chain, {0.0, 0.0}, {1.5, 0.0}), BrokenChain);
}

TEST_CASE("navigation endpoint is chain independent") {
    // two different covers of the same segment
    const std::vector<BallChart> coverA{axis_ball(-1.0, 0.8), axis_ball(0.0, 0.8),
                                        axis_ball(1.0, 0.8)};
    const std::vector<BallChart> coverB{axis_ball(-1.0, 1.2), axis_ball(1.0, 1.2)};
    const Vec p{-1.3, 0.0}, q{1.3, 0.0};
    const Transformation navA = leaf_navigate(find_chain(coverA, p, q), p, q);
    const Transformation navB = leaf_navigate(find_chain(coverB, p, q), p, q);
    CHECK(dist(navA.forward(p), navB.forward(p)) <= 1e-6);
    CHECK(dist(navA.forward(p), q) <= 1e-9);
}

TEST_CASE("leaf pseudogroup is transitive over the sampled cover") {
    const std::vector<BallChart> balls{axis_ball(-1.0, 0.8), axis_ball(0.0, 0.8),
                                       axis_ball(1.0, 0.8)};
    const Pseudogroup p = leaf_pseudogroup(balls);
    CHECK(p.generators.size() == 1 + 2 * balls.size());

    Rng rng(6);
    std::vector<Vec> samples;
    for (int i = 0; i < 100; ++i) samples.push_back({rng.uniform(-1.5, 1.5), 0.0});
    const AxiomReport rep = verify_pseudogroup_axioms(p, samples);
    for (const auto& c : rep.checks) {
        INFO(c.name);
        CHECK(c.pass);
    }

    for (int i = 0; i < 100; ++i) {
        const Vec a{rng.uniform(-1.5, 1.5), 0.0};
        const Vec b{rng.uniform(-1.5, 1.5), 0.0};
        const LeafChain chain = find_chain(balls, a, b);
        CHECK(dist(leaf_navigate(chain, a, b).forward(a), b) <= 1e-9);
    }
}

TEST_CASE("disconnected covers are rejected") {
    const std::vector<BallChart> balls{axis_ball(-5.0, 0.5), axis_ball(5.0, 0.5)};
    CHECK_THROWS_AS(leaf_pseudogroup(balls), DisconnectedCover);
}

TEST_CASE("concentric circle foliation: distinguished charts") {
    const SingularFoliationSample s = concentric_circle_foliation();

    CHECK(s.leaf_dim_at({1.0, 0.0}) == 1);
    CHECK(s.leaf_dim_at({0.0, 0.0}) == 0);

    Rng rng(7);
    std::vector<Vec> samples;
    for (int i = 0; i < 200; ++i) {
        const double r = rng.uniform(0.6, 1.4), th = rng.uniform(-1.0, 1.0);
        samples.push_back({r * std::cos(th), r * std::sin(th)});
    }
    const SingularChartReport rep =
        verify_singular_distinguished_chart(s, {1.0, 0.0}, samples);
    CHECK(rep.pass());

    // leaf dimension is constant along rotation orbits
    const Pseudogroup rot = rotation_pseudogroup(8);
    for (const Vec& x : orbit(rot, {0.5, 0.5}, 8))
        CHECK(s.leaf_dim_at(x) == 1);
}

TEST_CASE("non-centered distinguished chart fails the report") {
    SingularFoliationSample s = concentric_circle_foliation();
    const auto base = s.distinguished_chart_at;
    s.distinguished_chart_at = [base](const Vec& x) {
        FoliatedChart fc = base(x);
        const VecMap fwd = fc.chart.forward;
        fc.chart.forward = [fwd](const Vec& p) {
            return add(fwd(p), {0.1, 0.0});  // breaks phi(x) = 0
        };
        return fc;
    };
    const SingularChartReport rep =
        verify_singular_distinguished_chart(s, {1.0, 0.0}, {{1.0, 0.0}});
    CHECK_FALSE(rep.centered);
}
