#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "foliate/proto.hpp"

using namespace foliate;

namespace {

// embedding with every layer fully specified: weights row-major, then bias
Embedding fixed_embedding(std::vector<int> dims, Vec params) {
    Embedding e;
    e.layer_dims = std::move(dims);
    e.params = std::move(params);
    return e;
}

// independent forward pass for the 1-2-1 oracle check
double oracle_121(const Vec& p, double x) {
    const double h1 = std::tanh(p[0] * x + p[2]);
    const double h2 = std::tanh(p[1] * x + p[3]);
    return p[4] * h1 + p[5] * h2 + p[6];
}

}  // namespace

TEST_CASE("single affine identity layer embeds identically") {
    // 2 -> 2, weights I, bias 0
    const Embedding e = fixed_embedding({2, 2}, {1, 0, 0, 1, 0, 0});
    const Vec y = embed(e, {0.3, -0.7});
    CHECK(y[0] == doctest::Approx(0.3));
    CHECK(y[1] == doctest::Approx(-0.7));
}

TEST_CASE("zero weights give the constant bias output") {
    const Embedding e = fixed_embedding({2, 1}, {0, 0, 0.42});
    CHECK(embed(e, {5.0, -3.0})[0] == doctest::Approx(0.42));
}

TEST_CASE("1-2-1 network matches an independent forward pass") {
    const Vec p{0.5, -0.3, 0.1, 0.2, 1.5, -0.7, 0.05};
    const Embedding e = fixed_embedding({1, 2, 1}, p);
    CHECK(embed(e, {0.5})[0] == doctest::Approx(oracle_121(p, 0.5)).epsilon(1e-12));
}

TEST_CASE("dimension mismatch throws") {
    const Embedding e = fixed_embedding({2, 1}, {1, 1, 0});
    CHECK_THROWS_AS(embed(e, {1.0}), DimensionMismatch);
}

TEST_CASE("prototypes are class means of support embeddings") {
    const Embedding id = fixed_embedding({1, 1}, {1, 0});

    Episode one;
    one.classes = {0, 1};
    one.support = {{{1.0}, 0}, {{3.0}, 0}, {{5.0}, 1}};
    const PrototypeSet ps = compute_prototypes(id, one);
    CHECK(ps.prototypes.at(0)[0] == doctest::Approx(2.0));
    CHECK(ps.prototypes.at(1)[0] == doctest::Approx(5.0));

    Episode dup;
    dup.classes = {0};
    dup.support = {{{2.5}, 0}, {{2.5}, 0}};
    CHECK(compute_prototypes(id, dup).prototypes.at(0)[0] == doctest::Approx(2.5));

    Episode missing;
    missing.classes = {0, 1};
    missing.support = {{{1.0}, 0}};
    CHECK_THROWS_AS(compute_prototypes(id, missing), EmptyClass);
}

TEST_CASE("class probabilities: softmax of negative distances") {
    const Embedding id = fixed_embedding({1, 1}, {1, 0});
    const Metric m = euclidean_metric();
    PrototypeSet ps;
    ps.prototypes[0] = {0.0};
    ps.prototypes[1] = {2.0};

    const auto probs = class_probabilities(ps, id, {0.0}, m);
    // p(0) = 1 / (1 + e^{-2})
    CHECK(probs[0].second == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));

    const auto even = class_probabilities(ps, id, {1.0}, m);
    CHECK(even[0].second == doctest::Approx(0.5));
    CHECK(even[1].second == doctest::Approx(0.5));

    PrototypeSet single;
    single.prototypes[3] = {0.0};
    CHECK(class_probabilities(single, id, {7.0}, m)[0].second == doctest::Approx(1.0));
}

TEST_CASE("probabilities normalize even with extreme distances") {
    const Embedding id = fixed_embedding({1, 1}, {1, 0});
    const Metric m = squared_euclidean_metric();
    PrototypeSet ps;
    ps.prototypes[0] = {0.0};
    ps.prototypes[1] = {100.0};
    const auto probs = class_probabilities(ps, id, {0.0}, m);
    double sum = 0.0;
    for (const auto& [label, p] : probs) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("label permutation permutes probabilities exactly") {
    Rng rng(1);
    const Embedding e = make_embedding({1, 3, 2}, rng);
    const Metric m = squared_euclidean_metric();
    Episode ep;
    ep.classes = {0, 1, 2};
    ep.support = {{{-1.0}, 0}, {{0.0}, 1}, {{1.0}, 2}};

    Episode permuted;  // swap labels 0 <-> 2
    permuted.classes = {0, 1, 2};
    permuted.support = {{{-1.0}, 2}, {{0.0}, 1}, {{1.0}, 0}};

    const auto pa = class_probabilities(compute_prototypes(e, ep), e, {0.4}, m);
    const auto pb = class_probabilities(compute_prototypes(e, permuted), e, {0.4}, m);
    CHECK(pa[0].second == pb[2].second);
    CHECK(pa[1].second == pb[1].second);
    CHECK(pa[2].second == pb[0].second);
}

TEST_CASE("prototype translation equivariance with the identity embedding") {
    const Embedding id = fixed_embedding({1, 1}, {1, 0});
    Episode ep;
    ep.classes = {0, 1};
    ep.support = {{{-1.0}, 0}, {{-0.8}, 0}, {{1.0}, 1}};
    const PrototypeSet base = compute_prototypes(id, ep);

    Episode shifted = ep;
    for (auto& s : shifted.support) s.x[0] += 0.37;
    const PrototypeSet moved = compute_prototypes(id, shifted);
    for (const auto& [label, proto] : base.prototypes)
        CHECK(std::abs(moved.prototypes.at(label)[0] - proto[0] - 0.37) <= 1e-12);
}

TEST_CASE("episode NLL: separable, uniform, and single-class cases") {
    const Embedding id = fixed_embedding({1, 1}, {1, 0});
    const Metric m = squared_euclidean_metric();

    Episode far;
    far.classes = {0, 1};
    far.support = {{{0.0}, 0}, {{100.0}, 1}};
    far.query = {{{0.0}, 0}, {{100.0}, 1}};
    CHECK(episode_nll(id, far, m) <= 1e-9);

    Episode even;
    even.classes = {0, 1};
    even.support = {{{-1.0}, 0}, {{1.0}, 1}};
    even.query = {{{0.0}, 0}};
    CHECK(episode_nll(id, even, m) == doctest::Approx(std::log(2.0)));

    Episode single;
    single.classes = {0};
    single.support = {{{0.0}, 0}};
    single.query = {{{3.0}, 0}};
    CHECK(episode_nll(id, single, m) == doctest::Approx(0.0));
}

TEST_CASE("training: zero steps and zero learning rate change nothing") {
    Rng rng(2);
    const Embedding e0 = make_embedding({1, 4, 2}, rng);
    Rng data(3);
    const Episode ep = make_toy_episode(data);
    const Metric m = squared_euclidean_metric();

    const Embedding unchanged = train_embedding(e0, {ep}, 0, 0.5, m);
    CHECK(unchanged.params == e0.params);

    TrainTrace trace;
    train_embedding(e0, {ep}, 5, 0.0, m, &trace);
    for (double v : trace.nll) CHECK(v == doctest::Approx(trace.nll.front()));
}

TEST_CASE("50 descent steps reduce NLL on the separable toy") {
    Rng rng(4);
    const Embedding e0 = make_embedding({1, 4, 2}, rng);
    Rng data(5);
    const Episode ep = make_toy_episode(data);
    const Metric m = squared_euclidean_metric();

    TrainTrace trace;
    train_embedding(e0, {ep}, 50, 0.5, m, &trace);
    CHECK(trace.nll.back() < trace.nll.front());
}

TEST_CASE("parallel finite-difference training matches serial bitwise") {
    Rng rng(6);
    const Embedding e0 = make_embedding({1, 3, 2}, rng);
    Rng data(7);
    const Episode ep = make_toy_episode(data, 4);
    const Metric m = squared_euclidean_metric();
    const Embedding a = train_embedding(e0, {ep}, 3, 0.3, m, nullptr, Exec::serial);
    const Embedding b = train_embedding(e0, {ep}, 3, 0.3, m, nullptr, Exec::parallel);
    CHECK(a.params == b.params);
}

TEST_CASE("central and forward difference NLL gradients agree") {
    Rng rng(8);
    Embedding e = make_embedding({1, 3, 2}, rng);
    Rng data(9);
    const Episode ep = make_toy_episode(data, 4);
    const Metric m = squared_euclidean_metric();
    const double h = 1e-5;
    const double base = episode_nll(e, ep, m);
    for (std::size_t i = 0; i < e.params.size(); i += 3) {
        Embedding ep_ = e, em_ = e;
        ep_.params[i] += h;
        em_.params[i] -= h;
        const double central = (episode_nll(ep_, ep, m) - episode_nll(em_, ep, m)) / (2 * h);
        const double fwd = (episode_nll(ep_, ep, m) - base) / h;
        CHECK(central == doctest::Approx(fwd).epsilon(1e-3));
    }
}

TEST_CASE("leaf split separates global parameters from prototypes") {
    Rng rng(10);
    const Embedding e = make_embedding({1, 3, 2}, rng);

    Episode a;
    a.classes = {2, 4, 5};
    a.support = {{{-1.0}, 2}, {{0.0}, 4}, {{1.0}, 5}};
    Episode b;
    b.classes = {1, 3};
    b.support = {{{0.5}, 1}, {{-0.5}, 3}};

    const LeafSplit sa = leaf_split_coordinates(e, a);
    const LeafSplit sb = leaf_split_coordinates(e, b);
    CHECK(sa.global_params == sb.global_params);  // shared theta block
    CHECK(sa.local_prototypes.size() == 3 * 2);   // three prototypes of dim 2
    CHECK(sa.local_prototypes != sb.local_prototypes);

    // deterministic: repeated calls are bit-identical
    const LeafSplit again = leaf_split_coordinates(e, a);
    CHECK(again.local_prototypes == sa.local_prototypes);

    // identity embedding: local block equals raw class means
    const Embedding id = fixed_embedding({1, 1}, {1, 0});
    Episode c;
    c.classes = {0, 1};
    c.support = {{{1.0}, 0}, {{3.0}, 0}, {{5.0}, 1}};
    const LeafSplit sc = leaf_split_coordinates(id, c);
    CHECK(sc.local_prototypes[0] == doctest::Approx(2.0));
    CHECK(sc.local_prototypes[1] == doctest::Approx(5.0));
}

TEST_CASE("episode JSON roundtrip and probabilities CSV") {
    const std::string dir = "proto_test_tmp";
    std::filesystem::create_directories(dir);
    const std::string epath = dir + "/episode.json";
    {
        std::ofstream out(epath);
        out << R"([
          {"x": [-1.1], "y": 0, "role": "support"},
          {"x": [-0.9], "y": 0, "role": "support"},
          {"x": [1.0], "y": 1, "role": "support"},
          {"x": [-1.0], "y": 0, "role": "query"},
          {"x": [0.9], "y": 1, "role": "query"}
        ])";
    }
    const Episode ep = load_episode_json(epath);
    CHECK(ep.support.size() == 3);
    CHECK(ep.query.size() == 2);
    CHECK(ep.classes == std::vector<int>{0, 1});

    const Embedding id = fixed_embedding({1, 1}, {1, 0});
    const std::string cpath = dir + "/probs.csv";
    write_probabilities_csv(cpath, id, ep, squared_euclidean_metric());
    std::ifstream in(cpath);
    std::string header;
    std::getline(in, header);
    CHECK(header == "query,class,probability");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 4);  // 2 queries x 2 classes
    std::filesystem::remove_all(dir);
}
