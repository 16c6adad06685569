#pragma once

#include <map>
#include <string>
#include <vector>

#include "foliate/exec.hpp"
#include "foliate/relatedness.hpp"
#include "foliate/vec.hpp"

namespace foliate {

// Affine layers with tanh between them (none after the last layer).
// Parameters are flat: per layer, row-major weights then bias.
struct Embedding {
    std::vector<int> layer_dims;
    Vec params;
};

int embedding_param_count(const std::vector<int>& layer_dims);
Embedding make_embedding(const std::vector<int>& layer_dims, Rng& rng,
                         double init_scale = 0.5);

struct Example {
    Vec x;
    int y = 0;
};

struct Episode {
    std::vector<Example> support;
    std::vector<Example> query;
    std::vector<int> classes;  // Y_t, sorted
};

// Classes absent from the support get no prototype.
struct PrototypeSet {
    std::map<int, Vec> prototypes;  // class label -> mean embedding
};

Vec embed(const Embedding& e, const Vec& x);

PrototypeSet compute_prototypes(const Embedding& e, const Episode& ep);

// Softmax of negative distances, max-subtracted for stability; returns
// (class label, probability) in ascending label order.
std::vector<std::pair<int, double>> class_probabilities(const PrototypeSet& p,
                                                        const Embedding& e,
                                                        const Vec& x,
                                                        const Metric& metric);

// Mean over query points of -log p(true class).
double episode_nll(const Embedding& e, const Episode& ep, const Metric& metric);

struct TrainTrace {
    std::vector<double> nll;  // one entry per step, plus the initial value
};

// Finite-difference gradient descent on the mean episode NLL.
Embedding train_embedding(const Embedding& e, const std::vector<Episode>& episodes,
                          int steps, double lr, const Metric& metric,
                          TrainTrace* trace = nullptr, Exec exec = Exec::serial,
                          double fd_step = 1e-5);

// The foliation split: θ is the transverse (global) block, the concatenated
// prototypes are the leaf (task-local) block.
struct LeafSplit {
    Vec global_params;
    Vec local_prototypes;  // prototypes concatenated in ascending label order
};

LeafSplit leaf_split_coordinates(const Embedding& e, const Episode& ep);

// Episode file format: [{"x": [..], "y": k, "role": "support"|"query"}, ...]
Episode load_episode_json(const std::string& path);

void write_probabilities_csv(const std::string& path, const Embedding& e,
                             const Episode& ep, const Metric& metric);

// 2-class 1-D toy: class 0 around -1, class 1 around +1.
Episode make_toy_episode(Rng& rng, int per_class = 8, double spread = 0.2);

}  // namespace foliate
