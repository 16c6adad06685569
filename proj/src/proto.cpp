#include "foliate/proto.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "foliate/errors.hpp"

namespace foliate {

int embedding_param_count(const std::vector<int>& layer_dims) {
    int n = 0;
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l)
        n += (layer_dims[l] + 1) * layer_dims[l + 1];
    return n;
}

Embedding make_embedding(const std::vector<int>& layer_dims, Rng& rng,
                         double init_scale) {
    Embedding e;
    e.layer_dims = layer_dims;
    e.params.resize(embedding_param_count(layer_dims));
    for (auto& p : e.params) p = rng.uniform(-init_scale, init_scale);
    return e;
}

Vec embed(const Embedding& e, const Vec& x) {
    if (static_cast<int>(x.size()) != e.layer_dims.front())
        throw DimensionMismatch("input dimension does not match first layer");
    Vec cur = x;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < e.layer_dims.size(); ++l) {
        const int in = e.layer_dims[l], out = e.layer_dims[l + 1];
        Vec next(out);
        for (int i = 0; i < out; ++i) {
            double s = e.params[off + in * out + i];  // bias
            for (int j = 0; j < in; ++j) s += e.params[off + i * in + j] * cur[j];
            next[i] = s;
        }
        off += (in + 1) * out;
        if (l + 2 < e.layer_dims.size())
            for (auto& v : next) v = std::tanh(v);
        cur = std::move(next);
    }
    return cur;
}

PrototypeSet compute_prototypes(const Embedding& e, const Episode& ep) {
    PrototypeSet ps;
    std::map<int, int> counts;
    for (const Example& s : ep.support) {
        const Vec emb = embed(e, s.x);
        auto it = ps.prototypes.find(s.y);
        if (it == ps.prototypes.end()) {
            ps.prototypes[s.y] = emb;
        } else {
            it->second = add(it->second, emb);
        }
        counts[s.y]++;
    }
    for (int c : ep.classes)
        if (!counts.count(c)) throw EmptyClass("class has no support examples");
    for (auto& [label, proto] : ps.prototypes)
        proto = scale(proto, 1.0 / counts[label]);
    return ps;
}

std::vector<std::pair<int, double>> class_probabilities(const PrototypeSet& p,
                                                        const Embedding& e,
                                                        const Vec& x,
                                                        const Metric& metric) {
    const Vec emb = embed(e, x);
    std::vector<std::pair<int, double>> out;
    double max_logit = -1e300;
    for (const auto& [label, proto] : p.prototypes) {
        const double logit = -metric.distance(emb, proto);
        out.emplace_back(label, logit);
        max_logit = std::max(max_logit, logit);
    }
    double z = 0.0;
    for (auto& [label, v] : out) {
        v = std::exp(v - max_logit);
        z += v;
    }
    for (auto& [label, v] : out) v /= z;
    return out;
}

double episode_nll(const Embedding& e, const Episode& ep, const Metric& metric) {
    const PrototypeSet ps = compute_prototypes(e, ep);
    double total = 0.0;
    for (const Example& q : ep.query) {
        const auto probs = class_probabilities(ps, e, q.x, metric);
        double p_true = 0.0;
        for (const auto& [label, p] : probs)
            if (label == q.y) p_true = p;
        total += -std::log(std::max(p_true, 1e-300));
    }
    return ep.query.empty() ? 0.0 : total / static_cast<double>(ep.query.size());
}

Embedding train_embedding(const Embedding& e, const std::vector<Episode>& episodes,
                          int steps, double lr, const Metric& metric,
                          TrainTrace* trace, Exec exec, double fd_step) {
    Embedding cur = e;
    auto mean_nll = [&](const Embedding& emb) {
        double s = 0.0;
        for (const Episode& ep : episodes) s += episode_nll(emb, ep, metric);
        return episodes.empty() ? 0.0 : s / static_cast<double>(episodes.size());
    };
    if (trace) trace->nll.push_back(mean_nll(cur));
    const int P = static_cast<int>(cur.params.size());
    for (int step = 0; step < steps; ++step) {
        Vec grad(P);
#ifdef _OPENMP
#pragma omp parallel for if (exec == Exec::parallel) schedule(static)
#endif
        for (int i = 0; i < P; ++i) {
            Embedding ep_ = cur, em_ = cur;
            ep_.params[i] += fd_step;
            em_.params[i] -= fd_step;
            grad[i] = (mean_nll(ep_) - mean_nll(em_)) / (2.0 * fd_step);
        }
        if (!all_finite(grad)) throw NonFinite("non-finite training gradient");
        for (int i = 0; i < P; ++i) cur.params[i] -= lr * grad[i];
        if (trace) trace->nll.push_back(mean_nll(cur));
    }
    return cur;
}

LeafSplit leaf_split_coordinates(const Embedding& e, const Episode& ep) {
    LeafSplit split;
    split.global_params = e.params;
    const PrototypeSet ps = compute_prototypes(e, ep);
    for (const auto& [label, proto] : ps.prototypes)
        split.local_prototypes.insert(split.local_prototypes.end(), proto.begin(),
                                      proto.end());
    return split;
}

Episode load_episode_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open episode file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw IoError("episode file parse error: " + std::string(ex.what()));
    }
    Episode ep;
    std::set<int> classes;
    for (const auto& rec : j) {
        Example ex;
        for (const auto& v : rec.at("x")) ex.x.push_back(v.get<double>());
        ex.y = rec.at("y").get<int>();
        classes.insert(ex.y);
        const std::string role = rec.at("role").get<std::string>();
        if (role == "support") {
            ep.support.push_back(std::move(ex));
        } else if (role == "query") {
            ep.query.push_back(std::move(ex));
        } else {
            throw IoError("unknown role: " + role);
        }
    }
    ep.classes.assign(classes.begin(), classes.end());
    return ep;
}

void write_probabilities_csv(const std::string& path, const Embedding& e,
                             const Episode& ep, const Metric& metric) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    const PrototypeSet ps = compute_prototypes(e, ep);
    out << "query,class,probability\n";
    for (std::size_t q = 0; q < ep.query.size(); ++q) {
        char buf[64];
        for (const auto& [label, p] : class_probabilities(ps, e, ep.query[q].x, metric)) {
            std::snprintf(buf, sizeof(buf), "%.17g", p);
            out << q << "," << label << "," << buf << "\n";
        }
    }
}

Episode make_toy_episode(Rng& rng, int per_class, double spread) {
    Episode ep;
    ep.classes = {0, 1};
    for (int c = 0; c < 2; ++c) {
        const double center = c == 0 ? -1.0 : 1.0;
        for (int i = 0; i < per_class; ++i) {
            Example ex{Vec{center + rng.uniform(-spread, spread)}, c};
            ep.support.push_back(ex);
            Example qx{Vec{center + rng.uniform(-spread, spread)}, c};
            ep.query.push_back(qx);
        }
    }
    return ep;
}

}  // namespace foliate
