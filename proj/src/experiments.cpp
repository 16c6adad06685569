#include "foliate/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "foliate/chart.hpp"
#include "foliate/errors.hpp"
#include "foliate/foliation.hpp"
#include "foliate/learning.hpp"
#include "foliate/maml.hpp"
#include "foliate/proto.hpp"
#include "foliate/relatedness.hpp"

namespace foliate {

namespace fs = std::filesystem;

bool RunReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError("config parse error: " + std::string(ex.what()));
    }
    ExperimentConfig cfg;
    if (!j.contains("experiment")) throw ConfigError("config missing 'experiment'");
    cfg.experiment = j.at("experiment").get<std::string>();
    cfg.params = j.value("params", nlohmann::json::object());
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.output_dir = j.value("output_dir", std::string{"."});
    return cfg;
}

namespace {

double param(const nlohmann::json& p, const std::string& key, double fallback) {
    if (!p.contains(key)) return fallback;
    if (!p.at(key).is_number()) throw ConfigError("param '" + key + "' must be numeric");
    return p.at(key).get<double>();
}

int iparam(const nlohmann::json& p, const std::string& key, int fallback) {
    const double v = param(p, key, fallback);
    if (v < 0 || v != std::floor(v))
        throw ConfigError("param '" + key + "' must be a nonnegative integer");
    return static_cast<int>(v);
}

// 1-D leaf ball chart: the x-axis segment |x - c| < r inside R^2.
BallChart axis_leaf_ball(double c, double r) {
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

std::vector<BallChart> three_ball_cover() {
    return {axis_leaf_ball(-1.0, 0.8), axis_leaf_ball(0.0, 0.8),
            axis_leaf_ball(1.0, 0.8)};
}

RunReport run_maml_leaf(const ExperimentConfig& config, Exec exec) {
    RunReport rep;
    QuadraticMamlSetup setup;
    setup.dim = iparam(config.params, "dim", 2);
    setup.eps = param(config.params, "eps", 0.01);
    setup.k = param(config.params, "k", 0.25 * std::log(100.0));
    const int n = iparam(config.params, "n", 16);
    const double step = param(config.params, "step", 1e-3);
    const double tol = param(config.params, "tol", 1e-6);

    const LeafReport leaf = scan_leaf(setup, n, step, exec);

    ResultTable table;
    table.name = "leaf";
    table.columns = {"t_1", "t_2", "leaf_residual", "numeric_loss", "loss_error"};
    table.plot_x = 0;
    table.plot_y = 1;
    double worst = 0.0;
    for (std::size_t i = 0; i < leaf.tasks.size(); ++i) {
        const Vec& t = leaf.tasks[i].coords;
        table.rows.push_back({t[0], setup.dim > 1 ? t[1] : 0.0, leaf.residuals[i],
                              leaf.numeric_losses[i], leaf.loss_errors[i]});
        worst = std::max(worst, leaf.loss_errors[i]);
    }
    rep.tables.push_back(std::move(table));
    rep.checks.push_back({"leaf_loss_error", worst <= tol, worst});
    return rep;
}

RunReport run_maml_corollary(const ExperimentConfig& config, Exec) {
    RunReport rep;
    const int n = iparam(config.params, "n", 100);
    const double step = param(config.params, "step", 1e-3);
    Rng rng = Rng(config.seed).child("corollary");

    const LossSurface L = quadratic_loss();
    ResultTable table;
    table.name = "corollary";
    table.columns = {"t_1", "t_2", "eps", "k_eps", "loss_error", "model_error"};
    double worst_loss = 0.0, worst_model = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec tc;
        do {
            tc = rng.uniform_vec(2, -2.0, 2.0);
        } while (norm2(tc) < 0.05);
        const TaskPoint t{tc};
        const double eps = rng.uniform(0.01, 0.9) * norm2(tc);
        const double k = time_to_accuracy(t, eps);
        FlowConfig cfg;
        cfg.step = step;
        cfg.max_time = k + 1.0;
        const ModelPoint flowed =
            gradient_flow(L, t, ModelPoint{Vec(2, 0.0)}, k, cfg);
        const double loss_err = std::abs(L.eval(t, flowed) - eps);
        const double model_err =
            dist(model_at_accuracy(t, eps).coords, analytic_flow(t, k).coords);
        table.rows.push_back({tc[0], tc[1], eps, k, loss_err, model_err});
        worst_loss = std::max(worst_loss, loss_err);
        worst_model = std::max(worst_model, model_err);
    }
    rep.tables.push_back(std::move(table));
    rep.checks.push_back({"corollary_loss_error", worst_loss <= 1e-6, worst_loss});
    rep.checks.push_back({"corollary_model_error", worst_model <= 1e-9, worst_model});
    return rep;
}

RunReport run_proto_episode(const ExperimentConfig& config, Exec) {
    RunReport rep;
    Rng rng = Rng(config.seed).child("proto-episode");
    Episode ep;
    if (config.params.contains("episode_file")) {
        ep = load_episode_json(config.params.at("episode_file").get<std::string>());
    } else {
        Rng data = rng.child("data");
        ep = make_toy_episode(data);
    }
    std::vector<int> layers = {static_cast<int>(ep.support.front().x.size()), 4, 2};
    Rng init = rng.child("init");
    const Embedding e = make_embedding(layers, init);
    const Metric metric = squared_euclidean_metric();
    const PrototypeSet ps = compute_prototypes(e, ep);

    ResultTable table;
    table.name = "probabilities";
    table.columns = {"query", "class", "probability"};
    table.plot_x = 0;
    table.plot_y = 2;
    double worst_norm = 0.0;
    for (std::size_t q = 0; q < ep.query.size(); ++q) {
        double sum = 0.0;
        for (const auto& [label, p] : class_probabilities(ps, e, ep.query[q].x, metric)) {
            table.rows.push_back({static_cast<double>(q), static_cast<double>(label), p});
            sum += p;
        }
        worst_norm = std::max(worst_norm, std::abs(sum - 1.0));
    }
    rep.tables.push_back(std::move(table));
    rep.checks.push_back({"probability_normalization", worst_norm <= 1e-12, worst_norm});
    return rep;
}

RunReport run_proto_train(const ExperimentConfig& config, Exec exec) {
    RunReport rep;
    const int steps = iparam(config.params, "steps", 50);
    const double lr = param(config.params, "lr", 0.5);
    Rng rng = Rng(config.seed).child("proto-train");
    Rng data = rng.child("data");
    const Episode ep = make_toy_episode(data);
    Rng init = rng.child("init");
    const Embedding e0 = make_embedding({1, 4, 2}, init);
    const Metric metric = squared_euclidean_metric();

    TrainTrace trace;
    train_embedding(e0, {ep}, steps, lr, metric, &trace, exec);

    ResultTable table;
    table.name = "train";
    table.columns = {"step", "nll"};
    table.plot_x = 0;
    table.plot_y = 1;
    for (std::size_t s = 0; s < trace.nll.size(); ++s)
        table.rows.push_back({static_cast<double>(s), trace.nll[s]});
    rep.tables.push_back(std::move(table));

    const double initial = trace.nll.front(), final = trace.nll.back();
    rep.checks.push_back({"nll_halved", final <= 0.5 * initial, final / initial});
    return rep;
}

RunReport run_leaf_navigate(const ExperimentConfig& config, Exec) {
    RunReport rep;
    const int n_pairs = iparam(config.params, "n_pairs", 100);
    Rng rng = Rng(config.seed).child("leaf-navigate");
    const auto balls = three_ball_cover();

    ResultTable table;
    table.name = "navigate";
    table.columns = {"p", "q", "endpoint_error", "inverse_error"};
    double worst = 0.0, worst_inv = 0.0;
    for (int i = 0; i < n_pairs; ++i) {
        const Vec p{rng.uniform(-1.5, 1.5), 0.0};
        const Vec q{rng.uniform(-1.5, 1.5), 0.0};
        const LeafChain chain = find_chain(balls, p, q);
        const Transformation nav = leaf_navigate(chain, p, q);
        const double err = dist(nav.forward(p), q);
        const double inv_err = dist(nav.inverse(nav.forward(p)), p);
        table.rows.push_back({p[0], q[0], err, inv_err});
        worst = std::max(worst, err);
        worst_inv = std::max(worst_inv, inv_err);
    }
    rep.tables.push_back(std::move(table));
    rep.checks.push_back({"endpoint_error", worst <= 1e-9, worst});
    rep.checks.push_back({"inverse_roundtrip", worst_inv <= 1e-9, worst_inv});
    return rep;
}

RunReport run_relatedness_check(const ExperimentConfig& config, Exec) {
    RunReport rep;
    Rng rng = Rng(config.seed).child("relatedness");

    // horizontal translations: orbits are horizontal lines
    {
        RelatednessNotion n;
        n.ambient_dim = 2;
        Pseudogroup p;
        p.closure_depth = 3;
        p.generators.push_back(identity_transformation(2));
        p.generators.push_back(translation({1.0, 0.0}));
        p.generators.push_back(translation({-1.0, 0.0}));
        n.members.push_back({p, [](const Vec&) { return true; }});
        std::vector<Vec> samples;
        for (int y = -1; y <= 1; ++y)
            for (int x = -2; x <= 2; ++x)
                samples.push_back({static_cast<double>(x), static_cast<double>(y)});
        const RelatednessReport r = verify_relatedness(n, samples, 64);
        const int cells =
            *std::max_element(r.partition.begin(), r.partition.end()) + 1;
        rep.checks.push_back(
            {"translation_partition", r.all_pass() && cells == 3, double(cells)});
    }

    // rotations on R^2 \ {0}: orbits are concentric circles
    {
        RelatednessNotion n;
        n.ambient_dim = 2;
        n.members.push_back({rotation_pseudogroup(8),
                             [](const Vec& x) { return norm(x) > 1e-9; }});
        std::vector<Vec> samples;
        for (double r : {1.0, 2.0})
            for (int a = 0; a < 8; ++a) {
                const double th = 2.0 * M_PI * a / 8;
                samples.push_back({r * std::cos(th), r * std::sin(th)});
            }
        const RelatednessReport r = verify_relatedness(n, samples, 64);
        const int cells =
            *std::max_element(r.partition.begin(), r.partition.end()) + 1;
        rep.checks.push_back(
            {"rotation_partition", r.all_pass() && cells == 2, double(cells)});
    }

    // radius is invariant under rotations
    {
        std::vector<Transformation> rots;
        std::vector<Vec> samples;
        for (int i = 0; i < 100; ++i) {
            rots.push_back(rotation2d(rng.uniform(0.0, 2.0 * M_PI)));
            samples.push_back(rng.uniform_vec(2, -2.0, 2.0));
        }
        const double dev = invariant_check(
            [](const Vec& x) { return norm(x); }, rots, samples);
        rep.checks.push_back({"radius_invariant", dev <= 1e-9, dev});
    }
    return rep;
}

RunReport run_topology_check(const ExperimentConfig& config, Exec exec) {
    RunReport rep;
    const int grid_n = iparam(config.params, "grid", 41);
    (void)config;

    std::vector<TaskPoint> universe;
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j)
            universe.push_back(TaskPoint{{-1.0 + 2.0 * i / (grid_n - 1),
                                          -1.0 + 2.0 * j / (grid_n - 1)}});
    const std::vector<double> eps_grid = {0.1, 0.05, 0.01, 2e-3, 1e-3};
    const LearnerMap learner = exact_quadratic_learner();

    const std::vector<std::pair<TaskPoint, double>> bases = {
        {TaskPoint{{0.6, 0.0}}, 0.25}, {TaskPoint{{-0.6, 0.0}}, 0.25}};

    const TopologyReport smooth =
        verify_topology_axioms(quadratic_loss(), learner, universe, bases, eps_grid, exec);
    rep.checks.push_back({"smooth_axioms", smooth.pass(),
                          static_cast<double>(smooth.counterexamples.size())});

    // step discontinuity across x = 0 breaks the inner-ball property
    LossSurface stepL;
    stepL.eval = [](const TaskPoint& t, const ModelPoint& m) {
        double s = t.coords[0] >= 0.0 ? 1.0 : 0.0;
        for (std::size_t i = 0; i < m.coords.size(); ++i) {
            const double d = m.coords[i] - t.coords[i];
            s += d * d;
        }
        return s;
    };
    const TopologyReport broken =
        verify_topology_axioms(stepL, learner, universe, bases, eps_grid, exec);
    rep.checks.push_back({"discontinuous_counterexample",
                          !broken.counterexamples.empty(),
                          static_cast<double>(broken.counterexamples.size())});
    return rep;
}

RunReport run_equivariance_check(const ExperimentConfig& config, Exec) {
    RunReport rep;
    const int n = iparam(config.params, "n", 50);
    Rng rng = Rng(config.seed).child("equivariance");
    const LearnerMap learner = exact_quadratic_learner();

    std::vector<TaskPoint> tasks;
    for (int i = 0; i < n; ++i) tasks.push_back(TaskPoint{rng.uniform_vec(2, -2.0, 2.0)});

    const Vec shift{0.7, -0.3};
    const Transformation pi = translation(shift);
    const double matched = equivariance_defect(learner, pi, pi, tasks);
    rep.checks.push_back({"matched_translations", matched <= 1e-12, matched});

    const double mismatched =
        equivariance_defect(learner, pi, identity_transformation(2), tasks);
    rep.checks.push_back({"mismatched_defect",
                          std::abs(mismatched - norm(shift)) <= 1e-9, mismatched});
    return rep;
}

RunReport run_foliation_check(const ExperimentConfig& config, Exec) {
    RunReport rep;
    const int n_axiom_samples = iparam(config.params, "axiom_samples", 200);
    Rng rng = Rng(config.seed).child("foliation");

    // foliated transition (x, y) -> (x + 1, x * y) on x > 0.5
    FoliatedChart a;
    a.transverse_dim = 1;
    a.leaf_dim = 1;
    a.chart = identity_chart(2);
    a.chart.domain = [](const Vec& p) { return p[0] > 0.5; };
    a.chart.codomain = [](const Vec& c) { return c[0] > 0.5; };

    FoliatedChart b;
    b.transverse_dim = 1;
    b.leaf_dim = 1;
    b.chart.dim = 2;
    b.chart.domain = [](const Vec& p) { return p[0] > 0.5; };
    b.chart.codomain = [](const Vec& c) { return c[0] > 1.5; };
    b.chart.forward = [](const Vec& p) { return Vec{p[0] + 1.0, p[0] * p[1]}; };
    b.chart.inverse = [](const Vec& c) { return Vec{c[0] - 1.0, c[1] / (c[0] - 1.0)}; };

    FoliatedChart c_bad;
    c_bad.transverse_dim = 1;
    c_bad.leaf_dim = 1;
    c_bad.chart.dim = 2;
    c_bad.chart.domain = [](const Vec& p) { return p[0] > 0.5; };
    c_bad.chart.codomain = [](const Vec&) { return true; };
    c_bad.chart.forward = [](const Vec& p) { return Vec{p[0] + p[1], p[1]}; };
    c_bad.chart.inverse = [](const Vec& c) { return Vec{c[0] - c[1], c[1]}; };

    std::vector<Vec> overlap;
    for (int i = 0; i < 100; ++i)
        overlap.push_back({rng.uniform(1.0, 2.0), rng.uniform(-1.0, 1.0)});

    const double off_ok = verify_foliated_transition(a, b, overlap);
    rep.checks.push_back({"foliated_off_block", off_ok <= 1e-6, off_ok});
    const double off_bad = verify_foliated_transition(a, c_bad, overlap);
    rep.checks.push_back({"non_foliated_detected", off_bad >= 0.1, off_bad});

    // pseudogroup axioms: translations and the constructed leaf pseudogroup
    {
        std::vector<Vec> samples;
        for (int i = 0; i < n_axiom_samples; ++i)
            samples.push_back(rng.uniform_vec(2, -2.0, 2.0));
        const AxiomReport ar =
            verify_pseudogroup_axioms(translation_pseudogroup(2), samples);
        double worst = 0.0;
        for (const auto& c : ar.checks) worst = std::max(worst, c.worst_residual);
        rep.checks.push_back({"translation_axioms", ar.all_pass(), worst});
    }
    {
        const auto balls = three_ball_cover();
        const Pseudogroup leaf = leaf_pseudogroup(balls);
        std::vector<Vec> samples;
        for (int i = 0; i < n_axiom_samples; ++i)
            samples.push_back({rng.uniform(-1.5, 1.5), 0.0});
        const AxiomReport ar = verify_pseudogroup_axioms(leaf, samples);
        double worst = 0.0;
        for (const auto& c : ar.checks) worst = std::max(worst, c.worst_residual);
        rep.checks.push_back({"leaf_pseudogroup_axioms", ar.all_pass(), worst});
    }

    // singular example: distinguished charts of the concentric-circle foliation
    {
        const SingularFoliationSample s = concentric_circle_foliation();
        const Vec x{1.0, 0.0};
        std::vector<Vec> samples;
        for (int i = 0; i < 100; ++i) {
            const double r = rng.uniform(0.6, 1.4), th = rng.uniform(-1.0, 1.0);
            samples.push_back({r * std::cos(th), r * std::sin(th)});
        }
        const SingularChartReport scr =
            verify_singular_distinguished_chart(s, x, samples);
        rep.checks.push_back({"singular_chart", scr.pass(), scr.worst_mate_transverse});
    }
    return rep;
}

using ExperimentFn = RunReport (*)(const ExperimentConfig&, Exec);

const std::map<std::string, ExperimentFn>& experiment_registry() {
    static const std::map<std::string, ExperimentFn> registry = {
        {"maml-leaf", run_maml_leaf},
        {"maml-corollary", run_maml_corollary},
        {"proto-episode", run_proto_episode},
        {"proto-train", run_proto_train},
        {"leaf-navigate", run_leaf_navigate},
        {"relatedness-check", run_relatedness_check},
        {"topology-check", run_topology_check},
        {"equivariance-check", run_equivariance_check},
        {"foliation-check", run_foliation_check},
    };
    return registry;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config, Exec exec) {
    const auto& registry = experiment_registry();
    const auto it = registry.find(config.experiment);
    if (it == registry.end())
        throw ConfigError("unknown experiment: " + config.experiment);

    const auto start = std::chrono::steady_clock::now();
    RunReport rep = it->second(config, exec);
    rep.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    rep.config_echo = {{"experiment", config.experiment},
                       {"params", config.params},
                       {"seed", config.seed},
                       {"output_dir", config.output_dir}};
    return rep;
}

nlohmann::json report_to_json(const RunReport& report) {
    // duration deliberately left out so repeated runs are byte-identical
    nlohmann::json j;
    j["config"] = report.config_echo;
    j["version"] = report.version;
    j["all_pass"] = report.all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks)
        j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}});
    j["tables"] = nlohmann::json::array();
    for (const auto& t : report.tables) {
        nlohmann::json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        jt["rows"] = t.rows;
        j["tables"].push_back(std::move(jt));
    }
    return j;
}

namespace {

void write_atomic(const fs::path& target, const std::string& content) {
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_report(const RunReport& report, const std::string& output_dir) {
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw IoError("cannot create output dir: " + output_dir);

    write_atomic(fs::path(output_dir) / "report.json",
                 report_to_json(report).dump(2) + "\n");

    for (const auto& t : report.tables) {
        std::ostringstream csv;
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            csv << (c ? "," : "") << t.columns[c];
        csv << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                csv << (c ? "," : "") << fmt17(row[c]);
            csv << "\n";
        }
        write_atomic(fs::path(output_dir) / (t.name + ".csv"), csv.str());
    }
}

std::string emit_plot_data(const RunReport& report) {
    std::ostringstream out;
    out << "x,y,series\n";
    bool any = false;
    for (const auto& t : report.tables) {
        if (t.plot_x < 0 || t.plot_y < 0) continue;
        any = true;
        for (const auto& row : t.rows)
            out << fmt17(row[t.plot_x]) << "," << fmt17(row[t.plot_y]) << ","
                << t.name << "\n";
    }
    if (!any && report.tables.empty()) throw NoTabularData("report has no tables");
    return out.str();
}

std::vector<std::string> check_suites() {
    return {"maml",       "proto",        "leaf",      "relatedness",
            "topology",   "equivariance", "foliation", "all"};
}

std::vector<RunReport> run_check_suite(const std::string& suite, std::uint64_t seed,
                                       Exec exec) {
    std::vector<std::string> experiments;
    if (suite == "maml") {
        experiments = {"maml-leaf", "maml-corollary"};
    } else if (suite == "proto") {
        experiments = {"proto-episode", "proto-train"};
    } else if (suite == "leaf") {
        experiments = {"leaf-navigate"};
    } else if (suite == "relatedness") {
        experiments = {"relatedness-check"};
    } else if (suite == "topology") {
        experiments = {"topology-check"};
    } else if (suite == "equivariance") {
        experiments = {"equivariance-check"};
    } else if (suite == "foliation") {
        experiments = {"foliation-check"};
    } else if (suite == "all") {
        for (const auto& [name, fn] : experiment_registry()) experiments.push_back(name);
    } else {
        throw ConfigError("unknown check suite: " + suite);
    }
    std::vector<RunReport> reports;
    for (const auto& name : experiments) {
        ExperimentConfig cfg;
        cfg.experiment = name;
        cfg.seed = seed;
        reports.push_back(run_experiment(cfg, exec));
    }
    return reports;
}

}  // namespace foliate
