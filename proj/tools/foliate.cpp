#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "foliate/errors.hpp"
#include "foliate/experiments.hpp"

namespace {

int do_run(const std::string& config_path, std::optional<std::uint64_t> seed,
           bool parallel) {
    foliate::ExperimentConfig cfg = foliate::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (const char* dir = std::getenv("FOLIATE_OUTPUT_DIR")) cfg.output_dir = dir;

    const foliate::RunReport rep = foliate::run_experiment(
        cfg, parallel ? foliate::Exec::parallel : foliate::Exec::serial);
    foliate::write_report(rep, cfg.output_dir);

    for (const auto& c : rep.checks)
        std::printf("[%s] %s (%.3g)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.value);
    std::printf("%s: %s in %.3f s -> %s/report.json\n", cfg.experiment.c_str(),
                rep.all_pass() ? "all checks passed" : "CHECKS FAILED",
                rep.duration_seconds, cfg.output_dir.c_str());
    return rep.all_pass() ? 0 : 1;
}

int do_check(const std::string& suite, std::uint64_t seed, bool parallel) {
    const auto reports = foliate::run_check_suite(
        suite, seed, parallel ? foliate::Exec::parallel : foliate::Exec::serial);
    bool all = true;
    for (const auto& rep : reports) {
        const std::string name = rep.config_echo.at("experiment").get<std::string>();
        for (const auto& c : rep.checks) {
            std::printf("[%s] %s / %s (%.3g)\n", c.pass ? "PASS" : "FAIL",
                        name.c_str(), c.name.c_str(), c.value);
            all = all && c.pass;
        }
    }
    return all ? 0 : 1;
}

int do_plot(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw foliate::IoError("cannot open report: " + report_path);
    nlohmann::json j;
    in >> j;

    foliate::RunReport rep;
    rep.config_echo = j.at("config");
    for (const auto& jt : j.at("tables")) {
        foliate::ResultTable t;
        t.name = jt.at("name").get<std::string>();
        t.columns = jt.at("columns").get<std::vector<std::string>>();
        for (const auto& row : jt.at("rows"))
            t.rows.push_back(row.get<std::vector<double>>());
        // first two columns unless the table encodes a known layout
        t.plot_x = 0;
        t.plot_y = t.columns.size() > 1 ? 1 : 0;
        rep.tables.push_back(std::move(t));
    }
    std::cout << foliate::emit_plot_data(rep);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"foliate: foliated transfer-learning experiments"};
    app.require_subcommand(1);

    std::string config_path, suite, report_path;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t check_seed = 0;
    bool parallel = false;

    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config_path, "config.json path")->required();
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_flag("--parallel", parallel, "use the OpenMP kernels");

    auto* check = app.add_subcommand("check", "run a named verification suite");
    check->add_option("suite", suite, "suite name (see --list)")->required();
    check->add_option("--seed", check_seed, "suite seed");
    check->add_flag("--parallel", parallel, "use the OpenMP kernels");

    auto* plot = app.add_subcommand("plot", "emit x,y,series CSV from a report");
    plot->add_option("report", report_path, "report.json path")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) return do_run(config_path, seed_override, parallel);
        if (check->parsed()) return do_check(suite, check_seed, parallel);
        if (plot->parsed()) return do_plot(report_path);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const foliate::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const foliate::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
