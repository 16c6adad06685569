#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "foliate/exec.hpp"
#include "foliate/vec.hpp"

namespace foliate {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
    std::string experiment;
    nlohmann::json params;  // experiment-specific key/value map
    std::uint64_t seed = 0;
    std::string output_dir = ".";
};

ExperimentConfig load_config(const std::string& path);

struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // columns used by `foliate plot`; -1 means the table is not plottable
    int plot_x = -1;
    int plot_y = -1;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;  // the measured residual / defect behind the verdict
};

struct RunReport {
    nlohmann::json config_echo;
    std::vector<ResultTable> tables;
    std::vector<CheckResult> checks;
    double duration_seconds = 0.0;  // console only, never serialized
    std::string version = kToolVersion;
    bool all_pass() const;
};

// Executes the named experiment; pure aside from reading episode files
// referenced by the config.
RunReport run_experiment(const ExperimentConfig& config, Exec exec = Exec::serial);

// report.json plus one CSV per table, written via temp-file rename so a
// failure never leaves partial output.
void write_report(const RunReport& report, const std::string& output_dir);

nlohmann::json report_to_json(const RunReport& report);

// Flat (x, y, series) rows for external plotters.
std::string emit_plot_data(const RunReport& report);

// Named default-config suites for `foliate check`.
std::vector<std::string> check_suites();
std::vector<RunReport> run_check_suite(const std::string& suite, std::uint64_t seed,
                                       Exec exec = Exec::serial);

}  // namespace foliate
