#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rpp {

inline constexpr const char* kCodeVersion = "0.1.0";

// Experiment run request.  threads and out_dir are execution details: they
// never enter the config hash, so a re-run on different hardware settings is
// recognizably the same experiment.
struct ExperimentConfig {
    int schema_version = 1;
    std::string experiment;
    std::uint64_t seed = 1;
    int threads = 0; // 0 keeps the runtime default
    std::string out_dir = "out";
    nlohmann::json params = nlohmann::json::object();

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load_file(const std::string& path);
    nlohmann::json to_json() const;
};

// FNV-1a over the canonical serialization of the semantically meaningful
// fields (schema_version, experiment, seed, params); object keys serialize
// sorted, so field order in the source file cannot move the hash.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string config_hash_hex(const ExperimentConfig& config);

// One check line of an experiment: measured value against a target with a
// tolerance, plus a verdict ("pass", "fail", "inconclusive", "info",
// "DISCREPANCY" for deliberately unreconciled published values).
struct CheckRow {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    std::string verdict;
};

std::string checks_csv(const std::vector<CheckRow>& checks);

struct ExperimentResult {
    std::vector<CheckRow> checks;
    // file name -> full content; written verbatim, so identical configs give
    // byte-identical files regardless of thread count
    std::vector<std::pair<std::string, std::string>> files;

    bool any_fail() const;
    bool any_inconclusive() const;
    int exit_code() const; // 0 pass, 2 fail, 3 inconclusive
};

std::vector<std::string> experiment_names();

// Dispatches to the named experiment.  Unknown names and invalid parameters
// throw domain_error with a diagnostic naming the violated constraint.
ExperimentResult run_experiment(const ExperimentConfig& config);

// run_experiment plus persistence: creates out_dir, writes every result file
// and checks.csv, then manifest.json (config hash, code version, timestamps,
// file list; the only file allowed to differ between identical runs).
// Returns the exit code: 0 pass, 1 error, 2 fail, 3 inconclusive.
int run(const ExperimentConfig& config);

} // namespace rpp
