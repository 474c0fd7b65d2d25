#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "rpp/errors.hpp"
#include "rpp/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"renormalized-potential simulation toolkit"};
    app.footer("exit codes: 0 pass, 1 error, 2 check failure, 3 inconclusive");

    std::string experiment, config_path, out_dir;
    std::uint64_t seed = 0;
    int threads = -1;
    app.add_option("experiment", experiment, "experiment name (see --list)");
    app.add_option("--config", config_path, "JSON config file");
    auto* seed_opt = app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out_dir, "output directory");
    auto* threads_opt = app.add_option("--threads", threads, "worker thread count");
    bool list = false;
    app.add_flag("--list", list, "list experiments and exit");

    // per-experiment parameter overrides; only the ones actually passed are
    // forwarded, so config-file values survive unless overridden
    struct NumOpt {
        const char* flag;
        const char* key;
        double value = 0.0;
        CLI::Option* opt = nullptr;
    };
    NumOpt nums[] = {
        {"--d", "d"},           {"--p", "p"},
        {"--theta", "theta"},   {"--gamma", "gamma"},
        {"--t", "t"},           {"--dt", "dt"},
        {"--delta", "delta"},   {"--alpha", "alpha"},
        {"--n-paths", "n_paths"}, {"--n-fields", "n_fields"},
        {"--n-potentials", "n_potentials"}, {"--mc-reps", "mc_reps"},
        {"--cells-per-unit", "cells_per_unit"},
    };
    for (NumOpt& n : nums) n.opt = app.add_option(n.flag, n.value);
    std::string manifest_path;
    auto* manifest_opt = app.add_option("--manifest", manifest_path,
                                        "manifest to digest (report experiment)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list) {
            for (const std::string& name : rpp::experiment_names())
                std::printf("%s\n", name.c_str());
            return 0;
        }
        rpp::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = rpp::ExperimentConfig::load_file(config_path);
        if (!experiment.empty()) cfg.experiment = experiment;
        if (cfg.experiment.empty())
            throw rpp::domain_error("no experiment named (positional argument or config file)");
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (threads_opt->count() > 0) cfg.threads = threads;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        for (const NumOpt& n : nums)
            if (n.opt->count() > 0) cfg.params[n.key] = n.value;
        if (manifest_opt->count() > 0) cfg.params["manifest"] = manifest_path;

        return rpp::run(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
