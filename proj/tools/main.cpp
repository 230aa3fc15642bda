#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chanlearn/config.hpp"
#include "chanlearn/experiment.hpp"

namespace {

struct SubcommandSpec {
    chanlearn::Mode mode;
    CLI::App* app = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* runs_opt = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn channel codebooks and quadratic decoders from noise samples"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int runs = 0;
    bool quiet = false;

    const std::pair<chanlearn::Mode, const char*> defs[] = {
        {chanlearn::Mode::kSgd, "Alternating stochastic descent over codebook and decoder"},
        {chanlearn::Mode::kGibbs, "Temperature-controlled codebook expurgation"},
        {chanlearn::Mode::kMi, "Kernel-model input-weight optimization and entropy gap"},
        {chanlearn::Mode::kBounds, "Evaluate the generalization and expurgation bounds"},
        {chanlearn::Mode::kOracle, "Closed-form two-codeword error probability"},
    };
    std::vector<SubcommandSpec> subs;
    for (const auto& [mode, desc] : defs) {
        SubcommandSpec spec;
        spec.mode = mode;
        spec.app = app.add_subcommand(chanlearn::mode_name(mode), desc);
        spec.app->add_option("--config", config_path, "configuration file (key = value lines)");
        spec.seed_opt = spec.app->add_option("--seed", seed, "64-bit master seed override");
        spec.app->add_option("--out", out_dir, "output directory");
        spec.runs_opt = spec.app->add_option("--runs", runs, "override the number of runs");
        spec.app->add_flag("--quiet", quiet, "suppress progress output");
        subs.push_back(spec);
    }

    CLI11_PARSE(app, argc, argv);

    const SubcommandSpec* active = nullptr;
    for (const SubcommandSpec& spec : subs) {
        if (spec.app->parsed()) active = &spec;
    }
    if (active == nullptr) {
        std::cerr << "error: no subcommand selected" << std::endl;
        return 1;
    }

    chanlearn::ExperimentConfig cfg;
    try {
        cfg = config_path.empty() ? chanlearn::parse_config("", active->mode)
                                  : chanlearn::load_config(config_path, active->mode);
        if (active->seed_opt->count() > 0) cfg.seed = seed;
        if (active->runs_opt->count() > 0) {
            if (runs < 1) throw chanlearn::ConfigError("--runs must be positive");
            cfg.n_runs = runs;
        }
    } catch (const chanlearn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 1;
    }

    chanlearn::RunOptions opts;
    if (!out_dir.empty()) {
        opts.out_dir = out_dir;
    } else if (const char* env = std::getenv("CHANLEARN_OUT")) {
        opts.out_dir = env;
    } else {
        opts.out_dir = "out";
    }
    opts.quiet = quiet;

    try {
        return chanlearn::run_experiment(cfg, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
