#pragma once

#include <string>

#include "chanlearn/config.hpp"

namespace chanlearn {

struct RunOptions {
    std::string out_dir = "out";
    int workers = 0;  // 0 means hardware concurrency
    bool quiet = false;
};

/// Execute the configured experiment end to end: seeded runs (dispatched to
/// a worker pool), per-run records and trace CSVs, and aggregate files, all
/// under out_dir. Output bytes are independent of the worker count. Returns
/// a process exit status, 0 on success.
int run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace chanlearn
