#pragma once

#include <string>

#include "memsfbp/config.hpp"

namespace memsfbp {

/// Batch experiment drivers behind the CLI subcommands. Every driver writes
/// its artifacts plus a manifest.json (config echo, code version, grid, wall
/// time) into output_dir and returns a process exit status. Runs are
/// deterministic: identical configs produce byte-identical numeric outputs.
struct ExperimentConfig {
    std::string mode;  // evolve | sar | steady | branch | sweep | thresholds | verify | convergence
    Config kv;
    std::string output_dir = "out";
};

int run_experiment(const ExperimentConfig& cfg);

} // namespace memsfbp
