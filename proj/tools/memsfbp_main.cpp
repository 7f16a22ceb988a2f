#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memsfbp/errors.hpp"
#include "memsfbp/experiment.hpp"

// Batch driver: every subcommand reads an optional --config file, applies
// MEMSFBP_* environment overrides and then --set section.key=value flags, and
// writes its artifacts into --out. No prompts, no hidden state; identical
// configs reproduce identical numeric outputs byte for byte.

int main(int argc, char** argv) {
    CLI::App app{"memsfbp - coupled two-membrane MEMS free boundary toolkit"};
    app.require_subcommand(1);

    const std::vector<std::string> modes = {"evolve", "sar",        "steady",
                                            "branch", "sweep",      "thresholds",
                                            "verify", "convergence"};
    const std::vector<std::string> descriptions = {
        "time-evolve the coupled full model",
        "time-evolve the narrow-gap model",
        "solve for a steady state with Newton",
        "trace the steady branch along a parameter ray",
        "sweep lambda and classify the evolution verdicts",
        "evaluate the analytic thresholds m2 and xi0",
        "run the bundled verification checks",
        "full-vs-narrow-gap and grid convergence studies"};

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;

    for (std::size_t k = 0; k < modes.size(); ++k) {
        CLI::App* sub = app.add_subcommand(modes[k], descriptions[k]);
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--set", overrides,
                        "override a config key, e.g. --set params.eps=0.2");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        memsfbp::ExperimentConfig cfg;
        cfg.mode = app.get_subcommands().front()->get_name();
        if (!config_path.empty()) {
            cfg.kv = memsfbp::Config::from_file(config_path);
        }
        cfg.kv.apply_env_overrides();
        for (const std::string& o : overrides) {
            cfg.kv.set_override(o);
        }
        if (cfg.kv.has("output", "dir") && out_dir == "out") {
            cfg.output_dir = cfg.kv.get_string("output", "dir", "out");
        } else {
            cfg.output_dir = out_dir;
        }
        return memsfbp::run_experiment(cfg);
    } catch (const memsfbp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
