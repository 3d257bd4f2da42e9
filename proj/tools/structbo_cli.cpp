// Experiment runner CLI. Everything substantive goes through the C API in
// structbo/capi.h; this file only parses arguments.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "structbo/capi.h"

namespace {

int report(int status) {
    if (status != SB_OK) std::fprintf(stderr, "error: %s\n", sb_last_error());
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structbo: dependency-structure-search Bayesian optimization runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string seeds, out_dir, optimizer;
    int iterations = -1;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "config file path")->required();
    run->add_option("--seeds", seeds, "override seed list, comma separated");
    run->add_option("--out", out_dir, "override output directory");
    run->add_option("--optimizer", optimizer, "override optimizer (dss_gp_ucb, gp_ucb, random)");
    run->add_option("--iterations", iterations, "override iteration count");

    std::string plot_dir;
    auto* plot = app.add_subcommand("plot", "regenerate summary CSV and SVG plots from traces");
    plot->add_option("trace-dir", plot_dir, "directory with seed_*/trace.txt")->required();

    std::string inspect_dir;
    auto* inspect = app.add_subcommand("inspect-structure", "print the detected dependency structure");
    inspect->add_option("trace-dir", inspect_dir, "directory with seed_*/structure.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : SB_ERROR_CONFIG;
    }

    if (run->parsed()) {
        sb_config* cfg = nullptr;
        int status = report(sb_config_load(config_path.c_str(), &cfg));
        if (status != SB_OK) return status;
        if (const char* root = std::getenv("STRUCTBO_OUT"); root && *root) {
            // Fallback output root when the config names no directory.
            sb_config_set_default_out_dir(cfg, (std::string(root) + "/run").c_str());
        }
        if (!seeds.empty()) status = report(sb_config_set(cfg, "experiment.seeds", seeds.c_str()));
        if (status == SB_OK && !out_dir.empty())
            status = report(sb_config_set(cfg, "experiment.out_dir", out_dir.c_str()));
        if (status == SB_OK && !optimizer.empty())
            status = report(sb_config_set(cfg, "experiment.optimizer", optimizer.c_str()));
        if (status == SB_OK && iterations >= 0)
            status = report(
                sb_config_set(cfg, "experiment.iterations", std::to_string(iterations).c_str()));
        if (status == SB_OK) status = report(sb_run_experiment(cfg));
        sb_config_free(cfg);
        return status;
    }
    if (plot->parsed()) return report(sb_render_outputs(plot_dir.c_str()));
    if (inspect->parsed()) {
        char* text = nullptr;
        const int status = report(sb_inspect_structure(inspect_dir.c_str(), &text));
        if (status == SB_OK && text) std::fputs(text, stdout);
        sb_string_free(text);
        return status;
    }
    return SB_ERROR_CONFIG;
}
