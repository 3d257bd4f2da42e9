#pragma once

#include <string>
#include <vector>

#include "structbo/bo.hpp"
#include "structbo/config.hpp"

namespace structbo {

struct RunArtifacts {
    std::string out_dir;
    std::vector<std::string> trace_files;  // one per seed
    std::string summary_csv;
    std::string curve_svg;
    std::string heatmap_svg;  // empty when the run had no structure phase
};

// Runs every seed of the configured experiment and writes all artifacts under
// cfg.out_dir. Pure function of (config, seeds): re-running yields
// byte-identical files.
RunArtifacts run_experiment(const ExperimentConfig& cfg);

// Executes one seed without touching the filesystem.
RunTrace run_experiment_seed(const ExperimentConfig& cfg, std::uint64_t seed);

// Rebuilds summary.csv and the SVGs from the per-seed trace files in
// trace_dir. run_experiment ends with exactly this call.
RunArtifacts render_outputs(const std::string& trace_dir);

// Human-readable report of the detected structure stored under trace_dir.
std::string inspect_structure(const std::string& trace_dir);

namespace detail {
std::string render_curve_svg(const std::vector<RunTrace>& traces);
std::string render_heatmap_svg(const Eigen::MatrixXd& sums, const DependencyGraph& graph);
std::string render_summary_csv(const std::vector<std::uint64_t>& seeds,
                               const std::vector<RunTrace>& traces);
}  // namespace detail

}  // namespace structbo
