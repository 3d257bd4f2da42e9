#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "structbo/acquisition.hpp"
#include "structbo/beta.hpp"
#include "structbo/kernel.hpp"
#include "structbo/structure.hpp"

namespace structbo {

enum class EnvKind { Synthetic, Drone, Pursuit, PursuitHet };
enum class OptimizerKind { DssGpUcb, GpUcb, Random };

struct SyntheticEnvConfig {
    int dimension = 10;
    double edge_prob = 0.2;
    double value_noise = 0.1;
    double hessian_noise = 0.1;
};

struct PolicyEnvConfig {
    int n_agents = 3;
    int epoch_len = 0;  // 0 = environment default
    int n_states = 4;   // state batches per surrogate Hessian query
    double fd_step = 1e-3;
};

struct ExperimentConfig {
    EnvKind env = EnvKind::Synthetic;
    OptimizerKind optimizer = OptimizerKind::DssGpUcb;
    int iterations = 100;
    int batch_size = 1;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    int eval_repeats = 1;
    std::string out_dir;
    double noise_var = 1e-6;

    SyntheticEnvConfig synthetic;
    PolicyEnvConfig policy;
    StructureSearchConfig structure;
    KernelSpec kernel;
    bool kernel_grid_search = false;
    BetaSchedule beta;
    AcquireConfig acquire;

    void validate() const;  // throws ConfigError
};

// Flat sectioned key=value text. Unknown keys and malformed values raise
// ConfigError carrying the dotted path ("structure.t0" etc).
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Applies one dotted-path override, e.g. ("experiment.seeds", "1,2,3").
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

std::string env_kind_name(EnvKind kind);
std::string optimizer_kind_name(OptimizerKind kind);

}  // namespace structbo
