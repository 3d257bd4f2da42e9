#include "structbo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "structbo/envs/drone.hpp"
#include "structbo/envs/pursuit.hpp"
#include "structbo/envs/synthetic.hpp"
#include "structbo/hom.hpp"
#include "structbo/trace_io.hpp"

namespace structbo {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kHessianNoiseStream = 7;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), "cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

BoOptions make_bo_options(const ExperimentConfig& cfg) {
    BoOptions bo;
    bo.base_kernel = cfg.kernel;
    bo.beta = cfg.beta;
    bo.acquire = cfg.acquire;
    bo.batch_size = cfg.batch_size;
    bo.noise_var = cfg.noise_var;
    bo.lengthscale_grid_search = cfg.kernel_grid_search;
    return bo;
}

std::unique_ptr<envs::MultiAgentEnv> make_policy_env(const ExperimentConfig& cfg) {
    switch (cfg.env) {
        case EnvKind::Drone: {
            envs::DroneWorldConfig c;
            c.n_drones = cfg.policy.n_agents;
            if (cfg.policy.epoch_len > 0) c.epoch_len = cfg.policy.epoch_len;
            return std::make_unique<envs::DroneWorld>(c);
        }
        case EnvKind::Pursuit:
        case EnvKind::PursuitHet: {
            envs::PursuitWorldConfig c;
            c.n_predators = cfg.policy.n_agents;
            c.heterogeneous = cfg.env == EnvKind::PursuitHet;
            if (cfg.policy.epoch_len > 0) c.epoch_len = cfg.policy.epoch_len;
            return std::make_unique<envs::PursuitWorld>(c);
        }
        default:
            throw ContractViolation("make_policy_env: not a policy environment");
    }
}

struct SeedRun {
    RunTrace trace;
    std::string objective_json;  // synthetic serialization, when applicable
    std::string layout_json;     // HOM layout, when applicable
};

SeedRun run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    SeedRun out;
    BoOptions bo = make_bo_options(cfg);

    if (cfg.env == EnvKind::Synthetic) {
        const auto objective = std::make_shared<envs::SyntheticAdditive>(envs::SyntheticAdditive::make(
            ErdosRenyiSpec{cfg.synthetic.dimension, cfg.synthetic.edge_prob, seed},
            cfg.synthetic.value_noise));
        out.objective_json = objective->serialize();
        const int dims = objective->dims();

        auto value_rng = std::make_shared<Rng>(Rng::stream(seed, kNoiseStream));
        const ObjectiveFn value_fn = [objective, value_rng](const Vec& theta) {
            return objective->noisy_value(theta, *value_rng);
        };
        auto hessian_rng = std::make_shared<Rng>(Rng::stream(seed, kHessianNoiseStream));
        const double sigma_n = cfg.synthetic.hessian_noise;
        const HessianFn hessian_fn = [objective, hessian_rng, sigma_n](const Vec& theta) {
            return objective->noisy_hessian(theta, *hessian_rng, sigma_n);
        };
        bo.optimum = objective->optimum_value();
        bo.true_value = [objective](const Vec& theta) { return objective->value(theta); };

        switch (cfg.optimizer) {
            case OptimizerKind::DssGpUcb: {
                DssOptions opts{cfg.structure, bo, std::nullopt};
                opts.bo.beta.structure_queries =
                    static_cast<long>(cfg.structure.resolve_t0(dims)) * cfg.structure.resolve_c1(dims);
                out.trace = run_dss_gp_ucb(value_fn, hessian_fn, dims, opts, cfg.iterations, seed);
                break;
            }
            case OptimizerKind::GpUcb:
                out.trace = run_gp_ucb(value_fn, dims, AdditiveKernel::full(dims, cfg.kernel), bo,
                                       cfg.iterations, seed);
                break;
            case OptimizerKind::Random:
                out.trace = run_random_search(value_fn, dims, bo, cfg.iterations, seed);
                break;
        }
        return out;
    }

    // Policy environments: the flat point encodes HOM weights.
    auto env = std::shared_ptr<envs::MultiAgentEnv>(make_policy_env(cfg));
    HomConfig hom_cfg;
    hom_cfg.n_agents = env->n_agents();
    hom_cfg.state_dim = env->state_dim();
    hom_cfg.action_dim = env->action_dim();
    const auto layout = std::make_shared<HomLayout>(make_hom_layout(hom_cfg));
    out.layout_json = layout->describe();
    const int dims = layout->total_dim;
    const int repeats = cfg.eval_repeats;

    const ObjectiveFn value_fn = [env, layout, seed, repeats](const Vec& theta) {
        const HomParams params = unpack_params(theta, *layout);
        const envs::PolicyFn policy = [&params](const StateBatch& states) {
            return gen_policy(params, states);
        };
        // Common random numbers: every candidate sees the same episode seeds.
        double total = 0.0;
        for (int rep = 0; rep < repeats; ++rep) {
            const std::uint64_t episode_seed =
                Rng::stream(seed, kEpisodeStream + static_cast<std::uint64_t>(rep)).next_u64();
            total += envs::evaluate_policy(*env, policy, episode_seed).total_reward;
        }
        return total / static_cast<double>(repeats);
    };

    SurrogateHessianConfig surrogate;
    surrogate.n_states = cfg.policy.n_states;
    surrogate.fd.step = cfg.policy.fd_step;
    auto state_rng = std::make_shared<Rng>(Rng::stream(seed, kStateSampleStream));
    const HessianFn hessian_fn = [env, layout, surrogate, state_rng](const Vec& theta) {
        std::vector<StateBatch> batches;
        batches.reserve(static_cast<std::size_t>(surrogate.n_states));
        for (int i = 0; i < surrogate.n_states; ++i) batches.push_back(env->sample_states(*state_rng));
        return surrogate_policy_hessian(theta, make_relaxed_policy(*layout, surrogate), batches,
                                        surrogate);
    };

    switch (cfg.optimizer) {
        case OptimizerKind::DssGpUcb: {
            DssOptions opts{cfg.structure, bo, std::nullopt};
            opts.bo.beta.structure_queries =
                static_cast<long>(cfg.structure.resolve_t0(dims)) * cfg.structure.resolve_c1(dims);
            out.trace = run_dss_gp_ucb(value_fn, hessian_fn, dims, opts, cfg.iterations, seed);
            break;
        }
        case OptimizerKind::GpUcb:
            out.trace = run_gp_ucb(value_fn, dims, AdditiveKernel::full(dims, cfg.kernel), bo,
                                   cfg.iterations, seed);
            break;
        case OptimizerKind::Random:
            out.trace = run_random_search(value_fn, dims, bo, cfg.iterations, seed);
            break;
    }
    return out;
}

std::vector<std::pair<std::uint64_t, fs::path>> seed_dirs(const fs::path& dir) {
    std::vector<std::pair<std::uint64_t, fs::path>> out;
    if (!fs::is_directory(dir)) throw ConfigError(dir.string(), "not a directory");
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_directory()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind("seed_", 0) != 0) continue;
        out.emplace_back(std::stoull(name.substr(5)), entry.path());
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) throw ConfigError(dir.string(), "no seed_* directories found");
    return out;
}

}  // namespace

RunTrace run_experiment_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    return run_seed(cfg, seed).trace;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.out_dir.empty()) throw ConfigError("experiment.out_dir", "must be set to run");
    const fs::path root(cfg.out_dir);
    fs::create_directories(root);

    bool mid_run_failure = false;
    for (std::uint64_t seed : cfg.seeds) {
        const SeedRun run = run_seed(cfg, seed);
        const fs::path dir = root / ("seed_" + std::to_string(seed));
        fs::create_directories(dir);
        write_file(dir / "trace.txt", format_trace(run.trace));
        if (run.trace.has_structure) {
            write_file(dir / "structure.json", format_structure_sidecar(run.trace));
            write_file(dir / "hessian_sums.txt", format_hessian_sums(run.trace.hessian_sums));
        }
        if (!run.objective_json.empty()) write_file(dir / "objective.json", run.objective_json);
        if (!run.layout_json.empty()) write_file(root / "layout.json", run.layout_json);
        if (run.trace.aborted) mid_run_failure = true;
    }

    RunArtifacts artifacts = render_outputs(cfg.out_dir);
    if (mid_run_failure)
        throw NumericalError("experiment finished with aborted traces; partial artifacts in " +
                             cfg.out_dir);
    return artifacts;
}

RunArtifacts render_outputs(const std::string& trace_dir) {
    const fs::path root(trace_dir);
    RunArtifacts artifacts;
    artifacts.out_dir = trace_dir;

    std::vector<std::uint64_t> seeds;
    std::vector<RunTrace> traces;
    fs::path heatmap_source_structure;
    fs::path heatmap_source_sums;
    for (const auto& [seed, dir] : seed_dirs(root)) {
        seeds.push_back(seed);
        RunTrace trace = parse_trace(read_file(dir / "trace.txt"));
        if (fs::exists(dir / "structure.json")) {
            parse_structure_sidecar(read_file(dir / "structure.json"), trace);
            if (heatmap_source_structure.empty() && fs::exists(dir / "hessian_sums.txt")) {
                heatmap_source_structure = dir / "structure.json";
                heatmap_source_sums = dir / "hessian_sums.txt";
            }
        }
        artifacts.trace_files.push_back((dir / "trace.txt").string());
        traces.push_back(std::move(trace));
    }

    const fs::path csv = root / "summary.csv";
    write_file(csv, detail::render_summary_csv(seeds, traces));
    artifacts.summary_csv = csv.string();

    const fs::path curve = root / "curve.svg";
    write_file(curve, detail::render_curve_svg(traces));
    artifacts.curve_svg = curve.string();

    if (!heatmap_source_structure.empty()) {
        RunTrace meta;
        parse_structure_sidecar(read_file(heatmap_source_structure), meta);
        const Eigen::MatrixXd sums = parse_hessian_sums(read_file(heatmap_source_sums));
        const fs::path heatmap = root / "heatmap.svg";
        write_file(heatmap, detail::render_heatmap_svg(sums, meta.graph));
        artifacts.heatmap_svg = heatmap.string();
    }
    return artifacts;
}

std::string inspect_structure(const std::string& trace_dir) {
    std::ostringstream out;
    bool any = false;
    for (const auto& [seed, dir] : seed_dirs(fs::path(trace_dir))) {
        if (!fs::exists(dir / "structure.json")) continue;
        any = true;
        RunTrace meta;
        parse_structure_sidecar(read_file(dir / "structure.json"), meta);
        out << "seed " << seed << ": dims=" << meta.dims << " t0=" << meta.t0 << " c1=" << meta.c1
            << " threshold=" << meta.threshold;
        if (std::isfinite(meta.sigma_n_estimate)) out << " sigma_n_est=" << meta.sigma_n_estimate;
        out << "\n  edges (" << meta.graph.edge_count() << "):";
        for (const auto& [a, b] : meta.graph.edges()) out << ' ' << a << '-' << b;
        out << "\n  cliques (" << meta.cliques.size() << "):";
        for (const Clique& c : meta.cliques) {
            out << " {";
            for (std::size_t i = 0; i < c.dims.size(); ++i) {
                if (i) out << ',';
                out << c.dims[i];
            }
            out << '}';
        }
        out << '\n';
    }
    if (!any) out << "no structure sidecars under " << trace_dir << '\n';
    return out.str();
}

}  // namespace structbo
