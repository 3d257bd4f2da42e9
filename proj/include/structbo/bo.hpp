#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "structbo/acquisition.hpp"
#include "structbo/beta.hpp"
#include "structbo/gp.hpp"
#include "structbo/structure.hpp"

namespace structbo {

using ObjectiveFn = std::function<double(const Vec&)>;

enum class QueryPhase { Structure, Bayes };

struct TraceRow {
    QueryPhase phase = QueryPhase::Bayes;
    long iteration = 0;
    Vec theta;
    double y = std::numeric_limits<double>::quiet_NaN();            // observed value
    double best_so_far = std::numeric_limits<double>::quiet_NaN();  // max observed y
    double cum_regret = std::numeric_limits<double>::quiet_NaN();   // when optimum known
};

struct RunTrace {
    int dims = 0;
    std::vector<TraceRow> rows;

    // Structure phase results; meaningful when has_structure.
    bool has_structure = false;
    DependencyGraph graph;
    std::vector<Clique> cliques;
    Eigen::MatrixXd hessian_sums;
    double threshold = std::numeric_limits<double>::quiet_NaN();
    double sigma_n_estimate = std::numeric_limits<double>::quiet_NaN();
    int t0 = 0;
    int c1 = 0;

    bool aborted = false;
    std::string abort_reason;

    long objective_queries() const;
    double final_best() const;        // NaN if no queries landed
    double final_cum_regret() const;  // NaN if regret unavailable
};

struct BoOptions {
    KernelSpec base_kernel;  // defaults: Matern-5/2, lengthscale 0.2, variance 1
    BetaSchedule beta;
    AcquireConfig acquire;
    int batch_size = 1;
    double noise_var = 1e-6;  // GP observation noise, in raw objective units
    double jitter = GpModel::kDefaultJitter;
    // Constant-liar batching rejects near-duplicate batch members and
    // re-draws uniformly instead.
    double dedup_radius = 1e-6;
    // Optional lengthscale grid search by log marginal likelihood, applied
    // every 10 iterations. Off by default so runs stay reproducible across
    // config tweaks.
    bool lengthscale_grid_search = false;
    std::vector<double> lengthscale_grid = {0.1, 0.2, 0.4, 0.8};

    // Regret accounting, available when the optimum is known.
    std::optional<double> optimum;
    ObjectiveFn true_value;  // noiseless objective; required for regret rows
};

struct DssOptions {
    StructureSearchConfig structure;
    BoOptions bo;
    // When provided, the structure phase is skipped entirely and the run is
    // equivalent to plain GP-UCB with this decomposition.
    std::optional<std::vector<Clique>> given_decomposition;
};

// Kernel used by the optimizer for a clique decomposition: per-clique
// variance is split as base.variance / M so the summed prior keeps
// k(theta, theta) = base.variance <= 1, the scale the UCB rule assumes.
AdditiveKernel bo_kernel(const std::vector<Clique>& cliques, KernelSpec base);

// Plain GP-UCB with an arbitrary additive kernel; iterations 1..total_queries.
RunTrace run_gp_ucb(const ObjectiveFn& objective, int dims, const AdditiveKernel& kernel,
                    const BoOptions& opts, int total_queries, std::uint64_t seed);

// Two-phase run: sample Hessians at T0 sites (C1 repeats each), threshold the
// summed entries into a dependency graph, take its maximal cliques as the
// additive kernel, then run GP-UCB for iterations T0+1..T. Cumulative regret
// counts each structure site with multiplicity C1.
RunTrace run_dss_gp_ucb(const ObjectiveFn& objective, const HessianFn& hessian, int dims,
                        const DssOptions& opts, int total_iterations, std::uint64_t seed);

// Uniform random search baseline with the same trace schema.
RunTrace run_random_search(const ObjectiveFn& objective, int dims, const BoOptions& opts,
                           int total_queries, std::uint64_t seed);

// Stream tags; fixed so that runs sharing a seed are comparable piecewise.
inline constexpr std::uint64_t kStructureStream = 1;
inline constexpr std::uint64_t kBayesStream = 2;
inline constexpr std::uint64_t kRandomStream = 3;
inline constexpr std::uint64_t kEpisodeStream = 4;
inline constexpr std::uint64_t kNoiseStream = 5;
inline constexpr std::uint64_t kStateSampleStream = 6;

}  // namespace structbo
