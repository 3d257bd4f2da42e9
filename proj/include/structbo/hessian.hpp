#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "structbo/common.hpp"

namespace structbo {

using ScalarFn = std::function<double(const Vec&)>;

struct FdConfig {
    double step = 1e-3;  // central-difference step, in unit-cube units
};

// Central finite-difference Hessian on [0,1]^D. Probe points are clamped to
// the domain; entries fall back to one-sided / shifted stencils within one
// step of the boundary. Output is symmetrized as (H + H^T) / 2.
Eigen::MatrixXd fd_hessian(const ScalarFn& f, const Vec& theta, const FdConfig& cfg);

// Sinkhorn-Knopp relaxation: exponentiate affinity / temperature, then
// alternate row and column normalization `iters` times.
Eigen::MatrixXd sinkhorn_relax(const Eigen::MatrixXd& affinity, int iters, double temperature);

struct SurrogateHessianConfig {
    int n_states = 16;                   // state batches averaged per query
    int sinkhorn_iters = 20;
    double sinkhorn_temperature = 0.1;
    double edge_sigmoid_sharpness = 10.0;
    FdConfig fd;
    bool absolute_aggregation = false;   // average |H| per state instead of signed H
};

// One batch of per-agent states.
using StateBatch = std::vector<Vec>;

// A smooth scalarization of a relaxed policy: theta and a state batch in, one
// real number out. Discrete policy stages must already be relaxed (soft
// assignment, soft edges) so finite differences see a smooth function.
using RelaxedPolicyFn = std::function<double(const Vec&, const StateBatch&)>;

// The policy Hessian surrogate: finite-difference Hessians of the relaxed
// scalarization, averaged over the supplied state batches.
Eigen::MatrixXd surrogate_policy_hessian(const Vec& theta, const RelaxedPolicyFn& policy,
                                         const std::vector<StateBatch>& states,
                                         const SurrogateHessianConfig& cfg);

}  // namespace structbo
