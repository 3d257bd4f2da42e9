#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "structbo/hessian.hpp"
#include "structbo/mlp.hpp"

namespace structbo {

// Higher-order policy model: immutable generation algorithms (role
// assignment, role interaction, message passing) around four mutable weight
// blocks, all packed into one flat point in [0,1]^D for the optimizer.
struct HomConfig {
    int n_agents = 0;
    int state_dim = 0;
    int action_dim = 0;
    int hidden_layers = 3;
    int hidden_width = 4;
    int rounds = 2;             // message-passing iterations (tau)
    double weight_range = 2.0;  // cube [0,1] maps affinely onto [-w, w]
    double action_bound = 1.0;
    bool allow_self_edges = false;

    // Hidden state must be at least as wide as the action it carries.
    int hidden_state_dim() const { return std::max(action_dim, 4); }
};

struct BlockSpan {
    int offset = 0;
    int length = 0;
};

// Offsets of the four weight blocks inside the flat vector:
//   role:    shared tanh trunk + one linear head per role (affinities)
//   edge:    state-pair -> edge affinity scalar
//   message: (h_i, h_j, i/n, j/n) -> message vector
//   update:  (state, h, message)  -> next hidden state
struct HomLayout {
    HomConfig cfg;

    MlpSpec edge_mlp;
    MlpSpec message_mlp;
    MlpSpec update_mlp;

    BlockSpan role_block;     // trunk followed by n_agents heads
    BlockSpan edge_block;
    BlockSpan message_block;
    BlockSpan update_block;

    int trunk_params = 0;       // leading part of role_block
    int head_params = 0;        // per-role head size
    int total_dim = 0;

    // Structured descriptor (block names, offsets, shapes) so a stored theta
    // can be decoded offline.
    std::string describe() const;
};

HomLayout make_hom_layout(const HomConfig& cfg);

// Decoded view of a flat cube point. pack(unpack(theta)) returns the original
// doubles bit-for-bit: the cube vector is the canonical storage and weights
// are decoded views of it.
struct HomParams {
    const HomLayout* layout = nullptr;
    Vec theta;     // cube coordinates, canonical
    Vec weights;   // decoded, same layout/offsets as theta

    std::span<const double> role_weights() const;
    std::span<const double> edge_weights() const;
    std::span<const double> message_weights() const;
    std::span<const double> update_weights() const;
};

HomParams unpack_params(Vec theta, const HomLayout& layout);
Vec pack_params(const HomParams& params);

double decode_weight(double cube_coord, double weight_range);

struct RoleAssignment {
    std::vector<int> perm;  // perm[i] = agent index taking role i
    double total_affinity = 0.0;
};

// Maximum-total-affinity assignment. Exhaustive with lexicographic
// tie-breaking up to n = 7; the O(n^3) shortest-augmenting-path solver above
// that (exact optimum, tie order unspecified).
RoleAssignment hungarian_assign(const Eigen::MatrixXd& affinity);

struct InteractionGraph {
    // neighbors[i] = roles whose edge affinity from role i is > 0, in
    // ascending role order. Not forced symmetric.
    std::vector<std::vector<int>> neighbors;
};

// affinity(i, l) = affinity of agent l for role i.
Eigen::MatrixXd role_affinities(const HomLayout& layout, std::span<const double> role_weights,
                                const StateBatch& states);

InteractionGraph role_interaction_edges(const HomLayout& layout, std::span<const double> edge_weights,
                                        const StateBatch& permuted_states);

// Synchronous message passing, `rounds` iterations; h_0 = update(s, 0, 0).
// Returns per-role actions: leading action_dim coordinates of the final
// hidden state, clamped to the action box.
std::vector<Vec> mpnn_infer(const HomLayout& layout, const StateBatch& permuted_states,
                            const InteractionGraph& graph, std::span<const double> message_weights,
                            std::span<const double> update_weights, int rounds);

// Full generation pass: assign roles, build the interaction graph, run
// message passing, then map role actions back to agent order.
std::vector<Vec> gen_policy(const HomParams& params, const StateBatch& states);

// Smooth stand-in for gen_policy used by the Hessian surrogate: Sinkhorn soft
// assignment, sigmoid soft edges, no action clamping; returns the sum of all
// action coordinates over all roles.
double relaxed_policy_scalar(const HomLayout& layout, const Vec& theta_cube, const StateBatch& states,
                             const SurrogateHessianConfig& cfg);

// Adapter for surrogate_policy_hessian.
RelaxedPolicyFn make_relaxed_policy(const HomLayout& layout, const SurrogateHessianConfig& cfg);

}  // namespace structbo
