#pragma once

#include <functional>
#include <memory>
#include <ostream>

#include "structbo/hessian.hpp"
#include "structbo/rng.hpp"

namespace structbo::envs {

using structbo::StateBatch;
using structbo::Vec;

using PolicyFn = std::function<std::vector<Vec>(const StateBatch&)>;

// Single-threaded multi-agent state machine with a shared scalar reward.
// Randomness (initial conditions, respawns) comes from the Rng handed to
// reset, so identical seeds reproduce identical episodes.
class MultiAgentEnv {
public:
    virtual ~MultiAgentEnv() = default;

    virtual int n_agents() const = 0;
    virtual int state_dim() const = 0;
    virtual int action_dim() const = 0;
    virtual int epoch_len() const = 0;

    virtual void reset(Rng rng) = 0;
    virtual StateBatch observe() const = 0;
    // Applies clamped actions, advances one step, returns the step reward.
    virtual double step(const std::vector<Vec>& actions) = 0;

    // A plausible mid-episode state batch for surrogate-Hessian sampling:
    // reset plus a short random-action rollout.
    StateBatch sample_states(Rng& rng);

    // Compact per-agent summary (positions etc.) for episode trace files.
    virtual void describe_state(std::ostream& out) const = 0;
};

struct EpisodeResult {
    double total_reward = 0.0;           // dense sum; equals the emitted sum
    bool non_finite_action_seen = false;
};

class RewardWrapper;

// One epoch from a seed-determined initial state. Non-finite actions are
// replaced by zeros and flagged. When `trace` is set, writes one columnar row
// per step: step; per-agent state summary; actions; reward; emitted reward.
EpisodeResult evaluate_policy(MultiAgentEnv& env, const PolicyFn& policy, std::uint64_t seed,
                              RewardWrapper* wrapper = nullptr, std::ostream* trace = nullptr);

// Mean total reward over `repeats` seed-derived episodes.
double evaluate_policy_mean(MultiAgentEnv& env, const PolicyFn& policy, std::uint64_t seed,
                            int repeats);

}  // namespace structbo::envs
