#include "structbo/envs/env.hpp"

#include <cmath>

#include "structbo/envs/rewards.hpp"

namespace structbo::envs {

StateBatch MultiAgentEnv::sample_states(Rng& rng) {
    reset(Rng(rng.next_u64()));
    const int burn = rng.uniform_int(std::max(1, epoch_len() / 2));
    std::vector<Vec> actions(static_cast<std::size_t>(n_agents()),
                             Vec(static_cast<std::size_t>(action_dim()), 0.0));
    for (int s = 0; s < burn; ++s) {
        for (auto& a : actions)
            for (double& c : a) c = rng.uniform(-1.0, 1.0);
        step(actions);
    }
    return observe();
}

EpisodeResult evaluate_policy(MultiAgentEnv& env, const PolicyFn& policy, std::uint64_t seed,
                              RewardWrapper* wrapper, std::ostream* trace) {
    env.reset(Rng(seed));
    if (wrapper) wrapper->reset();
    EpisodeResult result;
    const int steps = env.epoch_len();
    for (int s = 0; s < steps; ++s) {
        const StateBatch states = env.observe();
        std::vector<Vec> actions = policy(states);
        require(static_cast<int>(actions.size()) == env.n_agents(),
                "evaluate_policy: policy returned wrong agent count");
        for (auto& a : actions) {
            for (double& c : a) {
                if (!std::isfinite(c)) {
                    c = 0.0;
                    result.non_finite_action_seen = true;
                }
            }
        }
        const double r = env.step(actions);
        const bool last = (s + 1 == steps);
        const double emitted = wrapper ? wrapper->push(r, last) : r;
        result.total_reward += r;
        if (trace) {
            *trace << s + 1 << ';';
            env.describe_state(*trace);
            *trace << ';';
            for (std::size_t i = 0; i < actions.size(); ++i) {
                if (i) *trace << ',';
                for (std::size_t c = 0; c < actions[i].size(); ++c) {
                    if (c) *trace << ',';
                    *trace << actions[i][c];
                }
            }
            *trace << ';' << r << ';' << emitted << '\n';
        }
    }
    return result;
}

double evaluate_policy_mean(MultiAgentEnv& env, const PolicyFn& policy, std::uint64_t seed,
                            int repeats) {
    require(repeats >= 1, "evaluate_policy_mean: repeats must be >= 1");
    double total = 0.0;
    for (int r = 0; r < repeats; ++r)
        total += evaluate_policy(env, policy, seed + static_cast<std::uint64_t>(r)).total_reward;
    return total / static_cast<double>(repeats);
}

}  // namespace structbo::envs
