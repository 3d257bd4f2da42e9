#pragma once

#include <deque>
#include <vector>

#include "structbo/common.hpp"

namespace structbo::envs {

enum class RewardMode { Dense, Sparse, Delayed };

// Reward feedback schedules. Sparse emits the running sum every S steps;
// Delayed emits each reward `lag` steps late. Both flush whatever is still
// withheld into the final step, so episode totals always match the dense sum.
class RewardWrapper {
public:
    static RewardWrapper dense();
    static RewardWrapper sparse(int every);
    static RewardWrapper delayed(int lag);

    RewardMode mode() const { return mode_; }
    void reset();
    double push(double reward, bool episode_end);

private:
    RewardMode mode_ = RewardMode::Dense;
    int param_ = 0;
    long step_ = 0;
    double pending_ = 0.0;
    std::deque<double> buffer_;
};

// Whole-stream form of the wrapper; emissions[i] is what the wrapper yields
// at step i+1, with the final entry carrying the flush.
std::vector<double> wrap_rewards(const std::vector<double>& dense, RewardMode mode, int param);

}  // namespace structbo::envs
