#include "structbo/envs/rewards.hpp"

namespace structbo::envs {

RewardWrapper RewardWrapper::dense() {
    return RewardWrapper{};
}

RewardWrapper RewardWrapper::sparse(int every) {
    require(every >= 1, "RewardWrapper::sparse: period must be >= 1");
    RewardWrapper w;
    w.mode_ = RewardMode::Sparse;
    w.param_ = every;
    return w;
}

RewardWrapper RewardWrapper::delayed(int lag) {
    require(lag >= 0, "RewardWrapper::delayed: lag must be >= 0");
    RewardWrapper w;
    w.mode_ = RewardMode::Delayed;
    w.param_ = lag;
    return w;
}

void RewardWrapper::reset() {
    step_ = 0;
    pending_ = 0.0;
    buffer_.clear();
}

double RewardWrapper::push(double reward, bool episode_end) {
    ++step_;
    switch (mode_) {
        case RewardMode::Dense:
            return reward;
        case RewardMode::Sparse: {
            pending_ += reward;
            double out = 0.0;
            if (step_ % param_ == 0 || episode_end) {
                out = pending_;
                pending_ = 0.0;
            }
            return out;
        }
        case RewardMode::Delayed: {
            buffer_.push_back(reward);
            double out = 0.0;
            if (static_cast<long>(buffer_.size()) > param_) {
                out = buffer_.front();
                buffer_.pop_front();
            }
            if (episode_end) {
                for (double r : buffer_) out += r;
                buffer_.clear();
            }
            return out;
        }
    }
    return reward;
}

std::vector<double> wrap_rewards(const std::vector<double>& dense, RewardMode mode, int param) {
    RewardWrapper w;
    switch (mode) {
        case RewardMode::Dense:
            w = RewardWrapper::dense();
            break;
        case RewardMode::Sparse:
            w = RewardWrapper::sparse(param);
            break;
        case RewardMode::Delayed:
            w = RewardWrapper::delayed(param);
            break;
    }
    std::vector<double> out;
    out.reserve(dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i)
        out.push_back(w.push(dense[i], i + 1 == dense.size()));
    return out;
}

}  // namespace structbo::envs
