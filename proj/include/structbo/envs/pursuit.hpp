#pragma once

#include "structbo/envs/env.hpp"

namespace structbo::envs {

// Predators chase one scripted prey on the unit square. The prey is faster
// and turns instantly (flees the nearest predator, reflecting off walls), so
// captures require cornering it cooperatively. The heterogeneous variant
// cycles per-predator top speeds.
struct PursuitWorldConfig {
    int n_predators = 3;
    int epoch_len = 80;
    double capture_radius = 0.1;
    double capture_reward = 5.0;
    double predator_vmax = 0.05;
    double prey_speed_factor = 1.3;  // times predator_vmax
    double accel = 0.02;
    bool heterogeneous = false;      // speed factors cycle 1.0, 0.7, 0.5
};

class PursuitWorld final : public MultiAgentEnv {
public:
    explicit PursuitWorld(PursuitWorldConfig cfg = {});

    int n_agents() const override { return cfg_.n_predators; }
    int state_dim() const override { return 7; }  // pos, vel, prey offset, own speed
    int action_dim() const override { return 2; }
    int epoch_len() const override { return cfg_.epoch_len; }

    void reset(Rng rng) override;
    StateBatch observe() const override;
    double step(const std::vector<Vec>& actions) override;
    void describe_state(std::ostream& out) const override;

    const PursuitWorldConfig& config() const { return cfg_; }
    double predator_vmax(int i) const;
    std::pair<double, double> prey() const { return {prey_x_, prey_y_}; }

private:
    PursuitWorldConfig cfg_;
    struct Predator {
        double px = 0.0, py = 0.0;
        double vx = 0.0, vy = 0.0;
    };
    std::vector<Predator> predators_;
    double prey_x_ = 0.5, prey_y_ = 0.5;
    Rng rng_{0};

    void respawn_prey();
};

}  // namespace structbo::envs
