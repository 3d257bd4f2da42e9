#pragma once

#include "structbo/envs/env.hpp"

namespace structbo::envs {

// Delivery task on the unit square. Completing a delivery pays quadratically
// in the trip distance and refills the drone's tank; collisions and running
// dry cost a little and deliveries are rare, so the reward signal is sparse.
// The constants below are this artifact's declared defaults, not a
// reproduction of any published setup.
struct DroneWorldConfig {
    int n_drones = 3;
    int epoch_len = 150;
    double collision_radius = 0.05;
    double delivery_radius = 0.1;
    double delivery_base = 10.0;
    double collision_penalty = -0.1;
    double fuel_out_penalty = -0.1;
    double fuel_drain_base = 0.002;       // per step at rest
    double fuel_drain_speed_coeff = 4.0;  // times (speed / vmax)^2
    double accel = 0.01;                  // action box [-1,1]^2 scales this
    double vmax = 0.06;
};

class DroneWorld final : public MultiAgentEnv {
public:
    explicit DroneWorld(DroneWorldConfig cfg = {});

    int n_agents() const override { return cfg_.n_drones; }
    int state_dim() const override { return 7; }  // pos, vel, fuel, nearest delivery offset
    int action_dim() const override { return 2; }
    int epoch_len() const override { return cfg_.epoch_len; }

    void reset(Rng rng) override;
    StateBatch observe() const override;
    double step(const std::vector<Vec>& actions) override;
    void describe_state(std::ostream& out) const override;

    const DroneWorldConfig& config() const { return cfg_; }

    struct Drone {
        double px = 0.0, py = 0.0;
        double vx = 0.0, vy = 0.0;
        double fuel = 1.0;
        double origin_x = 0.0, origin_y = 0.0;  // start of the current trip
        bool inert = false;
    };
    const std::vector<Drone>& drones() const { return drones_; }
    const std::vector<std::pair<double, double>>& delivery_points() const { return points_; }

private:
    DroneWorldConfig cfg_;
    std::vector<Drone> drones_;
    std::vector<std::pair<double, double>> points_;
    Rng rng_{0};

    std::pair<double, double> spawn_point();
};

}  // namespace structbo::envs
