#include "structbo/envs/drone.hpp"

#include <algorithm>
#include <cmath>

namespace structbo::envs {

DroneWorld::DroneWorld(DroneWorldConfig cfg) : cfg_(cfg) {
    require(cfg_.n_drones >= 1, "DroneWorld: needs at least one drone");
    require(cfg_.epoch_len >= 1, "DroneWorld: epoch_len must be >= 1");
    require(cfg_.vmax > 0.0 && cfg_.accel > 0.0, "DroneWorld: bad motion constants");
}

std::pair<double, double> DroneWorld::spawn_point() {
    return {rng_.uniform(), rng_.uniform()};
}

void DroneWorld::reset(Rng rng) {
    rng_ = rng;
    drones_.assign(static_cast<std::size_t>(cfg_.n_drones), Drone{});
    // Spawn drones separated by at least two collision radii so an all-zero
    // policy sits at exactly zero reward.
    for (int i = 0; i < cfg_.n_drones; ++i) {
        Drone& d = drones_[static_cast<std::size_t>(i)];
        for (int attempt = 0; attempt < 1000; ++attempt) {
            d.px = rng_.uniform();
            d.py = rng_.uniform();
            bool clear = true;
            for (int j = 0; j < i; ++j) {
                const Drone& o = drones_[static_cast<std::size_t>(j)];
                const double dist = std::hypot(d.px - o.px, d.py - o.py);
                if (dist < 2.0 * cfg_.collision_radius) {
                    clear = false;
                    break;
                }
            }
            if (clear) break;
        }
        d.origin_x = d.px;
        d.origin_y = d.py;
    }
    points_.clear();
    for (int i = 0; i < cfg_.n_drones; ++i) points_.push_back(spawn_point());
}

StateBatch DroneWorld::observe() const {
    StateBatch out;
    out.reserve(drones_.size());
    for (const Drone& d : drones_) {
        double best_dx = 0.0, best_dy = 0.0;
        double best = HUGE_VAL;
        for (const auto& [px, py] : points_) {
            const double dist = std::hypot(px - d.px, py - d.py);
            if (dist < best) {
                best = dist;
                best_dx = px - d.px;
                best_dy = py - d.py;
            }
        }
        out.push_back({d.px, d.py, d.vx / cfg_.vmax, d.vy / cfg_.vmax, d.fuel, best_dx, best_dy});
    }
    return out;
}

double DroneWorld::step(const std::vector<Vec>& actions) {
    require(static_cast<int>(actions.size()) == cfg_.n_drones, "DroneWorld::step: wrong action count");
    double reward = 0.0;

    // Integrate motion.
    for (int i = 0; i < cfg_.n_drones; ++i) {
        Drone& d = drones_[static_cast<std::size_t>(i)];
        if (d.inert) continue;
        const Vec& a = actions[static_cast<std::size_t>(i)];
        require(a.size() == 2, "DroneWorld::step: wrong action length");
        d.vx += cfg_.accel * std::clamp(a[0], -1.0, 1.0);
        d.vy += cfg_.accel * std::clamp(a[1], -1.0, 1.0);
        const double speed = std::hypot(d.vx, d.vy);
        if (speed > cfg_.vmax) {
            d.vx *= cfg_.vmax / speed;
            d.vy *= cfg_.vmax / speed;
        }
        d.px += d.vx;
        d.py += d.vy;
        if (d.px < 0.0) { d.px = 0.0; d.vx = 0.0; }
        if (d.px > 1.0) { d.px = 1.0; d.vx = 0.0; }
        if (d.py < 0.0) { d.py = 0.0; d.vy = 0.0; }
        if (d.py > 1.0) { d.py = 1.0; d.vy = 0.0; }
    }

    // Collisions stop both parties for the step.
    std::vector<bool> collided(static_cast<std::size_t>(cfg_.n_drones), false);
    for (int i = 0; i < cfg_.n_drones; ++i) {
        for (int j = i + 1; j < cfg_.n_drones; ++j) {
            const Drone& a = drones_[static_cast<std::size_t>(i)];
            const Drone& b = drones_[static_cast<std::size_t>(j)];
            if (std::hypot(a.px - b.px, a.py - b.py) <= cfg_.collision_radius) {
                collided[static_cast<std::size_t>(i)] = true;
                collided[static_cast<std::size_t>(j)] = true;
            }
        }
    }
    for (int i = 0; i < cfg_.n_drones; ++i) {
        if (!collided[static_cast<std::size_t>(i)]) continue;
        Drone& d = drones_[static_cast<std::size_t>(i)];
        reward += cfg_.collision_penalty;
        d.vx = 0.0;
        d.vy = 0.0;
    }

    // Deliveries: reaching a point pays quadratically in the trip distance,
    // refuels, and respawns the point. One delivery per drone per step.
    for (int i = 0; i < cfg_.n_drones; ++i) {
        Drone& d = drones_[static_cast<std::size_t>(i)];
        if (d.inert) continue;
        for (std::size_t p = 0; p < points_.size(); ++p) {
            const double dist = std::hypot(points_[p].first - d.px, points_[p].second - d.py);
            if (dist > cfg_.delivery_radius) continue;
            const double trip = std::hypot(points_[p].first - d.origin_x,
                                           points_[p].second - d.origin_y);
            reward += cfg_.delivery_base * trip * trip;
            d.fuel = 1.0;
            d.origin_x = points_[p].first;
            d.origin_y = points_[p].second;
            points_[p] = spawn_point();
            break;
        }
    }

    // Fuel drain grows sharply with speed; an empty tank parks the drone.
    for (int i = 0; i < cfg_.n_drones; ++i) {
        Drone& d = drones_[static_cast<std::size_t>(i)];
        if (d.inert) continue;
        const double rel = std::hypot(d.vx, d.vy) / cfg_.vmax;
        d.fuel -= cfg_.fuel_drain_base * (1.0 + cfg_.fuel_drain_speed_coeff * rel * rel);
        if (d.fuel <= 0.0) {
            d.fuel = 0.0;
            d.inert = true;
            d.vx = 0.0;
            d.vy = 0.0;
            reward += cfg_.fuel_out_penalty;
        }
    }
    return reward;
}

void DroneWorld::describe_state(std::ostream& out) const {
    for (std::size_t i = 0; i < drones_.size(); ++i) {
        const Drone& d = drones_[i];
        if (i) out << ',';
        out << d.px << ',' << d.py;
    }
}

}  // namespace structbo::envs
