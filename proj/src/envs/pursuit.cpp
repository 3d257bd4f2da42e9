#include "structbo/envs/pursuit.hpp"

#include <algorithm>
#include <cmath>

namespace structbo::envs {

namespace {
constexpr double kHeteroFactors[3] = {1.0, 0.7, 0.5};
}

PursuitWorld::PursuitWorld(PursuitWorldConfig cfg) : cfg_(cfg) {
    require(cfg_.n_predators >= 1, "PursuitWorld: needs at least one predator");
    require(cfg_.epoch_len >= 1, "PursuitWorld: epoch_len must be >= 1");
    require(cfg_.predator_vmax > 0.0 && cfg_.accel > 0.0, "PursuitWorld: bad motion constants");
}

double PursuitWorld::predator_vmax(int i) const {
    if (!cfg_.heterogeneous) return cfg_.predator_vmax;
    return cfg_.predator_vmax * kHeteroFactors[static_cast<std::size_t>(i % 3)];
}

void PursuitWorld::respawn_prey() {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        prey_x_ = rng_.uniform();
        prey_y_ = rng_.uniform();
        bool clear = true;
        for (const Predator& p : predators_) {
            if (std::hypot(prey_x_ - p.px, prey_y_ - p.py) < 0.3) {
                clear = false;
                break;
            }
        }
        if (clear) return;
    }
}

void PursuitWorld::reset(Rng rng) {
    rng_ = rng;
    predators_.assign(static_cast<std::size_t>(cfg_.n_predators), Predator{});
    for (Predator& p : predators_) {
        p.px = rng_.uniform();
        p.py = rng_.uniform();
    }
    respawn_prey();
}

StateBatch PursuitWorld::observe() const {
    StateBatch out;
    out.reserve(predators_.size());
    for (std::size_t i = 0; i < predators_.size(); ++i) {
        const Predator& p = predators_[i];
        const double vmax = predator_vmax(static_cast<int>(i));
        out.push_back({p.px, p.py, p.vx / vmax, p.vy / vmax, prey_x_ - p.px, prey_y_ - p.py,
                       vmax / cfg_.predator_vmax});
    }
    return out;
}

double PursuitWorld::step(const std::vector<Vec>& actions) {
    require(static_cast<int>(actions.size()) == cfg_.n_predators, "PursuitWorld::step: wrong action count");
    double reward = 0.0;

    for (int i = 0; i < cfg_.n_predators; ++i) {
        Predator& p = predators_[static_cast<std::size_t>(i)];
        const Vec& a = actions[static_cast<std::size_t>(i)];
        require(a.size() == 2, "PursuitWorld::step: wrong action length");
        p.vx += cfg_.accel * std::clamp(a[0], -1.0, 1.0);
        p.vy += cfg_.accel * std::clamp(a[1], -1.0, 1.0);
        const double vmax = predator_vmax(i);
        const double speed = std::hypot(p.vx, p.vy);
        if (speed > vmax) {
            p.vx *= vmax / speed;
            p.vy *= vmax / speed;
        }
        p.px = std::clamp(p.px + p.vx, 0.0, 1.0);
        p.py = std::clamp(p.py + p.vy, 0.0, 1.0);
    }

    // Scripted prey: full speed directly away from the nearest predator,
    // reflecting off the arena walls. No inertia, which is what makes it the
    // more agile party.
    double nearest = HUGE_VAL;
    double dir_x = 0.0, dir_y = 0.0;
    for (const Predator& p : predators_) {
        const double dist = std::hypot(prey_x_ - p.px, prey_y_ - p.py);
        if (dist < nearest) {
            nearest = dist;
            dir_x = prey_x_ - p.px;
            dir_y = prey_y_ - p.py;
        }
    }
    const double norm = std::hypot(dir_x, dir_y);
    const double prey_speed = cfg_.prey_speed_factor * cfg_.predator_vmax;
    if (norm > 1e-12) {
        prey_x_ += prey_speed * dir_x / norm;
        prey_y_ += prey_speed * dir_y / norm;
    }
    if (prey_x_ < 0.0) prey_x_ = -prey_x_;
    if (prey_x_ > 1.0) prey_x_ = 2.0 - prey_x_;
    if (prey_y_ < 0.0) prey_y_ = -prey_y_;
    if (prey_y_ > 1.0) prey_y_ = 2.0 - prey_y_;

    for (const Predator& p : predators_) {
        if (std::hypot(prey_x_ - p.px, prey_y_ - p.py) <= cfg_.capture_radius) {
            reward += cfg_.capture_reward;
            respawn_prey();
            break;
        }
    }
    return reward;
}

void PursuitWorld::describe_state(std::ostream& out) const {
    for (std::size_t i = 0; i < predators_.size(); ++i) {
        if (i) out << ',';
        out << predators_[i].px << ',' << predators_[i].py;
    }
    out << ',' << prey_x_ << ',' << prey_y_;
}

}  // namespace structbo::envs
