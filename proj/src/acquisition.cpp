#include "structbo/acquisition.hpp"

#include <algorithm>
#include <cmath>

namespace structbo {

namespace {

// Ties resolve to the earliest probe so the result is a deterministic
// function of the RNG stream.
struct Best {
    Vec point;
    double value = -HUGE_VAL;

    void offer(const Vec& p, double v) {
        if (v > value) {
            value = v;
            point = p;
        }
    }
};

constexpr double kGolden = 0.6180339887498949;

}  // namespace

double ucb_value(const GpModel& model, double beta, const Vec& theta) {
    const Posterior p = model.posterior(theta);
    return p.mean + std::sqrt(beta) * std::sqrt(p.variance);
}

AcquireResult ucb_acquire(const GpModel& model, double beta, int dims, const AcquireConfig& cfg,
                          Rng& rng) {
    require(beta >= 0.0, "ucb_acquire: beta must be non-negative");
    require(dims >= 1, "ucb_acquire: dims must be >= 1");
    require(cfg.starts >= 1, "ucb_acquire: needs at least one start");

    std::vector<Vec> starts(static_cast<std::size_t>(cfg.starts));
    std::vector<double> values(static_cast<std::size_t>(cfg.starts));
    Best best;
    for (int s = 0; s < cfg.starts; ++s) {
        Vec& p = starts[static_cast<std::size_t>(s)];
        p.resize(static_cast<std::size_t>(dims));
        for (double& c : p) c = rng.uniform();
        values[static_cast<std::size_t>(s)] = ucb_value(model, beta, p);
        best.offer(p, values[static_cast<std::size_t>(s)]);
    }

    // Leaders by (value desc, start index asc).
    std::vector<int> order(static_cast<std::size_t>(cfg.starts));
    for (int i = 0; i < cfg.starts; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
    });
    const int keep = std::min(cfg.top_k, cfg.starts);

    for (int rank = 0; rank < keep; ++rank) {
        const std::size_t idx = static_cast<std::size_t>(order[static_cast<std::size_t>(rank)]);
        Vec point = starts[idx];
        double value = values[idx];
        std::vector<double> lo(static_cast<std::size_t>(dims), 0.0);
        std::vector<double> hi(static_cast<std::size_t>(dims), 1.0);
        for (int round = 0; round < cfg.refine_rounds; ++round) {
            const std::size_t c = static_cast<std::size_t>(round % dims);
            const double span = hi[c] - lo[c];
            const double x1 = hi[c] - kGolden * span;
            const double x2 = lo[c] + kGolden * span;
            Vec probe = point;
            probe[c] = x1;
            const double v1 = ucb_value(model, beta, probe);
            best.offer(probe, v1);
            probe[c] = x2;
            const double v2 = ucb_value(model, beta, probe);
            best.offer(probe, v2);
            if (v1 >= v2)
                hi[c] = x2;
            else
                lo[c] = x1;
            if (v1 > value) {
                value = v1;
                point[c] = x1;
            }
            if (v2 > value) {
                value = v2;
                point[c] = x2;
            }
        }
    }

    return {best.point, best.value};
}

}  // namespace structbo
