#pragma once

#include "structbo/gp.hpp"
#include "structbo/rng.hpp"

namespace structbo {

// Inner optimizer for the UCB acquisition: uniform multi-start over the unit
// cube, then per-coordinate golden-section line probes on the leaders. Makes
// no global-optimality claim; the contract is only that the returned point
// scores at least as high as every candidate it probed.
struct AcquireConfig {
    int starts = 256;
    int top_k = 8;
    int refine_rounds = 50;  // one coordinate line probe per round, cycling
};

struct AcquireResult {
    Vec point;
    double value = 0.0;  // mean + sqrt(beta) * sd at the returned point
};

AcquireResult ucb_acquire(const GpModel& model, double beta, int dims, const AcquireConfig& cfg,
                          Rng& rng);

double ucb_value(const GpModel& model, double beta, const Vec& theta);

}  // namespace structbo
