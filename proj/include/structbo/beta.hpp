#pragma once

#include "structbo/common.hpp"

namespace structbo {

// Exploration coefficient schedule for the UCB rule.
//
// Practical mode: beta_t = 2 log(D t^2 pi^2 / (6 delta)). Theoretical mode is
// the sparse-structure schedule
//   beta_t = 2 log(t~^2 2 pi^2 / (3 delta^2))
//          + 2 D log(t~^2 D b r sqrt(log(4 D a / delta)))
// with t~ = t - structure_queries clamped to >= 1. Its constants a, b, r
// describe gradient tail bounds of the unknown objective, so Practical is the
// default for black boxes.
struct BetaSchedule {
    enum class Mode { Practical, Theoretical };

    Mode mode = Mode::Practical;
    double delta = 0.1;
    // Theoretical-mode constants.
    double a = 1.0;
    double b = 1.0;
    double r = 1.0;
    long structure_queries = 0;  // T0 * C1, subtracted from t in Theoretical mode

    static BetaSchedule practical(double delta = 0.1);
    static BetaSchedule theoretical(double delta, double a, double b, double r, long structure_queries);
};

double beta_value(const BetaSchedule& schedule, long t, int dims);

}  // namespace structbo
