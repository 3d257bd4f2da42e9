#include "structbo/beta.hpp"

#include <algorithm>
#include <cmath>

namespace structbo {

BetaSchedule BetaSchedule::practical(double delta) {
    BetaSchedule s;
    s.mode = Mode::Practical;
    s.delta = delta;
    return s;
}

BetaSchedule BetaSchedule::theoretical(double delta, double a, double b, double r,
                                       long structure_queries) {
    BetaSchedule s;
    s.mode = Mode::Theoretical;
    s.delta = delta;
    s.a = a;
    s.b = b;
    s.r = r;
    s.structure_queries = structure_queries;
    return s;
}

double beta_value(const BetaSchedule& s, long t, int dims) {
    require(t >= 1, "beta_value: t must be >= 1");
    require(dims >= 1, "beta_value: dims must be >= 1");
    require(s.delta > 0.0 && s.delta <= 1.0, "beta_value: delta must be in (0, 1]");
    const double d = static_cast<double>(dims);
    const double td = static_cast<double>(t);
    switch (s.mode) {
        case BetaSchedule::Mode::Practical:
            return 2.0 * std::log(d * td * td * M_PI * M_PI / (6.0 * s.delta));
        case BetaSchedule::Mode::Theoretical: {
            const double tt = std::max<double>(1.0, td - static_cast<double>(s.structure_queries));
            const double first = 2.0 * std::log(tt * tt * 2.0 * M_PI * M_PI / (3.0 * s.delta * s.delta));
            const double inner = std::sqrt(std::log(4.0 * d * s.a / s.delta));
            const double second = 2.0 * d * std::log(tt * tt * d * s.b * s.r * inner);
            return first + second;
        }
    }
    throw ContractViolation("beta_value: unknown mode");
}

}  // namespace structbo
