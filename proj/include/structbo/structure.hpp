#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "structbo/graph.hpp"
#include "structbo/rng.hpp"

namespace structbo {

using HessianFn = std::function<Eigen::MatrixXd(const Vec&)>;

struct StructureSearchConfig {
    // Sites and repeats; unset means the practical default max(8, 2D).
    std::optional<int> t0;
    std::optional<int> c1;
    // Detection threshold on |sum of sampled Hessian entries|; unset means
    // the concentration-based choice T0 * sigma_n * sqrt(2 log(2 D^2 / delta1)).
    std::optional<double> threshold;
    int edge_cap = 1500;
    double delta1 = 0.05;
    double delta2 = 0.05;
    // Hessian noise; unset means pooled within-site estimation from repeats.
    std::optional<double> sigma_n;
    // When both are set, T0 = C1 follow the high-probability recovery bound
    // instead of the practical default. The bound needs sigma_n as well.
    std::optional<double> p_h;
    std::optional<double> sigma_h2;

    int resolve_t0(int dims) const;
    int resolve_c1(int dims) const;
};

// Recovery-bound sample count: 16 D^2 / (p_h delta1^2) log(2 D^2 / delta1)
// sigma_n^2 / sigma_h^2 + D^2 / (2 delta2). Astronomical for practical D,
// which is why the practical default exists.
double theoretical_sample_bound(int dims, double p_h, double delta1, double delta2, double sigma_n,
                                double sigma_h2);

struct HessianAccumulator {
    int dims = 0;
    Eigen::MatrixXd sums;          // sum of all sampled Hessians
    long query_count = 0;
    int t0 = 0;                    // sites actually sampled
    int c1 = 0;                    // repeats per site
    std::vector<Vec> sites;        // for regret accounting
    double noise_ss = 0.0;         // pooled within-site squared deviations
    long noise_dof = 0;

    // Pooled within-site sample standard deviation of the repeats. Requires
    // c1 >= 2; repeats exist precisely to expose the query noise.
    double estimated_sigma_n() const;
};

HessianAccumulator sample_hessians(const HessianFn& oracle, int dims,
                                   const StructureSearchConfig& cfg, Rng& rng);

double detection_threshold(const HessianAccumulator& acc, const StructureSearchConfig& cfg);

// Edge (a, b) iff |sums(a, b)| is strictly above the threshold; diagonal
// entries are ignored. If more than edge_cap edges qualify, the largest by
// |sums| are kept (ties broken by (a, b) order).
DependencyGraph detect_edges(const HessianAccumulator& acc, const StructureSearchConfig& cfg);

}  // namespace structbo
