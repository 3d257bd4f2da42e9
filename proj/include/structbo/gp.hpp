#pragma once

#include <Eigen/Dense>
#include <vector>

#include "structbo/common.hpp"
#include "structbo/kernel.hpp"

namespace structbo {

struct Posterior {
    double mean = 0.0;
    double variance = 0.0;
};

// Immutable after fitting; refitting returns a new model, so concurrent reads
// (posterior queries, acquisition probes) need no locking.
class GpModel {
public:
    GpModel() = default;

    static GpModel fit(AdditiveKernel kernel, std::vector<Vec> inputs, std::vector<double> observations,
                       double noise_var, double jitter = kDefaultJitter);

    Posterior posterior(const Vec& theta) const;

    double log_marginal_likelihood() const;

    bool fitted() const { return fitted_; }
    int size() const { return static_cast<int>(inputs_.size()); }
    const AdditiveKernel& kernel() const { return kernel_; }
    const std::vector<Vec>& inputs() const { return inputs_; }
    const Eigen::VectorXd& observations() const { return observations_; }
    double noise_var() const { return noise_var_; }
    double jitter_used() const { return jitter_used_; }
    const Eigen::MatrixXd& chol() const { return chol_; }

    // Deterministic jitter policy: start at 1e-10 and escalate x100 on
    // factorization failure before giving up.
    static constexpr double kDefaultJitter = 1e-10;

private:
    AdditiveKernel kernel_;
    std::vector<Vec> inputs_;
    Eigen::VectorXd observations_;
    double noise_var_ = 0.0;
    double jitter_used_ = 0.0;
    Eigen::MatrixXd chol_;   // lower factor of K + (noise_var + jitter) I
    Eigen::VectorXd alpha_;  // (K + noise_var I)^{-1} y
    bool fitted_ = false;
};

// Log marginal likelihood grid search over a fixed lengthscale ladder;
// returns the best-scoring spec (ties keep the earlier grid entry).
KernelSpec select_lengthscale(const AdditiveKernel& kernel, const std::vector<Vec>& inputs,
                              const std::vector<double>& observations, double noise_var,
                              const std::vector<double>& grid);

}  // namespace structbo
