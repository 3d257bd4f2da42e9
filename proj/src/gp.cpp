#include "structbo/gp.hpp"

#include <cmath>

namespace structbo {

GpModel GpModel::fit(AdditiveKernel kernel, std::vector<Vec> inputs, std::vector<double> observations,
                     double noise_var, double jitter) {
    require(inputs.size() == observations.size(), "GpModel::fit: inputs/observations length mismatch");
    require(noise_var >= 0.0, "GpModel::fit: negative noise variance");

    GpModel m;
    m.kernel_ = std::move(kernel);
    m.inputs_ = std::move(inputs);
    m.noise_var_ = noise_var;
    m.fitted_ = true;

    const int n = static_cast<int>(m.inputs_.size());
    m.observations_ = Eigen::Map<const Eigen::VectorXd>(observations.data(), n);
    if (n == 0) return m;

    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = additive_eval(m.kernel_, m.inputs_[static_cast<std::size_t>(i)],
                                           m.inputs_[static_cast<std::size_t>(j)]);
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }

    double jit = jitter;
    while (true) {
        Eigen::MatrixXd k = gram;
        k.diagonal().array() += noise_var + jit;
        Eigen::LLT<Eigen::MatrixXd> llt(k);
        if (llt.info() == Eigen::Success) {
            m.chol_ = llt.matrixL();
            m.alpha_ = llt.solve(m.observations_);
            m.jitter_used_ = jit;
            return m;
        }
        if (jit > 1e-2) throw NumericalError("GpModel::fit: Cholesky failed even with large jitter");
        jit *= 100.0;
    }
}

Posterior GpModel::posterior(const Vec& theta) const {
    require(fitted_, "GpModel::posterior: model not fitted");
    const double prior_var = kernel_.self_variance();
    const int n = size();
    if (n == 0) return {0.0, prior_var};

    Eigen::VectorXd k(n);
    for (int i = 0; i < n; ++i)
        k(i) = additive_eval(kernel_, inputs_[static_cast<std::size_t>(i)], theta);

    Posterior p;
    p.mean = k.dot(alpha_);
    const Eigen::VectorXd w = chol_.triangularView<Eigen::Lower>().solve(k);
    p.variance = std::max(0.0, prior_var - w.squaredNorm());
    return p;
}

double GpModel::log_marginal_likelihood() const {
    require(fitted_, "GpModel::log_marginal_likelihood: model not fitted");
    const int n = size();
    if (n == 0) return 0.0;
    double log_det_half = 0.0;
    for (int i = 0; i < n; ++i) log_det_half += std::log(chol_(i, i));
    return -0.5 * observations_.dot(alpha_) - log_det_half - 0.5 * n * std::log(2.0 * M_PI);
}

KernelSpec select_lengthscale(const AdditiveKernel& kernel, const std::vector<Vec>& inputs,
                              const std::vector<double>& observations, double noise_var,
                              const std::vector<double>& grid) {
    require(!grid.empty(), "select_lengthscale: empty grid");
    KernelSpec best = kernel.base;
    double best_lml = -HUGE_VAL;
    for (double ell : grid) {
        AdditiveKernel candidate = kernel;
        candidate.base.lengthscale = ell;
        const GpModel m = GpModel::fit(candidate, inputs, observations, noise_var);
        const double lml = m.log_marginal_likelihood();
        if (lml > best_lml) {
            best_lml = lml;
            best = candidate.base;
        }
    }
    return best;
}

}  // namespace structbo
