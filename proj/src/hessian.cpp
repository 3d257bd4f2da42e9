#include "structbo/hessian.hpp"

#include <algorithm>
#include <cmath>

namespace structbo {

namespace {

double eval_checked(const ScalarFn& f, const Vec& x, int i, int j) {
    const double v = f(x);
    if (!std::isfinite(v))
        throw PoisonedEntry("fd_hessian: objective returned a non-finite value", i, j);
    return v;
}

}  // namespace

Eigen::MatrixXd fd_hessian(const ScalarFn& f, const Vec& theta, const FdConfig& cfg) {
    require(cfg.step > 0.0 && cfg.step < 0.1, "fd_hessian: step must be in (0, 0.1)");
    const int dims = static_cast<int>(theta.size());
    require(dims >= 1, "fd_hessian: empty point");
    const double h = cfg.step;

    // Second differences need room for +/- h in each touched coordinate, so
    // shift the stencil centre inside the domain near a wall. The entry is
    // then a one-sided estimate of the Hessian at a point within h of theta.
    Vec centre = theta;
    for (double& c : centre) c = std::clamp(c, h, 1.0 - h);

    Eigen::MatrixXd hess(dims, dims);
    Vec x = centre;
    const double f0 = eval_checked(f, x, -1, -1);

    for (int i = 0; i < dims; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        x[si] = centre[si] + h;
        const double fp = eval_checked(f, x, i, i);
        x[si] = centre[si] - h;
        const double fm = eval_checked(f, x, i, i);
        x[si] = centre[si];
        hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    }

    for (int i = 0; i < dims; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        for (int j = i + 1; j < dims; ++j) {
            const std::size_t sj = static_cast<std::size_t>(j);
            x[si] = centre[si] + h;
            x[sj] = centre[sj] + h;
            const double fpp = eval_checked(f, x, i, j);
            x[sj] = centre[sj] - h;
            const double fpm = eval_checked(f, x, i, j);
            x[si] = centre[si] - h;
            const double fmm = eval_checked(f, x, i, j);
            x[sj] = centre[sj] + h;
            const double fmp = eval_checked(f, x, i, j);
            x[si] = centre[si];
            x[sj] = centre[sj];
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }

    // Already symmetric by construction, but keep the contract explicit.
    hess = 0.5 * (hess + hess.transpose()).eval();
    return hess;
}

Eigen::MatrixXd sinkhorn_relax(const Eigen::MatrixXd& affinity, int iters, double temperature) {
    require(affinity.rows() == affinity.cols(), "sinkhorn_relax: matrix must be square");
    require(affinity.rows() >= 1, "sinkhorn_relax: empty matrix");
    require(iters >= 0, "sinkhorn_relax: negative iteration count");
    require(temperature > 0.0, "sinkhorn_relax: temperature must be positive");
    if (!affinity.allFinite())
        throw ContractViolation("sinkhorn_relax: non-finite affinity");

    const int n = static_cast<int>(affinity.rows());
    // Row-wise max subtraction only rescales rows, which the row
    // normalization absorbs; it keeps exp() in range.
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i) {
        const double row_max = affinity.row(i).maxCoeff();
        for (int j = 0; j < n; ++j)
            k(i, j) = std::exp((affinity(i, j) - row_max) / temperature);
    }
    for (int it = 0; it < iters; ++it) {
        for (int i = 0; i < n; ++i) k.row(i) /= k.row(i).sum();
        for (int j = 0; j < n; ++j) k.col(j) /= k.col(j).sum();
    }
    return k;
}

Eigen::MatrixXd surrogate_policy_hessian(const Vec& theta, const RelaxedPolicyFn& policy,
                                         const std::vector<StateBatch>& states,
                                         const SurrogateHessianConfig& cfg) {
    require(!states.empty(), "surrogate_policy_hessian: empty state batch");
    const int dims = static_cast<int>(theta.size());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dims, dims);
    for (const StateBatch& batch : states) {
        const ScalarFn f = [&](const Vec& t) { return policy(t, batch); };
        const Eigen::MatrixXd h = fd_hessian(f, theta, cfg.fd);
        if (cfg.absolute_aggregation)
            acc += h.cwiseAbs();
        else
            acc += h;
    }
    acc /= static_cast<double>(states.size());
    return acc;
}

}  // namespace structbo
