#include "structbo/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace structbo {

namespace {

const double kSqrt5 = std::sqrt(5.0);

double scaled_sq_dist(std::span<const double> x, std::span<const double> y, double lengthscale) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = (x[i] - y[i]) / lengthscale;
        d2 += d * d;
    }
    return d2;
}

double base_rbf(double d2) {
    return std::exp(-0.5 * d2);
}

double base_matern52(double d2) {
    const double d = std::sqrt(d2);
    return (1.0 + kSqrt5 * d + (5.0 / 3.0) * d2) * std::exp(-kSqrt5 * d);
}

}  // namespace

Clique::Clique(std::vector<int> d) : dims(std::move(d)) {
    require(!dims.empty(), "Clique: must be non-empty");
    for (std::size_t i = 0; i + 1 < dims.size(); ++i)
        require(dims[i] < dims[i + 1], "Clique: indices must be strictly increasing");
    require(dims.front() >= 0, "Clique: indices must be non-negative");
}

AdditiveKernel::AdditiveKernel(std::vector<Clique> cs, KernelSpec b)
    : cliques(std::move(cs)), base(b) {
    require(!cliques.empty(), "AdditiveKernel: needs at least one clique");
    require(base.lengthscale > 0.0, "AdditiveKernel: lengthscale must be positive");
    require(base.variance > 0.0, "AdditiveKernel: variance must be positive");
}

AdditiveKernel AdditiveKernel::full(int dims, KernelSpec base) {
    std::vector<int> all(static_cast<std::size_t>(dims));
    for (int i = 0; i < dims; ++i) all[static_cast<std::size_t>(i)] = i;
    return AdditiveKernel({Clique(all)}, base);
}

AdditiveKernel AdditiveKernel::fully_separable(int dims, KernelSpec base) {
    std::vector<Clique> cs;
    cs.reserve(static_cast<std::size_t>(dims));
    for (int i = 0; i < dims; ++i) cs.emplace_back(std::vector<int>{i});
    return AdditiveKernel(std::move(cs), base);
}

int AdditiveKernel::max_dim() const {
    int m = 0;
    for (const auto& c : cliques) m = std::max(m, c.dims.back() + 1);
    return m;
}

double AdditiveKernel::self_variance() const {
    return static_cast<double>(cliques.size()) * base.variance;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), "kernel_eval: dimension mismatch");
    require(spec.lengthscale > 0.0, "kernel_eval: lengthscale must be positive");
    const double d2 = scaled_sq_dist(x, y, spec.lengthscale);
    switch (spec.family) {
        case KernelFamily::RBF:
            return spec.variance * base_rbf(d2);
        case KernelFamily::Matern52:
            return spec.variance * base_matern52(d2);
    }
    throw ContractViolation("kernel_eval: unknown family");
}

double additive_eval(const AdditiveKernel& kernel, const Vec& a, const Vec& b) {
    require(a.size() == b.size(), "additive_eval: dimension mismatch");
    const int dims = static_cast<int>(a.size());
    const double ell = kernel.base.lengthscale;
    const double inv_ell2 = 1.0 / (ell * ell);
    double sum = 0.0;
    for (const auto& clique : kernel.cliques) {
        require(clique.dims.back() < dims, "additive_eval: clique index out of range");
        double d2 = 0.0;
        for (const int dim : clique.dims) {
            const double d = a[static_cast<std::size_t>(dim)] - b[static_cast<std::size_t>(dim)];
            d2 += d * d;
        }
        d2 *= inv_ell2;
        switch (kernel.base.family) {
            case KernelFamily::RBF:
                sum += kernel.base.variance * base_rbf(d2);
                break;
            case KernelFamily::Matern52:
                sum += kernel.base.variance * base_matern52(d2);
                break;
        }
    }
    return sum;
}

double derivative_kernel(const KernelSpec& spec, int i, int j, const Vec& x, const Vec& y) {
    require(x.size() == y.size(), "derivative_kernel: dimension mismatch");
    require(i != j, "derivative_kernel: needs distinct dimensions");
    const int dims = static_cast<int>(x.size());
    require(i >= 0 && i < dims && j >= 0 && j < dims, "derivative_kernel: index out of range");

    const double ell = spec.lengthscale;
    require(ell > 0.0, "derivative_kernel: lengthscale must be positive");
    // Work in lengthscale units; each of the four derivatives contributes 1/ell.
    const double scale = spec.variance / (ell * ell * ell * ell);
    double d2 = 0.0;
    for (int a = 0; a < dims; ++a) {
        const double d = (x[static_cast<std::size_t>(a)] - y[static_cast<std::size_t>(a)]) / ell;
        d2 += d * d;
    }
    const double di = (x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]) / ell;
    const double dj = (x[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)]) / ell;

    switch (spec.family) {
        case KernelFamily::RBF:
            return scale * base_rbf(d2) * (1.0 - di * di) * (1.0 - dj * dj);
        case KernelFamily::Matern52: {
            const double d = std::sqrt(d2);
            if (d == 0.0)
                throw SingularInput("derivative_kernel: Matern-5/2 form divides by the distance");
            const double e = std::exp(-kSqrt5 * d);
            const double di2 = di * di;
            const double dj2 = dj * dj;
            const double cross = di2 * dj2;
            return scale * e *
                   (25.0 / 3.0 - (25.0 * kSqrt5 / 3.0) * (di2 + dj2) / d +
                    (125.0 / 3.0) * cross / (d * d) + (25.0 * kSqrt5 / 3.0) * cross / (d * d * d));
        }
    }
    throw ContractViolation("derivative_kernel: unknown family");
}

}  // namespace structbo
