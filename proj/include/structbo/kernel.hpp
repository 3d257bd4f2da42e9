#pragma once

#include <span>
#include <vector>

#include "structbo/common.hpp"

namespace structbo {

enum class KernelFamily { RBF, Matern52 };

struct KernelSpec {
    KernelFamily family = KernelFamily::Matern52;
    double lengthscale = 0.2;  // isotropic, in units of the unit cube
    double variance = 1.0;     // k(x,x); kept <= 1 to match the GP prior scale
};

// A group of interacting dimensions. Indices are sorted, distinct and < D.
struct Clique {
    std::vector<int> dims;

    Clique() = default;
    explicit Clique(std::vector<int> d);

    int size() const { return static_cast<int>(dims.size()); }
    bool operator==(const Clique& o) const { return dims == o.dims; }
    bool operator<(const Clique& o) const { return dims < o.dims; }
};

// k(x, x') = sum over cliques of base(x[clique], x'[clique]).
struct AdditiveKernel {
    std::vector<Clique> cliques;
    KernelSpec base;

    AdditiveKernel() = default;
    AdditiveKernel(std::vector<Clique> cs, KernelSpec b);

    // Single clique covering all of [0, D): the plain full-dimensional kernel.
    static AdditiveKernel full(int dims, KernelSpec base);
    // One singleton clique per dimension.
    static AdditiveKernel fully_separable(int dims, KernelSpec base);

    int max_dim() const;                 // 1 + largest index used
    double self_variance() const;        // k(x, x) = cliques * base.variance
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

double additive_eval(const AdditiveKernel& kernel, const Vec& a, const Vec& b);

// Closed-form d^4 k / (dx_i dy_i dx_j dy_j), i != j: the prior covariance of
// Hessian entries. Matern-5/2 has a removable singularity at distance zero;
// callers must perturb coincident points.
double derivative_kernel(const KernelSpec& spec, int i, int j, const Vec& x, const Vec& y);

}  // namespace structbo
