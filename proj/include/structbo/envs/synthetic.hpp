#pragma once

#include <Eigen/Dense>
#include <string>

#include "structbo/graph.hpp"
#include "structbo/rng.hpp"

namespace structbo::envs {

using structbo::Vec;

// One additive component: a concave quadratic plus per-dimension sinusoids
// on the clique's coordinates. Off-diagonal quadratic coefficients are
// bounded away from zero, so every within-clique pair has the constant
// cross-partial -2 A_ab; the sinusoids are separable (zero cross-partials)
// and only make the landscape multimodal enough that purely local search
// stalls.
struct SyntheticComponent {
    Clique clique;
    Eigen::MatrixXd quad;  // symmetric positive definite
    Vec center;
    Vec sin_amps;    // per clique dimension
    Vec sin_freqs;
    Vec sin_phases;
};

// Additive objective with known dependency structure, analytic Hessian, and a
// grid-located (then polished) global maximum on [0,1]^D.
class SyntheticAdditive {
public:
    static SyntheticAdditive make(const ErdosRenyiSpec& spec, double noise_sigma);

    double value(const Vec& theta) const;  // noiseless
    double noisy_value(const Vec& theta, Rng& rng) const;

    // Exact zeros outside the structure: entries (a, b) with no shared clique
    // are never written.
    Eigen::MatrixXd hessian(const Vec& theta) const;
    Eigen::MatrixXd noisy_hessian(const Vec& theta, Rng& rng, double sigma_n) const;

    int dims() const { return graph_.dims(); }
    const DependencyGraph& graph() const { return graph_; }
    const std::vector<Clique>& cliques() const { return cliques_; }
    const std::vector<SyntheticComponent>& components() const { return components_; }
    double noise_sigma() const { return noise_sigma_; }
    double optimum_value() const { return optimum_value_; }
    const Vec& optimum_point() const { return optimum_point_; }

    // Exact round trip: doubles survive via shortest-representation JSON.
    std::string serialize() const;
    static SyntheticAdditive deserialize(const std::string& text);

private:
    DependencyGraph graph_;
    std::vector<Clique> cliques_;
    std::vector<SyntheticComponent> components_;
    double noise_sigma_ = 0.0;
    double optimum_value_ = 0.0;
    Vec optimum_point_;

    void locate_optimum();
};

}  // namespace structbo::envs
