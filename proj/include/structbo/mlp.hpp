#pragma once

#include <span>

#include "structbo/common.hpp"

namespace structbo {

// Tiny dense network: `hidden_layers` tanh layers of width `hidden_width`,
// then a linear output layer. Weights per layer are laid out row-major
// [W (out x in), b (out)].
struct MlpSpec {
    int in_dim = 0;
    int hidden_layers = 3;
    int hidden_width = 4;
    int out_dim = 0;

    int param_count() const;
};

void mlp_forward(const MlpSpec& spec, std::span<const double> weights, std::span<const double> x,
                 std::span<double> out);

// Convenience for scalar heads.
double mlp_forward_scalar(const MlpSpec& spec, std::span<const double> weights,
                          std::span<const double> x);

}  // namespace structbo
