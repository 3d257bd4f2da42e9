#include "structbo/mlp.hpp"

#include <array>
#include <cmath>

namespace structbo {

namespace {
// Hidden widths stay tiny (<= 8 in every shipped layout).
constexpr int kMaxWidth = 64;
}

int MlpSpec::param_count() const {
    int count = 0;
    int in = in_dim;
    for (int layer = 0; layer < hidden_layers; ++layer) {
        count += (in + 1) * hidden_width;
        in = hidden_width;
    }
    count += (in + 1) * out_dim;
    return count;
}

void mlp_forward(const MlpSpec& spec, std::span<const double> weights, std::span<const double> x,
                 std::span<double> out) {
    require(static_cast<int>(x.size()) == spec.in_dim, "mlp_forward: input length mismatch");
    require(static_cast<int>(out.size()) == spec.out_dim, "mlp_forward: output length mismatch");
    require(static_cast<int>(weights.size()) == spec.param_count(),
            "mlp_forward: weight length mismatch");
    require(spec.hidden_width <= kMaxWidth && spec.in_dim <= kMaxWidth && spec.out_dim <= kMaxWidth,
            "mlp_forward: layer width exceeds supported maximum");

    std::array<double, kMaxWidth> buf_a;
    std::array<double, kMaxWidth> buf_b;
    const double* activ = x.data();
    int in = spec.in_dim;
    std::size_t offset = 0;
    double* cur = buf_a.data();
    double* nxt = buf_b.data();

    for (int layer = 0; layer < spec.hidden_layers; ++layer) {
        for (int o = 0; o < spec.hidden_width; ++o) {
            double acc = 0.0;
            for (int i = 0; i < in; ++i) acc += weights[offset + static_cast<std::size_t>(o * in + i)] * activ[i];
            acc += weights[offset + static_cast<std::size_t>(spec.hidden_width * in + o)];
            nxt[o] = std::tanh(acc);
        }
        offset += static_cast<std::size_t>((in + 1) * spec.hidden_width);
        std::swap(cur, nxt);
        activ = cur;
        in = spec.hidden_width;
    }

    for (int o = 0; o < spec.out_dim; ++o) {
        double acc = 0.0;
        for (int i = 0; i < in; ++i) acc += weights[offset + static_cast<std::size_t>(o * in + i)] * activ[i];
        acc += weights[offset + static_cast<std::size_t>(spec.out_dim * in + o)];
        out[static_cast<std::size_t>(o)] = acc;
    }
}

double mlp_forward_scalar(const MlpSpec& spec, std::span<const double> weights,
                          std::span<const double> x) {
    require(spec.out_dim == 1, "mlp_forward_scalar: spec is not a scalar head");
    double out = 0.0;
    mlp_forward(spec, weights, x, std::span<double>(&out, 1));
    return out;
}

}  // namespace structbo
