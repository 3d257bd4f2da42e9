#include "structbo/hom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace structbo {

namespace {

constexpr int kMaxAgents = 32;
constexpr int kMaxHidden = 64;

void check_config(const HomConfig& cfg) {
    require(cfg.n_agents >= 1 && cfg.n_agents <= kMaxAgents, "HomConfig: unsupported agent count");
    require(cfg.state_dim >= 1, "HomConfig: state_dim must be positive");
    require(cfg.action_dim >= 1, "HomConfig: action_dim must be positive");
    require(cfg.hidden_layers >= 1 && cfg.hidden_width >= 1, "HomConfig: bad hidden shape");
    require(cfg.hidden_state_dim() <= kMaxHidden, "HomConfig: hidden state too wide");
    require(cfg.rounds >= 1, "HomConfig: rounds must be >= 1");
    require(cfg.weight_range > 0.0, "HomConfig: weight_range must be positive");
}

// Shared tanh trunk of the role-affinity network: hidden_layers tanh layers,
// no output layer (the per-role heads are the output layers).
int trunk_param_count(const HomConfig& cfg) {
    int count = (cfg.state_dim + 1) * cfg.hidden_width;
    count += (cfg.hidden_layers - 1) * (cfg.hidden_width + 1) * cfg.hidden_width;
    return count;
}

void trunk_forward(const HomConfig& cfg, std::span<const double> weights, std::span<const double> x,
                   double* out) {
    std::array<double, kMaxHidden> buf_a;
    std::array<double, kMaxHidden> buf_b;
    const double* activ = x.data();
    int in = cfg.state_dim;
    std::size_t offset = 0;
    double* cur = buf_a.data();
    double* nxt = buf_b.data();
    for (int layer = 0; layer < cfg.hidden_layers; ++layer) {
        for (int o = 0; o < cfg.hidden_width; ++o) {
            double acc = 0.0;
            for (int i = 0; i < in; ++i)
                acc += weights[offset + static_cast<std::size_t>(o * in + i)] * activ[i];
            acc += weights[offset + static_cast<std::size_t>(cfg.hidden_width * in + o)];
            nxt[o] = std::tanh(acc);
        }
        offset += static_cast<std::size_t>((in + 1) * cfg.hidden_width);
        std::swap(cur, nxt);
        activ = cur;
        in = cfg.hidden_width;
    }
    for (int i = 0; i < cfg.hidden_width; ++i) out[i] = activ[i];
}

double head_forward(const HomConfig& cfg, std::span<const double> head_weights, const double* features) {
    double acc = 0.0;
    for (int i = 0; i < cfg.hidden_width; ++i)
        acc += head_weights[static_cast<std::size_t>(i)] * features[i];
    return acc + head_weights[static_cast<std::size_t>(cfg.hidden_width)];
}

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

RoleAssignment assign_exhaustive(const Eigen::MatrixXd& affinity) {
    const int n = static_cast<int>(affinity.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    RoleAssignment best;
    best.total_affinity = -HUGE_VAL;
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += affinity(i, perm[static_cast<std::size_t>(i)]);
        // Strict improvement keeps the lexicographically smallest optimum,
        // since std::next_permutation visits permutations in ascending order.
        if (total > best.total_affinity) {
            best.total_affinity = total;
            best.perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Shortest-augmenting-path assignment on the negated affinities.
RoleAssignment assign_hungarian(const Eigen::MatrixXd& affinity) {
    const int n = static_cast<int>(affinity.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<int> match(static_cast<std::size_t>(n + 1), 0);  // match[col] = row
    std::vector<int> way(static_cast<std::size_t>(n + 1), 0);
    for (int row = 1; row <= n; ++row) {
        match[0] = row;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
        std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = -affinity(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    RoleAssignment out;
    out.perm.assign(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        out.perm[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
    out.total_affinity = 0.0;
    for (int i = 0; i < n; ++i) out.total_affinity += affinity(i, out.perm[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace

HomLayout make_hom_layout(const HomConfig& cfg) {
    check_config(cfg);
    HomLayout layout;
    layout.cfg = cfg;

    const int hidden = cfg.hidden_state_dim();
    layout.edge_mlp = MlpSpec{2 * cfg.state_dim, cfg.hidden_layers, cfg.hidden_width, 1};
    layout.message_mlp = MlpSpec{2 * hidden + 2, cfg.hidden_layers, cfg.hidden_width, hidden};
    layout.update_mlp = MlpSpec{cfg.state_dim + 2 * hidden, cfg.hidden_layers, cfg.hidden_width, hidden};

    layout.trunk_params = trunk_param_count(cfg);
    layout.head_params = cfg.hidden_width + 1;

    int offset = 0;
    layout.role_block = {offset, layout.trunk_params + cfg.n_agents * layout.head_params};
    offset += layout.role_block.length;
    layout.edge_block = {offset, layout.edge_mlp.param_count()};
    offset += layout.edge_block.length;
    layout.message_block = {offset, layout.message_mlp.param_count()};
    offset += layout.message_block.length;
    layout.update_block = {offset, layout.update_mlp.param_count()};
    offset += layout.update_block.length;
    layout.total_dim = offset;
    return layout;
}

std::string HomLayout::describe() const {
    nlohmann::json j;
    j["total_dim"] = total_dim;
    j["n_agents"] = cfg.n_agents;
    j["state_dim"] = cfg.state_dim;
    j["action_dim"] = cfg.action_dim;
    j["hidden_state_dim"] = cfg.hidden_state_dim();
    j["rounds"] = cfg.rounds;
    j["weight_range"] = cfg.weight_range;
    auto block = [](const BlockSpan& b, nlohmann::json shape) {
        return nlohmann::json{{"offset", b.offset}, {"length", b.length}, {"shape", std::move(shape)}};
    };
    auto mlp_shape = [](const MlpSpec& m) {
        return nlohmann::json{{"in", m.in_dim},
                              {"hidden_layers", m.hidden_layers},
                              {"hidden_width", m.hidden_width},
                              {"out", m.out_dim}};
    };
    j["blocks"]["role_affinity"] =
        block(role_block, {{"trunk_params", trunk_params},
                           {"head_params", head_params},
                           {"heads", cfg.n_agents},
                           {"trunk_in", cfg.state_dim},
                           {"trunk_layers", cfg.hidden_layers},
                           {"trunk_width", cfg.hidden_width}});
    j["blocks"]["edge_affinity"] = block(edge_block, mlp_shape(edge_mlp));
    j["blocks"]["message"] = block(message_block, mlp_shape(message_mlp));
    j["blocks"]["update"] = block(update_block, mlp_shape(update_mlp));
    return j.dump(2);
}

double decode_weight(double cube_coord, double weight_range) {
    return weight_range * (2.0 * cube_coord - 1.0);
}

HomParams unpack_params(Vec theta, const HomLayout& layout) {
    require(static_cast<int>(theta.size()) == layout.total_dim,
            "unpack_params: theta length does not match layout");
    HomParams p;
    p.layout = &layout;
    p.weights.resize(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
        p.weights[i] = decode_weight(theta[i], layout.cfg.weight_range);
    p.theta = std::move(theta);
    return p;
}

Vec pack_params(const HomParams& params) {
    require(params.layout != nullptr, "pack_params: detached params");
    require(static_cast<int>(params.theta.size()) == params.layout->total_dim,
            "pack_params: theta length does not match layout");
    return params.theta;
}

std::span<const double> HomParams::role_weights() const {
    return {weights.data() + layout->role_block.offset, static_cast<std::size_t>(layout->role_block.length)};
}
std::span<const double> HomParams::edge_weights() const {
    return {weights.data() + layout->edge_block.offset, static_cast<std::size_t>(layout->edge_block.length)};
}
std::span<const double> HomParams::message_weights() const {
    return {weights.data() + layout->message_block.offset,
            static_cast<std::size_t>(layout->message_block.length)};
}
std::span<const double> HomParams::update_weights() const {
    return {weights.data() + layout->update_block.offset,
            static_cast<std::size_t>(layout->update_block.length)};
}

RoleAssignment hungarian_assign(const Eigen::MatrixXd& affinity) {
    require(affinity.rows() == affinity.cols(), "hungarian_assign: matrix must be square");
    require(affinity.rows() >= 1, "hungarian_assign: empty matrix");
    if (!affinity.allFinite()) throw ContractViolation("hungarian_assign: non-finite affinity");
    if (affinity.rows() <= 7) return assign_exhaustive(affinity);
    return assign_hungarian(affinity);
}

Eigen::MatrixXd role_affinities(const HomLayout& layout, std::span<const double> role_weights,
                                const StateBatch& states) {
    const HomConfig& cfg = layout.cfg;
    require(static_cast<int>(states.size()) == cfg.n_agents, "role_affinities: wrong agent count");
    require(static_cast<int>(role_weights.size()) == layout.role_block.length,
            "role_affinities: wrong weight count");
    const std::span<const double> trunk = role_weights.subspan(0, static_cast<std::size_t>(layout.trunk_params));
    Eigen::MatrixXd affinity(cfg.n_agents, cfg.n_agents);
    std::array<double, kMaxHidden> features;
    for (int agent = 0; agent < cfg.n_agents; ++agent) {
        const Vec& s = states[static_cast<std::size_t>(agent)];
        require(static_cast<int>(s.size()) == cfg.state_dim, "role_affinities: wrong state length");
        trunk_forward(cfg, trunk, s, features.data());
        for (int role = 0; role < cfg.n_agents; ++role) {
            const auto head = role_weights.subspan(
                static_cast<std::size_t>(layout.trunk_params + role * layout.head_params),
                static_cast<std::size_t>(layout.head_params));
            affinity(role, agent) = head_forward(cfg, head, features.data());
        }
    }
    return affinity;
}

InteractionGraph role_interaction_edges(const HomLayout& layout, std::span<const double> edge_weights,
                                        const StateBatch& permuted_states) {
    const HomConfig& cfg = layout.cfg;
    const int n = static_cast<int>(permuted_states.size());
    require(n >= 1, "role_interaction_edges: needs at least one role");
    InteractionGraph graph;
    graph.neighbors.resize(static_cast<std::size_t>(n));
    Vec pair_input(static_cast<std::size_t>(2 * cfg.state_dim));
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < n; ++l) {
            if (l == i && !cfg.allow_self_edges) continue;
            std::copy(permuted_states[static_cast<std::size_t>(i)].begin(),
                      permuted_states[static_cast<std::size_t>(i)].end(), pair_input.begin());
            std::copy(permuted_states[static_cast<std::size_t>(l)].begin(),
                      permuted_states[static_cast<std::size_t>(l)].end(),
                      pair_input.begin() + cfg.state_dim);
            if (mlp_forward_scalar(layout.edge_mlp, edge_weights, pair_input) > 0.0)
                graph.neighbors[static_cast<std::size_t>(i)].push_back(l);
        }
    }
    return graph;
}

std::vector<Vec> mpnn_infer(const HomLayout& layout, const StateBatch& permuted_states,
                            const InteractionGraph& graph, std::span<const double> message_weights,
                            std::span<const double> update_weights, int rounds) {
    const HomConfig& cfg = layout.cfg;
    require(rounds >= 1, "mpnn_infer: rounds must be >= 1");
    const int n = static_cast<int>(permuted_states.size());
    require(static_cast<int>(graph.neighbors.size()) == n, "mpnn_infer: graph size mismatch");
    const int hidden = cfg.hidden_state_dim();
    const double nd = static_cast<double>(n);

    std::vector<Vec> h(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(hidden), 0.0));
    std::vector<Vec> h_next = h;
    Vec update_in(static_cast<std::size_t>(cfg.state_dim + 2 * hidden));
    Vec message_in(static_cast<std::size_t>(2 * hidden + 2));
    Vec message_out(static_cast<std::size_t>(hidden));
    Vec message_sum(static_cast<std::size_t>(hidden));

    auto run_update = [&](int i, const Vec& h_prev, const Vec& msg, Vec& out) {
        const Vec& s = permuted_states[static_cast<std::size_t>(i)];
        std::copy(s.begin(), s.end(), update_in.begin());
        std::copy(h_prev.begin(), h_prev.end(), update_in.begin() + cfg.state_dim);
        std::copy(msg.begin(), msg.end(), update_in.begin() + cfg.state_dim + hidden);
        mlp_forward(layout.update_mlp, update_weights, update_in, out);
    };

    // h_0 = update(s, 0, 0) so the initial hidden state already reflects the
    // role's own observation.
    const Vec zeros(static_cast<std::size_t>(hidden), 0.0);
    for (int i = 0; i < n; ++i) run_update(i, zeros, zeros, h[static_cast<std::size_t>(i)]);

    for (int round = 0; round < rounds; ++round) {
        for (int i = 0; i < n; ++i) {
            std::fill(message_sum.begin(), message_sum.end(), 0.0);
            for (int l : graph.neighbors[static_cast<std::size_t>(i)]) {
                const Vec& hi = h[static_cast<std::size_t>(i)];
                const Vec& hl = h[static_cast<std::size_t>(l)];
                std::copy(hi.begin(), hi.end(), message_in.begin());
                std::copy(hl.begin(), hl.end(), message_in.begin() + hidden);
                message_in[static_cast<std::size_t>(2 * hidden)] = static_cast<double>(i) / nd;
                message_in[static_cast<std::size_t>(2 * hidden + 1)] = static_cast<double>(l) / nd;
                mlp_forward(layout.message_mlp, message_weights, message_in, message_out);
                for (int c = 0; c < hidden; ++c)
                    message_sum[static_cast<std::size_t>(c)] += message_out[static_cast<std::size_t>(c)];
            }
            run_update(i, h[static_cast<std::size_t>(i)], message_sum, h_next[static_cast<std::size_t>(i)]);
        }
        std::swap(h, h_next);
    }

    std::vector<Vec> actions(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(cfg.action_dim)));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < cfg.action_dim; ++c)
            actions[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
                std::clamp(h[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)],
                           -cfg.action_bound, cfg.action_bound);
    return actions;
}

std::vector<Vec> gen_policy(const HomParams& params, const StateBatch& states) {
    require(params.layout != nullptr, "gen_policy: detached params");
    const HomLayout& layout = *params.layout;
    const HomConfig& cfg = layout.cfg;
    require(static_cast<int>(states.size()) == cfg.n_agents, "gen_policy: wrong agent count");

    const Eigen::MatrixXd affinity = role_affinities(layout, params.role_weights(), states);
    const RoleAssignment assignment = hungarian_assign(affinity);

    StateBatch permuted(static_cast<std::size_t>(cfg.n_agents));
    for (int role = 0; role < cfg.n_agents; ++role)
        permuted[static_cast<std::size_t>(role)] =
            states[static_cast<std::size_t>(assignment.perm[static_cast<std::size_t>(role)])];

    const InteractionGraph graph = role_interaction_edges(layout, params.edge_weights(), permuted);
    const std::vector<Vec> role_actions =
        mpnn_infer(layout, permuted, graph, params.message_weights(), params.update_weights(), cfg.rounds);

    std::vector<Vec> agent_actions(static_cast<std::size_t>(cfg.n_agents));
    for (int role = 0; role < cfg.n_agents; ++role)
        agent_actions[static_cast<std::size_t>(assignment.perm[static_cast<std::size_t>(role)])] =
            role_actions[static_cast<std::size_t>(role)];
    return agent_actions;
}

double relaxed_policy_scalar(const HomLayout& layout, const Vec& theta_cube, const StateBatch& states,
                             const SurrogateHessianConfig& cfg) {
    const HomConfig& hom = layout.cfg;
    require(static_cast<int>(states.size()) == hom.n_agents, "relaxed_policy_scalar: wrong agent count");
    require(static_cast<int>(theta_cube.size()) == layout.total_dim,
            "relaxed_policy_scalar: theta length mismatch");

    const int n = hom.n_agents;
    const int hidden = hom.hidden_state_dim();
    const double nd = static_cast<double>(n);

    thread_local Vec weights;
    weights.resize(theta_cube.size());
    for (std::size_t i = 0; i < theta_cube.size(); ++i)
        weights[i] = decode_weight(theta_cube[i], hom.weight_range);
    const std::span<const double> all(weights.data(), weights.size());
    const auto role_w = all.subspan(static_cast<std::size_t>(layout.role_block.offset),
                                    static_cast<std::size_t>(layout.role_block.length));
    const auto edge_w = all.subspan(static_cast<std::size_t>(layout.edge_block.offset),
                                    static_cast<std::size_t>(layout.edge_block.length));
    const auto message_w = all.subspan(static_cast<std::size_t>(layout.message_block.offset),
                                       static_cast<std::size_t>(layout.message_block.length));
    const auto update_w = all.subspan(static_cast<std::size_t>(layout.update_block.offset),
                                      static_cast<std::size_t>(layout.update_block.length));

    // Soft role assignment.
    const Eigen::MatrixXd affinity = role_affinities(layout, role_w, states);
    const Eigen::MatrixXd soft =
        sinkhorn_relax(affinity, cfg.sinkhorn_iters, cfg.sinkhorn_temperature);

    // Barycentric role states under the soft assignment.
    StateBatch mixed(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(hom.state_dim), 0.0));
    for (int role = 0; role < n; ++role) {
        Vec& m = mixed[static_cast<std::size_t>(role)];
        for (int agent = 0; agent < n; ++agent) {
            const double w = soft(role, agent);
            const Vec& s = states[static_cast<std::size_t>(agent)];
            for (int c = 0; c < hom.state_dim; ++c)
                m[static_cast<std::size_t>(c)] += w * s[static_cast<std::size_t>(c)];
        }
    }

    // Soft edges: sigmoid of the edge affinity.
    std::array<double, kMaxAgents * kMaxAgents> edge_weight{};
    Vec pair_input(static_cast<std::size_t>(2 * hom.state_dim));
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < n; ++l) {
            if (l == i && !hom.allow_self_edges) continue;
            std::copy(mixed[static_cast<std::size_t>(i)].begin(), mixed[static_cast<std::size_t>(i)].end(),
                      pair_input.begin());
            std::copy(mixed[static_cast<std::size_t>(l)].begin(), mixed[static_cast<std::size_t>(l)].end(),
                      pair_input.begin() + hom.state_dim);
            const double a = mlp_forward_scalar(layout.edge_mlp, edge_w, pair_input);
            edge_weight[static_cast<std::size_t>(i * n + l)] = sigmoid(cfg.edge_sigmoid_sharpness * a);
        }
    }

    // Message passing with edge-weighted messages, no clamping: the
    // scalarization has to stay smooth for finite differences.
    std::vector<Vec> h(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(hidden), 0.0));
    std::vector<Vec> h_next = h;
    Vec update_in(static_cast<std::size_t>(hom.state_dim + 2 * hidden));
    Vec message_in(static_cast<std::size_t>(2 * hidden + 2));
    Vec message_out(static_cast<std::size_t>(hidden));
    Vec message_sum(static_cast<std::size_t>(hidden));

    auto run_update = [&](int i, const Vec& h_prev, const Vec& msg, Vec& out) {
        const Vec& s = mixed[static_cast<std::size_t>(i)];
        std::copy(s.begin(), s.end(), update_in.begin());
        std::copy(h_prev.begin(), h_prev.end(), update_in.begin() + hom.state_dim);
        std::copy(msg.begin(), msg.end(), update_in.begin() + hom.state_dim + hidden);
        mlp_forward(layout.update_mlp, update_w, update_in, out);
    };

    const Vec zeros(static_cast<std::size_t>(hidden), 0.0);
    for (int i = 0; i < n; ++i) run_update(i, zeros, zeros, h[static_cast<std::size_t>(i)]);

    for (int round = 0; round < hom.rounds; ++round) {
        for (int i = 0; i < n; ++i) {
            std::fill(message_sum.begin(), message_sum.end(), 0.0);
            for (int l = 0; l < n; ++l) {
                if (l == i && !hom.allow_self_edges) continue;
                const double w = edge_weight[static_cast<std::size_t>(i * n + l)];
                const Vec& hi = h[static_cast<std::size_t>(i)];
                const Vec& hl = h[static_cast<std::size_t>(l)];
                std::copy(hi.begin(), hi.end(), message_in.begin());
                std::copy(hl.begin(), hl.end(), message_in.begin() + hidden);
                message_in[static_cast<std::size_t>(2 * hidden)] = static_cast<double>(i) / nd;
                message_in[static_cast<std::size_t>(2 * hidden + 1)] = static_cast<double>(l) / nd;
                mlp_forward(layout.message_mlp, message_w, message_in, message_out);
                for (int c = 0; c < hidden; ++c)
                    message_sum[static_cast<std::size_t>(c)] += w * message_out[static_cast<std::size_t>(c)];
            }
            run_update(i, h[static_cast<std::size_t>(i)], message_sum, h_next[static_cast<std::size_t>(i)]);
        }
        std::swap(h, h_next);
    }

    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < hom.action_dim; ++c)
            total += h[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    return total;
}

RelaxedPolicyFn make_relaxed_policy(const HomLayout& layout, const SurrogateHessianConfig& cfg) {
    return [&layout, cfg](const Vec& theta, const StateBatch& states) {
        return relaxed_policy_scalar(layout, theta, states, cfg);
    };
}

}  // namespace structbo
