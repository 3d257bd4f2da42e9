#include "structbo/envs/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <json.hpp>

namespace structbo::envs {

namespace {

double component_value(const SyntheticComponent& comp, const double* z) {
    // z = theta[clique] - center
    const int m = comp.clique.size();
    double quad = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) quad += z[i] * comp.quad(i, j) * z[j];
    double waves = 0.0;
    for (int i = 0; i < m; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        waves += comp.sin_amps[si] * std::sin(comp.sin_freqs[si] * z[i] + comp.sin_phases[si]);
    }
    return -quad + waves;
}

// Golden-section polish of one coordinate on [0,1].
double golden_line(const std::function<double(double)>& f, double lo, double hi, int iters) {
    constexpr double kGolden = 0.6180339887498949;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < iters; ++it) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 >= f2 ? x1 : x2;
}

}  // namespace

SyntheticAdditive SyntheticAdditive::make(const ErdosRenyiSpec& spec, double noise_sigma) {
    require(noise_sigma >= 0.0, "SyntheticAdditive: negative noise");
    SyntheticAdditive out;
    out.graph_ = sample_er_graph(spec);
    out.cliques_ = max_cliques(out.graph_);
    out.noise_sigma_ = noise_sigma;

    Rng rng = Rng::stream(spec.seed, /*tag=*/0x53594e54ULL);  // "SYNT"
    for (const Clique& clique : out.cliques_) {
        const int m = clique.size();
        require(m <= 64, "SyntheticAdditive: clique too large");
        SyntheticComponent comp;
        comp.clique = clique;
        comp.quad = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                const double magnitude = rng.uniform(0.3, 0.6);
                const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
                comp.quad(i, j) = sign * magnitude;
                comp.quad(j, i) = comp.quad(i, j);
            }
        }
        // Diagonal dominance keeps the quadratic form positive definite.
        for (int i = 0; i < m; ++i) {
            double row = 0.0;
            for (int j = 0; j < m; ++j)
                if (j != i) row += std::abs(comp.quad(i, j));
            comp.quad(i, i) = row + rng.uniform(0.5, 1.0);
        }
        comp.center.resize(static_cast<std::size_t>(m));
        for (double& c : comp.center) c = rng.uniform(0.25, 0.75);
        // Separable waves: one to two periods per dimension, strong enough
        // to trap hill climbers, with zero cross-partials by construction.
        comp.sin_amps.resize(static_cast<std::size_t>(m));
        comp.sin_freqs.resize(static_cast<std::size_t>(m));
        comp.sin_phases.resize(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            comp.sin_amps[static_cast<std::size_t>(i)] = rng.uniform(0.5, 0.8);
            comp.sin_freqs[static_cast<std::size_t>(i)] = rng.uniform(2.0 * M_PI, 3.0 * M_PI);
            comp.sin_phases[static_cast<std::size_t>(i)] = rng.uniform(0.0, 2.0 * M_PI);
        }
        out.components_.push_back(std::move(comp));
    }
    out.locate_optimum();
    return out;
}

double SyntheticAdditive::value(const Vec& theta) const {
    require(static_cast<int>(theta.size()) == dims(), "SyntheticAdditive::value: wrong length");
    double total = 0.0;
    double z[64];
    for (const SyntheticComponent& comp : components_) {
        const int m = comp.clique.size();
        for (int i = 0; i < m; ++i)
            z[i] = theta[static_cast<std::size_t>(comp.clique.dims[static_cast<std::size_t>(i)])] -
                   comp.center[static_cast<std::size_t>(i)];
        total += component_value(comp, z);
    }
    return total;
}

double SyntheticAdditive::noisy_value(const Vec& theta, Rng& rng) const {
    return value(theta) + noise_sigma_ * rng.normal();
}

Eigen::MatrixXd SyntheticAdditive::hessian(const Vec& theta) const {
    require(static_cast<int>(theta.size()) == dims(), "SyntheticAdditive::hessian: wrong length");
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dims(), dims());
    for (const SyntheticComponent& comp : components_) {
        const int m = comp.clique.size();
        for (int i = 0; i < m; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            const int a = comp.clique.dims[si];
            for (int j = 0; j < m; ++j) {
                const int b = comp.clique.dims[static_cast<std::size_t>(j)];
                h(a, b) += -2.0 * comp.quad(i, j);
            }
            const double z = theta[static_cast<std::size_t>(a)] - comp.center[si];
            h(a, a) += -comp.sin_amps[si] * comp.sin_freqs[si] * comp.sin_freqs[si] *
                       std::sin(comp.sin_freqs[si] * z + comp.sin_phases[si]);
        }
    }
    return h;
}

Eigen::MatrixXd SyntheticAdditive::noisy_hessian(const Vec& theta, Rng& rng, double sigma_n) const {
    Eigen::MatrixXd h = hessian(theta);
    // Per-entry noise, mirrored so queries stay symmetric.
    for (int a = 0; a < dims(); ++a) {
        for (int b = a; b < dims(); ++b) {
            const double eps = sigma_n * rng.normal();
            h(a, b) += eps;
            if (b != a) h(b, a) += eps;
        }
    }
    return h;
}

// Maximal cliques overlap, so the optimum cannot be assembled clique by
// clique. Instead: solve the assembled quadratic part exactly, then polish
// the true objective (quadratic + sinusoids) by multi-start coordinate
// ascent, each coordinate scanned on a grid before golden-section polish.
void SyntheticAdditive::locate_optimum() {
    const int d = dims();

    Eigen::MatrixXd a_full = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd b_full = Eigen::VectorXd::Zero(d);
    for (const SyntheticComponent& comp : components_) {
        const int m = comp.clique.size();
        for (int i = 0; i < m; ++i) {
            const int gi = comp.clique.dims[static_cast<std::size_t>(i)];
            for (int j = 0; j < m; ++j) {
                const int gj = comp.clique.dims[static_cast<std::size_t>(j)];
                a_full(gi, gj) += comp.quad(i, j);
                b_full(gi) += comp.quad(i, j) * comp.center[static_cast<std::size_t>(j)];
            }
        }
    }
    const Eigen::VectorXd quad_opt = a_full.ldlt().solve(b_full);

    auto polish = [&](Vec point) {
        for (double& c : point) c = std::clamp(c, 0.0, 1.0);
        double best = value(point);
        for (int sweep = 0; sweep < 24; ++sweep) {
            for (int c = 0; c < d; ++c) {
                const std::size_t sc = static_cast<std::size_t>(c);
                // Coarse scan guards against sinusoid-induced multimodality
                // along the coordinate; golden section polishes the winner.
                constexpr int kScan = 65;
                double scan_best = point[sc];
                double scan_value = best;
                for (int g = 0; g < kScan; ++g) {
                    const double x = static_cast<double>(g) / (kScan - 1);
                    Vec probe = point;
                    probe[sc] = x;
                    const double v = value(probe);
                    if (v > scan_value) {
                        scan_value = v;
                        scan_best = x;
                    }
                }
                const double lo = std::max(0.0, scan_best - 1.0 / (kScan - 1));
                const double hi = std::min(1.0, scan_best + 1.0 / (kScan - 1));
                const double refined = golden_line(
                    [&](double x) {
                        Vec probe = point;
                        probe[sc] = x;
                        return value(probe);
                    },
                    lo, hi, 60);
                Vec probe = point;
                probe[sc] = refined;
                const double v = value(probe);
                if (v > best) {
                    best = v;
                    point = probe;
                }
            }
        }
        return std::make_pair(best, point);
    };

    Rng rng = Rng::stream(0x4f505449ULL, static_cast<std::uint64_t>(d));  // "OPTI"
    std::vector<Vec> starts;
    Vec q(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) q[static_cast<std::size_t>(i)] = quad_opt(i);
    starts.push_back(q);
    for (int s = 0; s < 8; ++s) {
        Vec p = q;
        for (double& c : p) c += rng.uniform(-0.2, 0.2);
        starts.push_back(p);
    }
    for (int s = 0; s < 8; ++s) {
        Vec p(static_cast<std::size_t>(d));
        for (double& c : p) c = rng.uniform();
        starts.push_back(p);
    }

    double best_value = -HUGE_VAL;
    Vec best_point;
    for (Vec& start : starts) {
        auto [v, p] = polish(std::move(start));
        if (v > best_value) {
            best_value = v;
            best_point = std::move(p);
        }
    }
    optimum_point_ = std::move(best_point);
    optimum_value_ = value(optimum_point_);
}

std::string SyntheticAdditive::serialize() const {
    nlohmann::json j;
    j["dims"] = dims();
    j["noise_sigma"] = noise_sigma_;
    j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : graph_.edges()) j["edges"].push_back({a, b});
    j["components"] = nlohmann::json::array();
    for (const SyntheticComponent& comp : components_) {
        nlohmann::json c;
        c["dims"] = comp.clique.dims;
        const int m = comp.clique.size();
        std::vector<double> quad;
        for (int i = 0; i < m; ++i)
            for (int j2 = 0; j2 < m; ++j2) quad.push_back(comp.quad(i, j2));
        c["quad"] = quad;
        c["center"] = comp.center;
        c["sin_amps"] = comp.sin_amps;
        c["sin_freqs"] = comp.sin_freqs;
        c["sin_phases"] = comp.sin_phases;
        j["components"].push_back(std::move(c));
    }
    j["optimum_value"] = optimum_value_;
    j["optimum_point"] = optimum_point_;
    return j.dump(2);
}

SyntheticAdditive SyntheticAdditive::deserialize(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SyntheticAdditive out;
    out.graph_ = DependencyGraph(j.at("dims").get<int>());
    for (const auto& e : j.at("edges")) out.graph_.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    out.noise_sigma_ = j.at("noise_sigma").get<double>();
    for (const auto& c : j.at("components")) {
        SyntheticComponent comp;
        comp.clique = Clique(c.at("dims").get<std::vector<int>>());
        const int m = comp.clique.size();
        const auto quad = c.at("quad").get<std::vector<double>>();
        comp.quad = Eigen::MatrixXd(m, m);
        for (int i = 0; i < m; ++i)
            for (int j2 = 0; j2 < m; ++j2)
                comp.quad(i, j2) = quad[static_cast<std::size_t>(i * m + j2)];
        comp.center = c.at("center").get<Vec>();
        comp.sin_amps = c.at("sin_amps").get<Vec>();
        comp.sin_freqs = c.at("sin_freqs").get<Vec>();
        comp.sin_phases = c.at("sin_phases").get<Vec>();
        out.components_.push_back(std::move(comp));
        out.cliques_.push_back(out.components_.back().clique);
    }
    out.optimum_value_ = j.at("optimum_value").get<double>();
    out.optimum_point_ = j.at("optimum_point").get<Vec>();
    return out;
}

}  // namespace structbo::envs
