#include "structbo/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace structbo {

namespace {

int practical_default(int dims) {
    return std::max(8, 2 * dims);
}

}  // namespace

double theoretical_sample_bound(int dims, double p_h, double delta1, double delta2, double sigma_n,
                                double sigma_h2) {
    require(dims >= 1, "theoretical_sample_bound: dims must be >= 1");
    require(p_h > 0.0 && p_h <= 1.0, "theoretical_sample_bound: p_h must be in (0, 1]");
    require(delta1 > 0.0 && delta1 < 1.0, "theoretical_sample_bound: delta1 must be in (0, 1)");
    require(delta2 > 0.0 && delta2 < 1.0, "theoretical_sample_bound: delta2 must be in (0, 1)");
    require(sigma_h2 > 0.0, "theoretical_sample_bound: sigma_h2 must be positive");
    const double d2 = static_cast<double>(dims) * static_cast<double>(dims);
    return 16.0 * d2 / (p_h * delta1 * delta1) * std::log(2.0 * d2 / delta1) *
               (sigma_n * sigma_n) / sigma_h2 +
           d2 / (2.0 * delta2);
}

int StructureSearchConfig::resolve_t0(int dims) const {
    if (t0) {
        require(*t0 >= 1, "StructureSearchConfig: t0 must be >= 1");
        return *t0;
    }
    if (p_h && sigma_h2) {
        require(sigma_n.has_value(), "StructureSearchConfig: theoretical mode needs sigma_n");
        const double bound = theoretical_sample_bound(dims, *p_h, delta1, delta2, *sigma_n, *sigma_h2);
        require(bound < 1e9, "StructureSearchConfig: theoretical sample bound exceeds 1e9 queries");
        return static_cast<int>(std::ceil(bound));
    }
    return practical_default(dims);
}

int StructureSearchConfig::resolve_c1(int dims) const {
    if (c1) {
        require(*c1 >= 1, "StructureSearchConfig: c1 must be >= 1");
        return *c1;
    }
    // The bound sets T0 = C1.
    if (p_h && sigma_h2) return resolve_t0(dims);
    return practical_default(dims);
}

double HessianAccumulator::estimated_sigma_n() const {
    require(noise_dof > 0,
            "HessianAccumulator: sigma_n estimation needs c1 >= 2 repeats per site");
    return std::sqrt(noise_ss / static_cast<double>(noise_dof));
}

HessianAccumulator sample_hessians(const HessianFn& oracle, int dims,
                                   const StructureSearchConfig& cfg, Rng& rng) {
    require(dims >= 1, "sample_hessians: dims must be >= 1");
    HessianAccumulator acc;
    acc.dims = dims;
    acc.t0 = cfg.resolve_t0(dims);
    acc.c1 = cfg.resolve_c1(dims);
    acc.sums = Eigen::MatrixXd::Zero(dims, dims);
    acc.sites.reserve(static_cast<std::size_t>(acc.t0));

    Eigen::MatrixXd site_mean(dims, dims);
    Eigen::MatrixXd site_m2(dims, dims);

    for (int site = 0; site < acc.t0; ++site) {
        Vec theta(static_cast<std::size_t>(dims));
        for (double& c : theta) c = rng.uniform();
        acc.sites.push_back(theta);

        site_mean.setZero();
        site_m2.setZero();
        for (int rep = 0; rep < acc.c1; ++rep) {
            const Eigen::MatrixXd h = oracle(theta);
            require(h.rows() == dims && h.cols() == dims, "sample_hessians: oracle shape mismatch");
            for (int a = 0; a < dims; ++a)
                for (int b = 0; b < dims; ++b)
                    if (!std::isfinite(h(a, b)))
                        throw PoisonedEntry("sample_hessians: oracle returned a non-finite entry at (" +
                                                std::to_string(a) + ", " + std::to_string(b) + ")",
                                            a, b);
            acc.sums += h;
            ++acc.query_count;
            // Welford per entry; only off-diagonals feed the noise estimate.
            const double k = static_cast<double>(rep + 1);
            const Eigen::MatrixXd delta = h - site_mean;
            site_mean += delta / k;
            site_m2 += delta.cwiseProduct(h - site_mean);
        }
        if (acc.c1 >= 2) {
            for (int a = 0; a < dims; ++a)
                for (int b = a + 1; b < dims; ++b) acc.noise_ss += site_m2(a, b);
            acc.noise_dof += static_cast<long>(acc.c1 - 1) * (static_cast<long>(dims) * (dims - 1) / 2);
        }
    }
    return acc;
}

double detection_threshold(const HessianAccumulator& acc, const StructureSearchConfig& cfg) {
    if (cfg.threshold) {
        require(*cfg.threshold >= 0.0, "detection_threshold: threshold must be >= 0");
        return *cfg.threshold;
    }
    const double sigma = cfg.sigma_n ? *cfg.sigma_n : acc.estimated_sigma_n();
    const double d = static_cast<double>(acc.dims);
    return static_cast<double>(acc.t0) * sigma * std::sqrt(2.0 * std::log(2.0 * d * d / cfg.delta1));
}

DependencyGraph detect_edges(const HessianAccumulator& acc, const StructureSearchConfig& cfg) {
    require(acc.dims >= 1, "detect_edges: empty accumulator");
    require(cfg.edge_cap >= 1, "detect_edges: edge_cap must be >= 1");
    const double c_h = detection_threshold(acc, cfg);

    struct Candidate {
        double magnitude;
        int a;
        int b;
    };
    std::vector<Candidate> passing;
    for (int a = 0; a < acc.dims; ++a) {
        for (int b = a + 1; b < acc.dims; ++b) {
            const double magnitude = std::abs(acc.sums(a, b));
            if (magnitude > c_h) passing.push_back({magnitude, a, b});
        }
    }
    if (static_cast<int>(passing.size()) > cfg.edge_cap) {
        std::sort(passing.begin(), passing.end(), [](const Candidate& x, const Candidate& y) {
            if (x.magnitude != y.magnitude) return x.magnitude > y.magnitude;
            return std::make_pair(x.a, x.b) < std::make_pair(y.a, y.b);
        });
        passing.resize(static_cast<std::size_t>(cfg.edge_cap));
    }

    DependencyGraph graph(acc.dims);
    for (const Candidate& c : passing) graph.add_edge(c.a, c.b);
    return graph;
}

}  // namespace structbo
