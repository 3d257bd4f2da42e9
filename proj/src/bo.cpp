#include "structbo/bo.hpp"

#include <algorithm>
#include <cmath>

namespace structbo {

namespace {

double distance(const Vec& a, const Vec& b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::sqrt(d2);
}

struct Standardizer {
    double mean = 0.0;
    double sd = 1.0;

    static Standardizer from(const std::vector<double>& ys) {
        Standardizer s;
        if (ys.empty()) return s;
        double m = 0.0;
        for (double y : ys) m += y;
        m /= static_cast<double>(ys.size());
        double var = 0.0;
        for (double y : ys) var += (y - m) * (y - m);
        var /= static_cast<double>(ys.size());
        s.mean = m;
        s.sd = std::max(std::sqrt(var), 1e-12);
        return s;
    }

    double fwd(double y) const { return (y - mean) / sd; }
};

struct RegretTracker {
    const BoOptions& opts;
    double total = 0.0;
    bool active = false;

    explicit RegretTracker(const BoOptions& o) : opts(o) {
        active = opts.optimum.has_value() && static_cast<bool>(opts.true_value);
    }

    double add(const Vec& theta, double multiplicity) {
        if (!active) return std::numeric_limits<double>::quiet_NaN();
        total += multiplicity * (*opts.optimum - opts.true_value(theta));
        return total;
    }
};

// Shared GP-UCB phase. Appends rows for iterations [first_iter, last_iter]
// to the trace; returns false when the objective went non-finite.
bool bayes_phase(RunTrace& trace, const ObjectiveFn& objective, int dims, AdditiveKernel kernel,
                 const BoOptions& opts, long first_iter, long last_iter, Rng& rng,
                 RegretTracker& regret) {
    require(opts.batch_size >= 1, "run: batch_size must be >= 1");
    std::vector<Vec> inputs;
    std::vector<double> raw;
    double best = -HUGE_VAL;

    long iter = first_iter;
    while (iter <= last_iter) {
        const int batch =
            static_cast<int>(std::min<long>(opts.batch_size, last_iter - iter + 1));

        if (opts.lengthscale_grid_search && !inputs.empty() &&
            (iter - first_iter) % 10 == 0) {
            const Standardizer st = Standardizer::from(raw);
            std::vector<double> ys(raw.size());
            for (std::size_t i = 0; i < raw.size(); ++i) ys[i] = st.fwd(raw[i]);
            kernel.base = select_lengthscale(kernel, inputs, ys, opts.noise_var / (st.sd * st.sd),
                                             opts.lengthscale_grid);
        }

        // Fit on standardized observations; UCB ordering is unaffected and
        // the unit-variance prior stays meaningful for arbitrary reward
        // scales.
        const Standardizer st = Standardizer::from(raw);
        std::vector<double> ys(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) ys[i] = st.fwd(raw[i]);
        const double std_noise = opts.noise_var / (st.sd * st.sd);

        // Constant-liar batch selection: each pick is hallucinated at its
        // posterior mean before the next pick.
        std::vector<Vec> pending_x = inputs;
        std::vector<double> pending_y = ys;
        std::vector<Vec> batch_points;
        for (int b = 0; b < batch; ++b) {
            const GpModel model =
                GpModel::fit(kernel, pending_x, pending_y, std_noise, opts.jitter);
            const double beta = beta_value(opts.beta, iter + b, dims);
            Vec cand = ucb_acquire(model, beta, dims, opts.acquire, rng).point;
            int redraws = 0;
            auto is_duplicate = [&](const Vec& c) {
                for (const Vec& p : batch_points)
                    if (distance(c, p) < opts.dedup_radius) return true;
                return false;
            };
            while (is_duplicate(cand) && redraws < 100) {
                for (double& v : cand) v = rng.uniform();
                ++redraws;
            }
            if (b + 1 < batch) {
                pending_x.push_back(cand);
                pending_y.push_back(model.posterior(cand).mean);
            }
            batch_points.push_back(std::move(cand));
        }

        for (const Vec& point : batch_points) {
            const double y = objective(point);
            TraceRow row;
            row.phase = QueryPhase::Bayes;
            row.iteration = iter;
            row.theta = point;
            if (!std::isfinite(y)) {
                trace.aborted = true;
                trace.abort_reason = "objective returned a non-finite value at iteration " +
                                     std::to_string(iter);
                return false;
            }
            best = std::max(best, y);
            row.y = y;
            row.best_so_far = best;
            row.cum_regret = regret.add(point, 1.0);
            trace.rows.push_back(std::move(row));
            inputs.push_back(point);
            raw.push_back(y);
            ++iter;
        }
    }
    return true;
}

}  // namespace

AdditiveKernel bo_kernel(const std::vector<Clique>& cliques, KernelSpec base) {
    require(!cliques.empty(), "bo_kernel: empty decomposition");
    base.variance /= static_cast<double>(cliques.size());
    return AdditiveKernel(cliques, base);
}

long RunTrace::objective_queries() const {
    long n = 0;
    for (const auto& r : rows)
        if (r.phase == QueryPhase::Bayes) ++n;
    return n;
}

double RunTrace::final_best() const {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows)
        if (r.phase == QueryPhase::Bayes) best = r.best_so_far;
    return best;
}

double RunTrace::final_cum_regret() const {
    double v = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows)
        if (std::isfinite(r.cum_regret)) v = r.cum_regret;
    return v;
}

RunTrace run_gp_ucb(const ObjectiveFn& objective, int dims, const AdditiveKernel& kernel,
                    const BoOptions& opts, int total_queries, std::uint64_t seed) {
    require(total_queries >= 1, "run_gp_ucb: total_queries must be >= 1");
    RunTrace trace;
    trace.dims = dims;
    Rng rng = Rng::stream(seed, kBayesStream);
    RegretTracker regret(opts);
    bayes_phase(trace, objective, dims, kernel, opts, 1, total_queries, rng, regret);
    return trace;
}

RunTrace run_dss_gp_ucb(const ObjectiveFn& objective, const HessianFn& hessian, int dims,
                        const DssOptions& opts, int total_iterations, std::uint64_t seed) {
    RunTrace trace;
    trace.dims = dims;
    RegretTracker regret(opts.bo);

    long first_iter = 1;
    std::vector<Clique> cliques;
    if (opts.given_decomposition) {
        // Known decomposition: no structure budget is spent and the run is
        // identical to plain GP-UCB with this kernel and seed.
        cliques = *opts.given_decomposition;
        require(!cliques.empty(), "run_dss_gp_ucb: empty decomposition");
    } else {
        require(hessian != nullptr, "run_dss_gp_ucb: structure phase needs a Hessian oracle");
        Rng rng = Rng::stream(seed, kStructureStream);
        const HessianAccumulator acc = sample_hessians(hessian, dims, opts.structure, rng);
        require(total_iterations > acc.t0, "run_dss_gp_ucb: T must exceed T0");
        trace.has_structure = true;
        trace.graph = detect_edges(acc, opts.structure);
        trace.cliques = max_cliques(trace.graph);
        trace.hessian_sums = acc.sums;
        trace.threshold = detection_threshold(acc, opts.structure);
        trace.sigma_n_estimate = acc.noise_dof > 0 ? acc.estimated_sigma_n()
                                                   : std::numeric_limits<double>::quiet_NaN();
        trace.t0 = acc.t0;
        trace.c1 = acc.c1;
        cliques = trace.cliques;

        for (int site = 0; site < acc.t0; ++site) {
            TraceRow row;
            row.phase = QueryPhase::Structure;
            row.iteration = site + 1;
            row.theta = acc.sites[static_cast<std::size_t>(site)];
            row.cum_regret = regret.add(row.theta, static_cast<double>(acc.c1));
            trace.rows.push_back(std::move(row));
        }
        first_iter = acc.t0 + 1;
    }

    const AdditiveKernel kernel = bo_kernel(cliques, opts.bo.base_kernel);
    require(kernel.max_dim() <= dims, "run_dss_gp_ucb: decomposition exceeds dimension count");
    Rng rng = Rng::stream(seed, kBayesStream);
    bayes_phase(trace, objective, dims, kernel, opts.bo, first_iter,
                static_cast<long>(total_iterations), rng, regret);
    return trace;
}

RunTrace run_random_search(const ObjectiveFn& objective, int dims, const BoOptions& opts,
                           int total_queries, std::uint64_t seed) {
    require(total_queries >= 1, "run_random_search: total_queries must be >= 1");
    RunTrace trace;
    trace.dims = dims;
    Rng rng = Rng::stream(seed, kRandomStream);
    RegretTracker regret(opts);
    double best = -HUGE_VAL;
    for (long iter = 1; iter <= total_queries; ++iter) {
        Vec theta(static_cast<std::size_t>(dims));
        for (double& c : theta) c = rng.uniform();
        const double y = objective(theta);
        TraceRow row;
        row.phase = QueryPhase::Bayes;
        row.iteration = iter;
        row.theta = theta;
        if (!std::isfinite(y)) {
            trace.aborted = true;
            trace.abort_reason =
                "objective returned a non-finite value at iteration " + std::to_string(iter);
            return trace;
        }
        best = std::max(best, y);
        row.y = y;
        row.best_so_far = best;
        row.cum_regret = regret.add(theta, 1.0);
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

}  // namespace structbo
