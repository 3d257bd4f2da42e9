#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "structbo/beta.hpp"
#include "structbo/gp.hpp"
#include "structbo/rng.hpp"

using namespace structbo;

namespace {

Vec random_point(Rng& rng, int dims) {
    Vec p(static_cast<std::size_t>(dims));
    for (double& c : p) c = rng.uniform();
    return p;
}

}  // namespace

TEST_CASE("posterior with no data is the prior") {
    const GpModel model = GpModel::fit(AdditiveKernel::full(3, KernelSpec{}), {}, {}, 0.0);
    const Posterior p = model.posterior({0.2, 0.4, 0.6});
    CHECK(p.mean == 0.0);
    CHECK(p.variance == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("posterior on an unfitted model is a contract violation") {
    const GpModel model;
    CHECK_THROWS_AS(model.posterior({0.5}), ContractViolation);
}

TEST_CASE("noiseless GP interpolates its training data") {
    // D=3 keeps 20 random points well separated; 1-D RBF Grams at this
    // lengthscale are numerically singular and no solver interpolates them.
    Rng rng(21);
    const int dims = 3;
    for (KernelFamily family : {KernelFamily::RBF, KernelFamily::Matern52}) {
        const KernelSpec spec{family, 0.2, 1.0};
        std::vector<Vec> points;
        std::vector<double> ys;
        for (int i = 0; i < 20; ++i) {
            points.push_back(random_point(rng, dims));
            ys.push_back(rng.normal());
        }
        const GpModel model = GpModel::fit(AdditiveKernel::full(dims, spec), points, ys, 0.0);
        for (int i = 0; i < 20; ++i) {
            const Posterior p = model.posterior(points[static_cast<std::size_t>(i)]);
            CHECK(std::abs(p.mean - ys[static_cast<std::size_t>(i)]) <= 1e-6);
            CHECK(p.variance >= 0.0);
            CHECK(p.variance <= 1e-6);
        }
    }
}

TEST_CASE("two-point posterior matches the dense-solve oracle") {
    // Frozen from an independent 2x2 linear solve (numpy):
    //   X = [0.2], [0.7]; y = [1.0, -0.5]; sigma^2 = 0.1; query 0.4
    SUBCASE("rbf lengthscale 1") {
        const KernelSpec spec{KernelFamily::RBF, 1.0, 1.0};
        const GpModel model =
            GpModel::fit(AdditiveKernel::full(1, spec), {{0.2}, {0.7}}, {1.0, -0.5}, 0.1);
        const Posterior p = model.posterior({0.4});
        CHECK(std::abs(p.mean - 0.32761250494479843) <= 1e-10);
        CHECK(std::abs(p.variance - 0.053165212387687455) <= 1e-10);
    }
    SUBCASE("matern52 lengthscale 0.5 variance 0.9") {
        const KernelSpec spec{KernelFamily::Matern52, 0.5, 0.9};
        const GpModel model =
            GpModel::fit(AdditiveKernel::full(1, spec), {{0.2}, {0.7}}, {1.0, -0.5}, 0.1);
        const Posterior p = model.posterior({0.4});
        CHECK(std::abs(p.mean - 0.39899773066085825) <= 1e-10);
        CHECK(std::abs(p.variance - 0.13837150063432802) <= 1e-10);
    }
}

TEST_CASE("posterior against a direct dense solve on random additive models") {
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const int dims = 4;
        const AdditiveKernel kernel({Clique({0, 1}), Clique({1, 2}), Clique({3})},
                                    KernelSpec{KernelFamily::Matern52, 0.3, 0.8});
        const int n = 8;
        std::vector<Vec> points;
        std::vector<double> ys;
        for (int i = 0; i < n; ++i) {
            points.push_back(random_point(rng, dims));
            ys.push_back(rng.normal());
        }
        const double noise = 0.05;
        const GpModel model = GpModel::fit(kernel, points, ys, noise);
        const Vec q = random_point(rng, dims);

        Eigen::MatrixXd gram(n, n);
        Eigen::VectorXd kq(n), yv(n);
        for (int i = 0; i < n; ++i) {
            yv(i) = ys[static_cast<std::size_t>(i)];
            kq(i) = additive_eval(kernel, points[static_cast<std::size_t>(i)], q);
            for (int j = 0; j < n; ++j)
                gram(i, j) = additive_eval(kernel, points[static_cast<std::size_t>(i)],
                                           points[static_cast<std::size_t>(j)]);
        }
        gram.diagonal().array() += noise;
        const Eigen::VectorXd sol = gram.ldlt().solve(yv);
        const double mean = kq.dot(sol);
        const double var = additive_eval(kernel, q, q) - kq.dot(gram.ldlt().solve(kq));

        const Posterior p = model.posterior(q);
        CHECK(std::abs(p.mean - mean) <= 1e-9);
        CHECK(std::abs(p.variance - var) <= 1e-9);
    }
}

TEST_CASE("log marginal likelihood prefers the matching additive structure") {
    // Sample a genuinely additive function via random Fourier features per
    // clique, then compare the matching additive kernel against the full
    // kernel. The structured prior should win on most seeds.
    const int dims = 8;
    const std::vector<Clique> cliques = {Clique({0, 1}), Clique({2, 3}), Clique({4, 5}),
                                         Clique({6}), Clique({7})};
    const double ell = 0.3;
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed * 1000 + 7);
        struct Feature {
            Vec w;
            double b, a;
            const Clique* clique;
        };
        std::vector<Feature> features;
        for (const Clique& c : cliques) {
            for (int m = 0; m < 40; ++m) {
                Feature f;
                f.clique = &c;
                f.w.resize(c.dims.size());
                for (double& w : f.w) w = rng.normal() / ell;
                f.b = rng.uniform(0.0, 2.0 * M_PI);
                f.a = rng.normal() * std::sqrt(2.0 / 40.0);
                features.push_back(std::move(f));
            }
        }
        const auto objective = [&](const Vec& x) {
            double total = 0.0;
            for (const Feature& f : features) {
                double dot = 0.0;
                for (std::size_t i = 0; i < f.w.size(); ++i)
                    dot += f.w[i] * x[static_cast<std::size_t>(f.clique->dims[i])];
                total += f.a * std::cos(dot + f.b);
            }
            return total;
        };

        std::vector<Vec> points;
        std::vector<double> ys;
        for (int i = 0; i < 40; ++i) {
            points.push_back(random_point(rng, dims));
            ys.push_back(objective(points.back()));
        }
        const KernelSpec spec{KernelFamily::RBF, ell, 1.0};
        const GpModel additive = GpModel::fit(AdditiveKernel(cliques, spec), points, ys, 1e-4);
        const GpModel full = GpModel::fit(AdditiveKernel::full(dims, spec), points, ys, 1e-4);
        if (additive.log_marginal_likelihood() > full.log_marginal_likelihood()) ++wins;
    }
    CHECK(wins >= 4);
}

TEST_CASE("lengthscale grid search returns the LML-maximizing grid member") {
    Rng rng(23);
    std::vector<Vec> points;
    std::vector<double> ys;
    for (int i = 0; i < 15; ++i) {
        points.push_back(random_point(rng, 2));
        ys.push_back(std::sin(4.0 * points.back()[0]) + points.back()[1]);
    }
    const AdditiveKernel kernel =
        AdditiveKernel::full(2, KernelSpec{KernelFamily::Matern52, 0.2, 1.0});
    const std::vector<double> grid = {0.1, 0.2, 0.4, 0.8};
    const KernelSpec chosen = select_lengthscale(kernel, points, ys, 1e-4, grid);
    CHECK(std::count(grid.begin(), grid.end(), chosen.lengthscale) == 1);
    AdditiveKernel kc = kernel;
    kc.base = chosen;
    const double chosen_lml = GpModel::fit(kc, points, ys, 1e-4).log_marginal_likelihood();
    for (double ell : grid) {
        AdditiveKernel k = kernel;
        k.base.lengthscale = ell;
        CHECK(chosen_lml >= GpModel::fit(k, points, ys, 1e-4).log_marginal_likelihood() - 1e-12);
    }
}

TEST_CASE("practical beta matches the scalar oracle and grows monotonically") {
    const BetaSchedule s = BetaSchedule::practical(1.0);
    // Frozen: 2 log(pi^2 / 6).
    CHECK(beta_value(s, 1, 1) == doctest::Approx(0.99540060494149069).epsilon(1e-14));
    const BetaSchedule deflt = BetaSchedule::practical();
    double prev = 0.0;
    for (long t = 1; t <= 1000; ++t) {
        const double b = beta_value(deflt, t, 7);
        CHECK(b > 0.0);
        CHECK(b >= prev);
        prev = b;
    }
}

TEST_CASE("theoretical beta matches the scalar oracle") {
    // All constants 1, structure offset 0, D=1, t=1. The first term alone is
    // 2 log(2 pi^2 / 3); the schedule adds its 2 D log(sqrt(log 4)) term.
    const BetaSchedule s = BetaSchedule::theoretical(1.0, 1.0, 1.0, 1.0, 0);
    CHECK(beta_value(s, 1, 1) == doctest::Approx(4.0946235871595529).epsilon(1e-13));
    CHECK(2.0 * std::log(2.0 * M_PI * M_PI / 3.0) ==
          doctest::Approx(3.7679893271812719).epsilon(1e-14));

    // t~ clamps at 1 until the structure budget is spent, so beta is flat
    // there and non-decreasing afterwards.
    const BetaSchedule offset = BetaSchedule::theoretical(0.5, 1.0, 2.0, 1.0, 100);
    CHECK(beta_value(offset, 1, 3) == doctest::Approx(beta_value(offset, 50, 3)));
    double prev = 0.0;
    for (long t = 1; t <= 1000; ++t) {
        const double b = beta_value(offset, t, 3);
        CHECK(b >= prev);
        prev = b;
    }
}
