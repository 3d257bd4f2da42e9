#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "structbo/experiment.hpp"

namespace structbo::detail {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Series {
    std::vector<long> iterations;
    std::vector<double> mean;
    std::vector<double> se;
};

// Mean +/- standard error of best-so-far across seeds, per iteration index.
Series curve_series(const std::vector<RunTrace>& traces) {
    std::map<long, std::vector<double>> values;
    for (const RunTrace& trace : traces)
        for (const TraceRow& row : trace.rows)
            if (std::isfinite(row.best_so_far)) values[row.iteration].push_back(row.best_so_far);
    Series s;
    for (const auto& [iter, vals] : values) {
        double m = 0.0;
        for (double v : vals) m += v;
        m /= static_cast<double>(vals.size());
        double se = 0.0;
        if (vals.size() > 1) {
            double var = 0.0;
            for (double v : vals) var += (v - m) * (v - m);
            var /= static_cast<double>(vals.size() - 1);
            se = std::sqrt(var / static_cast<double>(vals.size()));
        }
        s.iterations.push_back(iter);
        s.mean.push_back(m);
        s.se.push_back(se);
    }
    return s;
}

}  // namespace

std::string render_summary_csv(const std::vector<std::uint64_t>& seeds,
                               const std::vector<RunTrace>& traces) {
    std::ostringstream out;
    out << "seed,iteration,query_value,best_so_far,cum_regret\n";
    auto cell = [](double v) { return std::isfinite(v) ? fmt(v) : std::string(); };
    for (std::size_t i = 0; i < traces.size(); ++i) {
        for (const TraceRow& row : traces[i].rows) {
            out << seeds[i] << ',' << row.iteration << ',' << cell(row.y) << ','
                << cell(row.best_so_far) << ',' << cell(row.cum_regret) << '\n';
        }
    }
    return out.str();
}

std::string render_curve_svg(const std::vector<RunTrace>& traces) {
    constexpr double kW = 860, kH = 520, kL = 70, kR = 20, kT = 30, kB = 50;
    const Series s = curve_series(traces);

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (!s.iterations.empty()) {
        double xmin = static_cast<double>(s.iterations.front());
        double xmax = static_cast<double>(s.iterations.back());
        if (xmax == xmin) xmax = xmin + 1.0;
        double ymin = HUGE_VAL, ymax = -HUGE_VAL;
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            ymin = std::min(ymin, s.mean[i] - s.se[i]);
            ymax = std::max(ymax, s.mean[i] + s.se[i]);
        }
        if (ymax == ymin) {
            ymax += 1.0;
            ymin -= 1.0;
        }
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
        auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR); };
        auto py = [&](double y) { return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB); };

        // Shaded standard-error band.
        out << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.45\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < s.iterations.size(); ++i)
            out << fmt(px(static_cast<double>(s.iterations[i]))) << ',' << fmt(py(s.mean[i] + s.se[i])) << ' ';
        for (std::size_t i = s.iterations.size(); i-- > 0;)
            out << fmt(px(static_cast<double>(s.iterations[i]))) << ',' << fmt(py(s.mean[i] - s.se[i])) << ' ';
        out << "\"/>\n";

        out << "<polyline fill=\"none\" stroke=\"#2171b5\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.iterations.size(); ++i)
            out << fmt(px(static_cast<double>(s.iterations[i]))) << ',' << fmt(py(s.mean[i])) << ' ';
        out << "\"/>\n";

        // Axes and ticks.
        out << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\""
            << kH - kB << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
            << "\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 5; ++t) {
            const double x = xmin + (xmax - xmin) * t / 5.0;
            const double y = ymin + (ymax - ymin) * t / 5.0;
            out << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << kH - kB << "\" x2=\"" << fmt(px(x))
                << "\" y2=\"" << kH - kB + 5 << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kH - kB + 20
                << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
            out << "<line x1=\"" << kL - 5 << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << kL
                << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << kL - 8 << "\" y=\"" << fmt(py(y) + 4)
                << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
        }
        out << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12
            << "\" font-size=\"13\" text-anchor=\"middle\">iteration</text>\n";
        out << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
            << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
            << (kT + kH - kB) / 2 << ")\">best value so far</text>\n";
        out << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"18\" font-size=\"13\" "
            << "text-anchor=\"middle\">mean of " << traces.size()
            << " seeds, band = standard error</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_heatmap_svg(const Eigen::MatrixXd& sums, const DependencyGraph& graph) {
    const int dims = static_cast<int>(sums.rows());
    const double cell = std::max(1.0, std::floor(640.0 / std::max(1, dims)));
    const double kL = 40, kT = 40;
    const double w = kL + dims * cell + 20;
    const double h = kT + dims * cell + 20;

    double max_offdiag = 0.0;
    for (int i = 0; i < dims; ++i)
        for (int j = 0; j < dims; ++j)
            if (i != j) max_offdiag = std::max(max_offdiag, std::abs(sums(i, j)));
    if (max_offdiag == 0.0) max_offdiag = 1.0;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kL << "\" y=\"20\" font-size=\"13\">|sum of sampled Hessians|, "
        << "detected edges outlined</text>\n";
    for (int i = 0; i < dims; ++i) {
        for (int j = 0; j < dims; ++j) {
            const double val = std::min(1.0, std::abs(sums(i, j)) / max_offdiag);
            const int shade = static_cast<int>(std::lround(255.0 * (1.0 - val)));
            out << "<rect x=\"" << fmt(kL + j * cell) << "\" y=\"" << fmt(kT + i * cell)
                << "\" width=\"" << fmt(cell) << "\" height=\"" << fmt(cell) << "\" fill=\"rgb("
                << shade << ',' << shade << ',' << shade << ")\"/>\n";
        }
    }
    for (const auto& [a, b] : graph.edges()) {
        for (const auto& [i, j] : {std::pair<int, int>{a, b}, {b, a}}) {
            out << "<rect x=\"" << fmt(kL + j * cell) << "\" y=\"" << fmt(kT + i * cell)
                << "\" width=\"" << fmt(cell) << "\" height=\"" << fmt(cell)
                << "\" fill=\"none\" stroke=\"#d7301f\" stroke-width=\"1\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace structbo::detail
