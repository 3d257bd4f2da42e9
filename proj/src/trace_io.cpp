#include "structbo/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace structbo {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string format_optional(double v) {
    return std::isnan(v) ? std::string() : format_double(v);
}

double parse_optional(const std::string& s) {
    return s.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string format_trace(const RunTrace& trace) {
    std::ostringstream out;
    out << "# structbo trace v1\n";
    out << "# dims=" << trace.dims << "\n";
    out << "# columns: phase;iteration;theta;y;best_so_far;cum_regret\n";
    for (const TraceRow& row : trace.rows) {
        out << (row.phase == QueryPhase::Structure ? "structure" : "bayes") << ';'
            << row.iteration << ';';
        for (std::size_t i = 0; i < row.theta.size(); ++i) {
            if (i) out << ',';
            out << format_double(row.theta[i]);
        }
        out << ';' << format_optional(row.y) << ';' << format_optional(row.best_so_far) << ';'
            << format_optional(row.cum_regret) << '\n';
    }
    return out.str();
}

RunTrace parse_trace(const std::string& text) {
    RunTrace trace;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# dims=";
            if (line.rfind(tag, 0) == 0) trace.dims = std::stoi(line.substr(tag.size()));
            continue;
        }
        const auto fields = split(line, ';');
        if (fields.size() != 6)
            throw ContractViolation("parse_trace: malformed row '" + line + "'");
        TraceRow row;
        row.phase = fields[0] == "structure" ? QueryPhase::Structure : QueryPhase::Bayes;
        row.iteration = std::stol(fields[1]);
        if (!fields[2].empty())
            for (const std::string& c : split(fields[2], ',')) row.theta.push_back(std::stod(c));
        row.y = parse_optional(fields[3]);
        row.best_so_far = parse_optional(fields[4]);
        row.cum_regret = parse_optional(fields[5]);
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

std::string format_structure_sidecar(const RunTrace& trace) {
    nlohmann::json j;
    j["dims"] = trace.dims;
    j["t0"] = trace.t0;
    j["c1"] = trace.c1;
    j["threshold"] = trace.threshold;
    if (std::isfinite(trace.sigma_n_estimate)) j["sigma_n_estimate"] = trace.sigma_n_estimate;
    j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : trace.graph.edges()) j["edges"].push_back({a, b});
    j["cliques"] = nlohmann::json::array();
    for (const Clique& c : trace.cliques) j["cliques"].push_back(c.dims);
    j["aborted"] = trace.aborted;
    if (trace.aborted) j["abort_reason"] = trace.abort_reason;
    return j.dump(2);
}

void parse_structure_sidecar(const std::string& text, RunTrace& trace) {
    const nlohmann::json j = nlohmann::json::parse(text);
    trace.has_structure = true;
    trace.dims = j.at("dims").get<int>();
    trace.t0 = j.at("t0").get<int>();
    trace.c1 = j.at("c1").get<int>();
    trace.threshold = j.at("threshold").get<double>();
    if (j.contains("sigma_n_estimate")) trace.sigma_n_estimate = j.at("sigma_n_estimate").get<double>();
    trace.graph = DependencyGraph(trace.dims);
    for (const auto& e : j.at("edges")) trace.graph.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    trace.cliques.clear();
    for (const auto& c : j.at("cliques")) trace.cliques.emplace_back(c.get<std::vector<int>>());
    trace.aborted = j.at("aborted").get<bool>();
}

std::string format_hessian_sums(const Eigen::MatrixXd& sums) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < sums.rows(); ++i) {
        for (Eigen::Index j = 0; j < sums.cols(); ++j) {
            if (j) out << ' ';
            out << format_double(sums(i, j));
        }
        out << '\n';
    }
    return out.str();
}

Eigen::MatrixXd parse_hessian_sums(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        double v;
        while (ls >> v) row.push_back(v);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return {};
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

}  // namespace structbo
