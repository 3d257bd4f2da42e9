#pragma once

#include <string>

#include "structbo/bo.hpp"

namespace structbo {

// Columnar trace format, one row per query:
//   phase;iteration;theta (comma-joined);y;best_so_far;cum_regret
// NaN fields serialize as empty cells. Doubles round-trip exactly.
std::string format_trace(const RunTrace& trace);
RunTrace parse_trace(const std::string& text);

// Sidecar with the detected graph (edge list), cliques and thresholds.
std::string format_structure_sidecar(const RunTrace& trace);
void parse_structure_sidecar(const std::string& text, RunTrace& trace);

// Plain text D x D matrix of the accumulated |Hessian| sums source data.
std::string format_hessian_sums(const Eigen::MatrixXd& sums);
Eigen::MatrixXd parse_hessian_sums(const std::string& text);

std::string format_double(double v);  // %.17g, lossless

}  // namespace structbo
