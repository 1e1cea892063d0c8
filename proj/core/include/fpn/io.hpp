#pragma once

#include "fpn/index_set.hpp"
#include "fpn/solver.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fpn::io {

/// Rectangular numeric CSV, no header.
Eigen::MatrixXd read_csv(const std::filesystem::path& path);

/// Square symmetric matrix CSV; validates shape and symmetry.
Mat read_matrix_csv(const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

/// Rows "i,j" with 1-based indices. The reader symmetrizes and rejects
/// diagonal pairs.
IndexSet read_index_set_csv(const std::filesystem::path& path);
void write_index_set_csv(const std::filesystem::path& path, const IndexSet& set);

/// Solver configuration as JSON {alpha, beta, epsilon_k, kkt_tol, max_iter,
/// max_backtracks, init_policy}; missing keys keep their defaults.
SolverConfig read_solver_config_json(const std::filesystem::path& path);
nlohmann::json solver_config_to_json(const SolverConfig& cfg);

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace);

nlohmann::json kkt_to_json(const KKTReport& kkt);
nlohmann::json solve_summary_json(const SolveResult& res);

/// Price table: header row of tickers, one row of closing prices per day.
struct PriceTable {
  std::vector<std::string> tickers;
  Eigen::MatrixXd prices;  // days x tickers
};
PriceTable read_price_csv(const std::filesystem::path& path);

/// One integer label per line.
std::vector<int> read_labels_csv(const std::filesystem::path& path);

}  // namespace fpn::io
