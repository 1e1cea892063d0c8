#include "fpn/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fpn::io {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ": not a number: '" + s + "'");
  }
}

long parse_long(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ": not an integer: '" + s + "'");
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

Eigen::MatrixXd read_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path.string() + ": empty file");
  const auto first = split_line(lines.front());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(lines.size()), static_cast<Eigen::Index>(first.size()));
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_line(lines[r]);
    if (fields.size() != first.size())
      throw std::runtime_error(path.string() + ": ragged row " + std::to_string(r + 1));
    for (std::size_t c = 0; c < fields.size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_double(fields[c], path);
  }
  return m;
}

Mat read_matrix_csv(const std::filesystem::path& path) {
  Eigen::MatrixXd m = read_csv(path);
  if (m.rows() != m.cols())
    throw std::runtime_error(path.string() + ": expected a square matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::runtime_error(path.string() + ": matrix is not symmetric");
  return symmetrized(m);
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

IndexSet read_index_set_csv(const std::filesystem::path& path) {
  IndexSet set;
  for (const auto& line : read_lines(path)) {
    const auto fields = split_line(line);
    if (fields.size() != 2)
      throw std::runtime_error(path.string() + ": expected rows 'i,j', got '" + line + "'");
    const long i = parse_long(fields[0], path);
    const long j = parse_long(fields[1], path);
    if (i < 1 || j < 1) throw std::runtime_error(path.string() + ": indices are 1-based");
    if (i == j) throw std::runtime_error(path.string() + ": diagonal pair " + line + " not allowed");
    set.insert(static_cast<int>(i - 1), static_cast<int>(j - 1));
  }
  return set;
}

void write_index_set_csv(const std::filesystem::path& path, const IndexSet& set) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [i, j] : set.pairs()) out << (i + 1) << ',' << (j + 1) << '\n';
}

SolverConfig read_solver_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  SolverConfig cfg;
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.beta = j.value("beta", cfg.beta);
  cfg.epsilon_k = j.value("epsilon_k", cfg.epsilon_k);
  cfg.kkt_tol = j.value("kkt_tol", cfg.kkt_tol);
  cfg.max_iter = j.value("max_iter", cfg.max_iter);
  cfg.max_backtracks = j.value("max_backtracks", cfg.max_backtracks);
  if (j.contains("init_policy")) {
    const std::string policy = j["init_policy"];
    if (policy == "inverse-diagonal") {
      cfg.init_policy = InitPolicy::inverse_diagonal;
    } else if (policy == "user-supplied") {
      cfg.init_policy = InitPolicy::user_supplied;
    } else {
      throw std::runtime_error(path.string() + ": unknown init_policy '" + policy + "'");
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json solver_config_to_json(const SolverConfig& cfg) {
  return {{"alpha", cfg.alpha},
          {"beta", cfg.beta},
          {"epsilon_k", cfg.epsilon_k},
          {"kkt_tol", cfg.kkt_tol},
          {"max_iter", cfg.max_iter},
          {"max_backtracks", cfg.max_backtracks},
          {"init_policy",
           cfg.init_policy == InitPolicy::inverse_diagonal ? "inverse-diagonal" : "user-supplied"}};
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "iter,objective,rel_error,kkt_residual,step_size,n_backtracks,free_set_size,"
         "elapsed_seconds\n";
  for (const auto& row : trace) {
    out << row.iter << ',' << row.objective << ',';
    if (!std::isnan(row.rel_error)) out << row.rel_error;
    out << ',' << row.kkt_residual << ',' << row.step_size << ',' << row.n_backtracks << ','
        << row.free_set_size << ',' << row.elapsed_seconds << '\n';
  }
}

nlohmann::json kkt_to_json(const KKTReport& kkt) {
  return {{"max_grad_on_support", kkt.max_grad_on_support},
          {"max_positive_grad_on_zeroset", kkt.max_positive_grad_on_zeroset},
          {"max_abs_on_E", kkt.max_abs_on_forced},
          {"zero_threshold", kkt.zero_threshold},
          {"tol", kkt.tol},
          {"satisfied", kkt.satisfied}};
}

nlohmann::json solve_summary_json(const SolveResult& res) {
  return {{"status", to_string(res.status)},
          {"iterations", res.iterations},
          {"final_objective", res.trace.empty() ? 0.0 : res.trace.back().objective},
          {"kkt", kkt_to_json(res.kkt)}};
}

PriceTable read_price_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.size() < 2)
    throw std::runtime_error(path.string() + ": need a ticker header plus at least one day");
  PriceTable table;
  table.tickers = split_line(lines.front());
  const auto cols = table.tickers.size();
  if (cols == 0) throw std::runtime_error(path.string() + ": empty ticker header");
  table.prices.resize(static_cast<Eigen::Index>(lines.size() - 1), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_line(lines[r]);
    if (fields.size() != cols)
      throw std::runtime_error(path.string() + ": ragged row " + std::to_string(r + 1));
    for (std::size_t c = 0; c < cols; ++c)
      table.prices(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) =
          parse_double(fields[c], path);
  }
  return table;
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  std::vector<int> labels;
  for (const auto& line : read_lines(path))
    labels.push_back(static_cast<int>(parse_long(line, path)));
  return labels;
}

}  // namespace fpn::io
