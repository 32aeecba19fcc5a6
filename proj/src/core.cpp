#include "scca/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scca {

void SolverConfig::validate() const {
  if (tau_u < 0 || tau_v < 0) throw std::invalid_argument("tau_u/tau_v must be nonnegative");
  if (mu <= 0) throw std::invalid_argument("mu must be positive");
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  if (alpha_x < 0 || alpha_x > 1 || alpha_y < 0 || alpha_y > 1)
    throw std::invalid_argument("alpha_x/alpha_y must lie in [0,1]");
  if (inner_tol <= 0 || outer_tol <= 0) throw std::invalid_argument("tolerances must be positive");
  if (inner_max_iter < 1 || outer_max_iter < 1)
    throw std::invalid_argument("iteration caps must be positive");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, std::size_t line_no, std::size_t col_no) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("csv: non-numeric cell at row " + std::to_string(line_no) +
                             ", column " + std::to_string(col_no));
  if (!std::isfinite(value))
    throw std::invalid_argument("csv: non-finite value at row " + std::to_string(line_no) +
                             ", column " + std::to_string(col_no));
  return value;
}

}  // namespace

Matrix load_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t ncols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && has_header) continue;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const auto cells = split_line(line);
    if (ncols == 0) {
      ncols = cells.size();
    } else if (cells.size() != ncols) {
      throw std::invalid_argument("csv: ragged row at row " + std::to_string(line_no) +
                               " (expected " + std::to_string(ncols) + " columns, got " +
                               std::to_string(cells.size()) + ")");
    }
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) row[j] = parse_cell(cells[j], line_no, j + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("csv: no data rows in " + path);

  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("csv: cannot write " + path);
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw std::invalid_argument("csv: write failed for " + path);
}

Matrix center_scale(const Matrix& X, ScaleMode mode) {
  if (X.rows() < 2) throw std::invalid_argument("center_scale: need n >= 2");
  Matrix out = X.rowwise() - X.colwise().mean();
  if (mode == ScaleMode::UnitVariance) out /= std::sqrt(static_cast<double>(X.rows()));
  return out;
}

Dataset make_dataset(const Matrix& X, const Matrix& Y, ScaleMode mode) {
  if (X.rows() != Y.rows()) throw std::invalid_argument("make_dataset: X and Y must share n");
  if (X.rows() < 2) throw std::invalid_argument("make_dataset: need n >= 2");
  if (X.cols() < 1 || Y.cols() < 1) throw std::invalid_argument("make_dataset: need p, q >= 1");
  Dataset d;
  d.X = center_scale(X, mode);
  d.Y = center_scale(Y, mode);
  d.n = X.rows();
  d.p = X.cols();
  d.q = Y.cols();
  d.centered = true;
  d.scale_mode = mode;
  return d;
}

}  // namespace scca
