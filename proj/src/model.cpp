#include "trendhmm/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace trendhmm {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Rows within a few ulp of 1 are left alone; see normalize_rows.
constexpr double kUlpGuard = 16.0 * std::numeric_limits<double>::epsilon();

// A deviation exactly at the tolerance must pass despite summation
// round-off (0.33 * 3 sums a hair below 0.99).
bool outside(double sum, double tolerance) {
  return std::abs(sum - 1.0) > tolerance + 64.0 * std::numeric_limits<double>::epsilon();
}

}  // namespace

StateSpace StateSpace::six_level() {
  return StateSpace{{"very low", "low", "moderate low", "moderate high",
                     "high", "very high"}};
}

int StateSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

SymbolAlphabet SymbolAlphabet::increase_decrease() {
  return SymbolAlphabet{{"I", "D"}};
}

int SymbolAlphabet::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i] == symbol) return static_cast<int>(i);
  return -1;
}

std::string ValidationReport::to_string() const {
  if (violations.empty()) return "ok";
  std::ostringstream out;
  out << violations.size() << " violation(s):";
  for (const auto& v : violations) {
    out << "\n  " << v.where;
    if (v.row >= 0) out << " row " << v.row;
    out << ": " << v.message << " (" << format_double(v.value) << ")";
  }
  return out.str();
}

ValidationReport validate_matrix(const Matrix& m, std::size_t rows,
                                 std::size_t cols, double row_tolerance,
                                 std::string_view where) {
  ValidationReport report;
  const std::string name(where);
  if (m.size() != rows) {
    report.violations.push_back(
        {name, -1, static_cast<double>(m.size()),
         "expected " + std::to_string(rows) + " rows"});
    return report;
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != cols) {
      report.violations.push_back(
          {name, static_cast<int>(i), static_cast<double>(m[i].size()),
           "expected " + std::to_string(cols) + " columns"});
      continue;
    }
    double sum = 0.0;
    for (double x : m[i]) {
      if (!(x >= 0.0 && x <= 1.0)) {
        report.violations.push_back({name, static_cast<int>(i), x,
                                     "entry outside [0, 1]"});
      }
      sum += x;
    }
    if (outside(sum, row_tolerance)) {
      report.violations.push_back({name, static_cast<int>(i), sum,
                                   "row sums to " + format_double(sum)});
    }
  }
  return report;
}

ValidationReport validate_model(const HmmModel& model, double row_tolerance) {
  ValidationReport report;
  const std::size_t n = model.states.names.size();
  const std::size_t m = model.alphabet.symbols.size();

  if (n == 0)
    report.violations.push_back({"states", -1, 0.0, "no states"});
  if (m == 0)
    report.violations.push_back({"symbols", -1, 0.0, "no symbols"});

  std::set<std::string> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (model.states.names[i].empty())
      report.violations.push_back({"states", static_cast<int>(i), 0.0,
                                   "empty state label"});
    if (!seen.insert(model.states.names[i]).second)
      report.violations.push_back({"states", static_cast<int>(i), 0.0,
                                   "duplicate label '" + model.states.names[i] + "'"});
  }
  seen.clear();
  for (std::size_t i = 0; i < m; ++i) {
    if (model.alphabet.symbols[i].empty())
      report.violations.push_back({"symbols", static_cast<int>(i), 0.0,
                                   "empty symbol label"});
    if (!seen.insert(model.alphabet.symbols[i]).second)
      report.violations.push_back({"symbols", static_cast<int>(i), 0.0,
                                   "duplicate symbol '" + model.alphabet.symbols[i] + "'"});
  }

  auto merge = [&report](ValidationReport sub) {
    for (auto& v : sub.violations) report.violations.push_back(std::move(v));
  };
  merge(validate_matrix(model.transition, n, n, row_tolerance, "transition"));
  merge(validate_matrix(model.emission, n, m, row_tolerance, "emission"));

  if (model.initial.size() != n) {
    report.violations.push_back({"initial", -1,
                                 static_cast<double>(model.initial.size()),
                                 "expected " + std::to_string(n) + " entries"});
  } else {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(model.initial[i] >= 0.0 && model.initial[i] <= 1.0))
        report.violations.push_back({"initial", static_cast<int>(i),
                                     model.initial[i], "entry outside [0, 1]"});
      sum += model.initial[i];
    }
    if (outside(sum, row_tolerance))
      report.violations.push_back({"initial", -1, sum,
                                   "sums to " + format_double(sum)});
  }
  return report;
}

void require_valid(const HmmModel& model, double row_tolerance) {
  ValidationReport report = validate_model(model, row_tolerance);
  if (!report.ok()) throw ValidationError(std::move(report));
}

std::vector<double> normalize_vector(const std::vector<double>& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0)
      throw InputError("negative entry at index " + std::to_string(i));
    sum += v[i];
  }
  if (sum <= 0.0) throw NumericError("cannot normalize a zero vector");
  std::vector<double> out(v.size());
  if (std::abs(sum - 1.0) <= kUlpGuard) {
    // Keep the entries bit-stable, but an entry may sit an ulp above 1.
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::min(v[i], 1.0);
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / sum;
  return out;
}

Matrix normalize_rows(const Matrix& m) {
  Matrix out;
  out.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (m[i][j] < 0.0)
        throw InputError("negative entry at row " + std::to_string(i) +
                         ", column " + std::to_string(j));
      sum += m[i][j];
    }
    if (sum <= 0.0)
      throw NumericError("row " + std::to_string(i) + " sums to zero");
    std::vector<double> row(m[i].size());
    if (std::abs(sum - 1.0) <= kUlpGuard) {
      for (std::size_t j = 0; j < m[i].size(); ++j) row[j] = std::min(m[i][j], 1.0);
    } else {
      for (std::size_t j = 0; j < m[i].size(); ++j) row[j] = m[i][j] / sum;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace trendhmm
