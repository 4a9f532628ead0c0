#ifndef TRENDHMM_MODEL_HPP
#define TRENDHMM_MODEL_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trendhmm {

// Row-major matrix of probabilities; row = source state.
using Matrix = std::vector<std::vector<double>>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad caller input: malformed files, out-of-range indices, length mismatches.
struct InputError : Error {
  using Error::Error;
};

struct ParseError : InputError {
  using InputError::InputError;
};

struct DimensionError : InputError {
  using InputError::InputError;
};

// Numeric failure: no convergence, infeasible path, degenerate system.
struct NumericError : Error {
  using Error::Error;
};

struct InfeasiblePathError : NumericError {
  using NumericError::NumericError;
};

struct StateSpace {
  std::vector<std::string> names;

  // The six ordinal trend levels, most negative to most positive.
  static StateSpace six_level();

  int size() const { return static_cast<int>(names.size()); }
  int index_of(std::string_view name) const;  // -1 when absent
};

struct SymbolAlphabet {
  std::vector<std::string> symbols;

  // {"I", "D"}: increase / decrease.
  static SymbolAlphabet increase_decrease();

  int size() const { return static_cast<int>(symbols.size()); }
  int index_of(std::string_view symbol) const;
};

// lambda = (S, O, A, B, pi). Immutable by convention: operations take it
// const and return fresh values, so sharing across threads is safe.
struct HmmModel {
  StateSpace states;
  SymbolAlphabet alphabet;
  Matrix transition;            // N x N
  Matrix emission;              // N x M
  std::vector<double> initial;  // length N

  int num_states() const { return states.size(); }
  int num_symbols() const { return alphabet.size(); }
};

struct Violation {
  std::string where;  // "transition", "emission", "initial", "states", ...
  int row = -1;       // offending row, -1 when not row-specific
  double value = 0.0; // actual sum or entry
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

struct ValidationError : Error {
  ValidationReport report;
  explicit ValidationError(ValidationReport r)
      : Error(r.to_string()), report(std::move(r)) {}
};

// Checks one candidate stochastic matrix: shape, entries in [0,1], row sums
// within row_tolerance of 1. Violations are data, not exceptions.
ValidationReport validate_matrix(const Matrix& m, std::size_t rows,
                                 std::size_t cols, double row_tolerance,
                                 std::string_view where);

ValidationReport validate_model(const HmmModel& model, double row_tolerance);

// Throws ValidationError when validate_model reports anything.
void require_valid(const HmmModel& model, double row_tolerance);

// Divides each row by its sum. Rows already summing to 1 within a few ulp
// are left untouched so the operation is idempotent at the bit level.
// Throws NumericError on a zero-sum row, InputError on a negative entry.
Matrix normalize_rows(const Matrix& m);
std::vector<double> normalize_vector(const std::vector<double>& v);

}  // namespace trendhmm

#endif  // TRENDHMM_MODEL_HPP
