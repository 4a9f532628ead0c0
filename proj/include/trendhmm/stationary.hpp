#ifndef TRENDHMM_STATIONARY_HPP
#define TRENDHMM_STATIONARY_HPP

#include <vector>

#include "trendhmm/model.hpp"

namespace trendhmm {

enum class StationaryMethod {
  LinearSolve,     // solve pi (P - I) = 0 with sum(pi) = 1 appended
  PowerIteration,  // iterate on the lazy chain (P + I)/2
};

struct StationaryOptions {
  StationaryMethod method = StationaryMethod::LinearSolve;
  int max_iter = 100000;
  double residual_tol = 1e-10;
};

// Raised when the chain has more than one closed communicating class and
// the stationary distribution is therefore not unique.
struct NonUniqueStationaryError : NumericError {
  std::vector<std::vector<int>> closed_classes;
  NonUniqueStationaryError(std::string message,
                           std::vector<std::vector<int>> classes)
      : NumericError(std::move(message)), closed_classes(std::move(classes)) {}
};

// Closed communicating classes of the positive-entry adjacency graph,
// each sorted ascending, ordered by smallest member.
std::vector<std::vector<int>> closed_communicating_classes(const Matrix& transition);

// Unique pi with pi P = pi, sum pi = 1, ||pi P - pi||_1 <= residual_tol.
// Periodic chains are fine under LinearSolve (the linear system has the
// Cesaro limit as its unique solution) and under PowerIteration via the
// lazy transform. Throws NonUniqueStationaryError when several closed
// classes exist, NumericError when the residual cannot be met.
std::vector<double> stationary_distribution(const Matrix& transition,
                                            const StationaryOptions& options = {});

}  // namespace trendhmm

#endif  // TRENDHMM_STATIONARY_HPP
