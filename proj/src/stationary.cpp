#include "trendhmm/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace trendhmm {

namespace {

void check_square(const Matrix& p) {
  if (p.empty()) throw DimensionError("transition matrix is empty");
  for (const auto& row : p)
    if (row.size() != p.size())
      throw DimensionError("transition matrix is not square");
}

// Iterative Tarjan over the positive-entry adjacency graph.
std::vector<std::vector<int>> strongly_connected_components(const Matrix& p) {
  const int n = static_cast<int>(p.size());
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int next_index = 0;

  struct Frame {
    int v;
    int next_child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call_stack{{root, 0}};
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      const int v = frame.v;
      if (frame.next_child < n) {
        const int w = frame.next_child++;
        if (p[v][w] <= 0.0) continue;
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_stack.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }
      if (lowlink[v] == index[v]) {
        std::vector<int> component;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const int parent = call_stack.back().v;
        lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
      }
    }
  }
  return components;
}

double residual_l1(const std::vector<double>& pi, const Matrix& p) {
  const std::size_t n = p.size();
  double res = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double pj = 0.0;
    for (std::size_t i = 0; i < n; ++i) pj += pi[i] * p[i][j];
    res += std::abs(pj - pi[j]);
  }
  return res;
}

// Nudge the largest entry until the sum is exactly 1.0.
void fix_sum(std::vector<double>& pi) {
  const std::size_t imax =
      std::max_element(pi.begin(), pi.end()) - pi.begin();
  for (int pass = 0; pass < 4; ++pass) {
    double sum = std::accumulate(pi.begin(), pi.end(), 0.0);
    if (sum == 1.0) return;
    pi[imax] += 1.0 - sum;
  }
}

std::vector<double> solve_linear(const Matrix& p, double residual_tol) {
  const int n = static_cast<int>(p.size());
  // n+1 consistent equations in n unknowns: (P^T - I) pi = 0 and sum = 1.
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = p[j][i] - (i == j ? 1.0 : 0.0);
    a[i][n] = 0.0;
  }
  for (int j = 0; j < n; ++j) a[n][j] = 1.0;
  a[n][n] = 1.0;

  std::vector<int> pivot_row(n, -1);
  int next_row = 0;
  for (int col = 0; col < n; ++col) {
    int best = -1;
    double best_abs = 0.0;
    for (int r = next_row; r <= n; ++r) {
      if (std::abs(a[r][col]) > best_abs) {
        best_abs = std::abs(a[r][col]);
        best = r;
      }
    }
    if (best < 0 || best_abs < 1e-300)
      throw NumericError("stationary system is singular");
    std::swap(a[best], a[next_row]);
    pivot_row[col] = next_row;
    for (int r = 0; r <= n; ++r) {
      if (r == next_row || a[r][col] == 0.0) continue;
      const double factor = a[r][col] / a[next_row][col];
      for (int c = col; c <= n; ++c) a[r][c] -= factor * a[next_row][c];
      a[r][col] = 0.0;
    }
    ++next_row;
  }

  std::vector<double> pi(n, 0.0);
  for (int col = 0; col < n; ++col) {
    const int r = pivot_row[col];
    pi[col] = a[r][n] / a[r][col];
  }
  // Tiny negative round-off is clamped; anything larger means trouble.
  for (double& x : pi) {
    if (x <= 0.0) {
      if (x < -1e-9) throw NumericError("stationary solve produced a negative entry");
      x = 0.0;
    }
  }
  pi = normalize_vector(pi);
  fix_sum(pi);
  if (residual_l1(pi, p) > residual_tol)
    throw NumericError("stationary solve missed the residual tolerance");
  return pi;
}

std::vector<double> solve_power(const Matrix& p, int max_iter, double residual_tol) {
  const std::size_t n = p.size();
  // Iterate the lazy chain (P + I)/2: same stationary vector, never
  // periodic, geometric convergence.
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n, 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.5 * x[j];
      for (std::size_t i = 0; i < n; ++i) acc += 0.5 * x[i] * p[i][j];
      next[j] = acc;
    }
    double sum = std::accumulate(next.begin(), next.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) x[j] = next[j] / sum;
    if (residual_l1(x, p) <= residual_tol) {
      fix_sum(x);
      return x;
    }
  }
  throw NumericError("power iteration did not converge within max_iter");
}

}  // namespace

std::vector<std::vector<int>> closed_communicating_classes(const Matrix& transition) {
  check_square(transition);
  auto components = strongly_connected_components(transition);
  const int n = static_cast<int>(transition.size());
  std::vector<int> component_of(n, -1);
  for (std::size_t c = 0; c < components.size(); ++c)
    for (int v : components[c]) component_of[v] = static_cast<int>(c);

  std::vector<std::vector<int>> closed;
  for (std::size_t c = 0; c < components.size(); ++c) {
    bool leaves = false;
    for (int v : components[c]) {
      for (int w = 0; w < n && !leaves; ++w)
        if (transition[v][w] > 0.0 && component_of[w] != static_cast<int>(c))
          leaves = true;
      if (leaves) break;
    }
    if (!leaves) closed.push_back(components[c]);
  }
  std::sort(closed.begin(), closed.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return closed;
}

std::vector<double> stationary_distribution(const Matrix& transition,
                                            const StationaryOptions& options) {
  check_square(transition);
  ValidationReport report = validate_matrix(
      transition, transition.size(), transition.size(), 1e-6, "transition");
  if (!report.ok()) throw ValidationError(std::move(report));

  auto closed = closed_communicating_classes(transition);
  if (closed.size() > 1) {
    std::ostringstream msg;
    msg << "stationary distribution is not unique: " << closed.size()
        << " closed classes";
    for (const auto& cls : closed) {
      msg << " {";
      for (std::size_t i = 0; i < cls.size(); ++i)
        msg << (i ? "," : "") << cls[i];
      msg << "}";
    }
    throw NonUniqueStationaryError(msg.str(), std::move(closed));
  }

  switch (options.method) {
    case StationaryMethod::PowerIteration:
      return solve_power(transition, options.max_iter, options.residual_tol);
    case StationaryMethod::LinearSolve:
    default:
      return solve_linear(transition, options.residual_tol);
  }
}

}  // namespace trendhmm
