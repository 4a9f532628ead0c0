#include "trendhmm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trendhmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_observations(const HmmModel& model, const ObservationSequence& obs) {
  if (obs.empty()) throw InputError("observation sequence is empty");
  const int m = model.num_symbols();
  for (std::size_t t = 0; t < obs.size(); ++t)
    if (obs[t] < 0 || obs[t] >= m)
      throw InputError("symbol index " + std::to_string(obs[t]) +
                       " at position " + std::to_string(t) +
                       " is outside the alphabet");
}

// Scaled forward pass. Returns false as soon as a step has zero total
// probability; alpha rows from that step on are zero and scale[t] = 0.
bool forward_scaled(const HmmModel& model, const ObservationSequence& obs,
                    Matrix& alpha, std::vector<double>& scale) {
  const int n = model.num_states();
  const std::size_t t_len = obs.size();
  alpha.assign(t_len, std::vector<double>(n, 0.0));
  scale.assign(t_len, 0.0);

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    alpha[0][i] = model.initial[i] * model.emission[i][obs[0]];
    total += alpha[0][i];
  }
  scale[0] = total;
  if (total <= 0.0) return false;
  for (int i = 0; i < n; ++i) alpha[0][i] /= total;

  for (std::size_t t = 1; t < t_len; ++t) {
    total = 0.0;
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += alpha[t - 1][i] * model.transition[i][j];
      acc *= model.emission[j][obs[t]];
      alpha[t][j] = acc;
      total += acc;
    }
    scale[t] = total;
    if (total <= 0.0) return false;
    for (int j = 0; j < n; ++j) alpha[t][j] /= total;
  }
  return true;
}

double log_from_scale(const std::vector<double>& scale) {
  double ll = 0.0;
  for (double c : scale) {
    if (c <= 0.0) return kNegInf;
    ll += std::log(c);
  }
  return ll;
}

}  // namespace

double forward_log_likelihood(const HmmModel& model, const ObservationSequence& obs) {
  check_observations(model, obs);
  Matrix alpha;
  std::vector<double> scale;
  if (!forward_scaled(model, obs, alpha, scale)) return kNegInf;
  return log_from_scale(scale);
}

ForwardBackward forward_backward(const HmmModel& model, const ObservationSequence& obs) {
  check_observations(model, obs);
  const int n = model.num_states();
  const std::size_t t_len = obs.size();

  ForwardBackward fb;
  if (!forward_scaled(model, obs, fb.alpha, fb.scale))
    throw NumericError("observation sequence has zero probability under the model");
  fb.log_likelihood = log_from_scale(fb.scale);

  // beta[t] shares the forward scaling constants, so
  // sum_i alpha[t][i] * beta[t][i] == 1 at every t.
  fb.beta.assign(t_len, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) fb.beta[t_len - 1][i] = 1.0;
  for (std::size_t t = t_len - 1; t-- > 0;) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        acc += model.transition[i][j] * model.emission[j][obs[t + 1]] *
               fb.beta[t + 1][j];
      fb.beta[t][i] = acc / fb.scale[t + 1];
    }
  }
  return fb;
}

ViterbiResult viterbi_decode(const HmmModel& model, const ObservationSequence& obs) {
  check_observations(model, obs);
  const int n = model.num_states();
  const std::size_t t_len = obs.size();

  Matrix log_a(n, std::vector<double>(n));
  Matrix log_b(n, std::vector<double>(model.num_symbols()));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      log_a[i][j] = model.transition[i][j] > 0.0 ? std::log(model.transition[i][j]) : kNegInf;
    for (int m = 0; m < model.num_symbols(); ++m)
      log_b[i][m] = model.emission[i][m] > 0.0 ? std::log(model.emission[i][m]) : kNegInf;
  }

  Matrix delta(t_len, std::vector<double>(n, kNegInf));
  std::vector<std::vector<int>> backptr(t_len, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) {
    const double lp = model.initial[i] > 0.0 ? std::log(model.initial[i]) : kNegInf;
    delta[0][i] = lp + log_b[i][obs[0]];
  }
  for (std::size_t t = 1; t < t_len; ++t) {
    for (int j = 0; j < n; ++j) {
      double best = kNegInf;
      int best_i = 0;
      for (int i = 0; i < n; ++i) {
        const double cand = delta[t - 1][i] + log_a[i][j];
        if (cand > best) {  // strict: lowest index wins ties
          best = cand;
          best_i = i;
        }
      }
      delta[t][j] = best + log_b[j][obs[t]];
      backptr[t][j] = best_i;
    }
  }

  double best = kNegInf;
  int best_j = 0;
  for (int j = 0; j < n; ++j) {
    if (delta[t_len - 1][j] > best) {
      best = delta[t_len - 1][j];
      best_j = j;
    }
  }
  if (best == kNegInf)
    throw InfeasiblePathError("no feasible state path for this sequence");

  ViterbiResult result;
  result.log_probability = best;
  result.path.assign(t_len, 0);
  result.path[t_len - 1] = best_j;
  for (std::size_t t = t_len - 1; t-- > 0;)
    result.path[t] = backptr[t + 1][result.path[t + 1]];
  return result;
}

BaumWelchResult baum_welch_train(const HmmModel& model, const ObservationSequence& obs,
                                 const BaumWelchConfig& config) {
  require_valid(model, 1e-9);
  check_observations(model, obs);
  if (obs.size() < 2)
    throw InputError("training needs at least 2 observations");
  if (config.floor < 0.0) throw InputError("floor must be non-negative");

  const int n = model.num_states();
  const int m = model.num_symbols();
  const std::size_t t_len = obs.size();

  BaumWelchResult result;
  result.model = model;

  for (int iter = 0; iter < config.max_iter; ++iter) {
    const HmmModel& cur = result.model;
    ForwardBackward fb = forward_backward(cur, obs);
    result.log_likelihood_trace.push_back(fb.log_likelihood);
    if (config.loglik_delta_tol > 0.0 && result.log_likelihood_trace.size() >= 2) {
      const auto& tr = result.log_likelihood_trace;
      if (tr[tr.size() - 1] - tr[tr.size() - 2] < config.loglik_delta_tol) {
        result.log_likelihood_trace.pop_back();  // re-added after the loop
        break;
      }
    }

    // gamma[t][i] = P(state_t = i | O); xi aggregated on the fly.
    Matrix xi_sum(n, std::vector<double>(n, 0.0));
    Matrix gamma(t_len, std::vector<double>(n, 0.0));
    for (std::size_t t = 0; t < t_len; ++t)
      for (int i = 0; i < n; ++i)
        gamma[t][i] = fb.alpha[t][i] * fb.beta[t][i];

    for (std::size_t t = 0; t + 1 < t_len; ++t) {
      for (int i = 0; i < n; ++i) {
        if (fb.alpha[t][i] == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          const double v = fb.alpha[t][i] * cur.transition[i][j] *
                           cur.emission[j][obs[t + 1]] * fb.beta[t + 1][j] /
                           fb.scale[t + 1];
          xi_sum[i][j] += v;
        }
      }
    }

    HmmModel next = cur;
    for (int i = 0; i < n; ++i) {
      double occupancy = 0.0;  // sum_t<T-1 gamma[t][i]
      for (std::size_t t = 0; t + 1 < t_len; ++t) occupancy += gamma[t][i];
      for (int j = 0; j < n; ++j)
        next.transition[i][j] =
            (occupancy > 0.0 ? xi_sum[i][j] / occupancy : cur.transition[i][j]) +
            config.floor;

      double total = 0.0;
      std::vector<double> emit(m, 0.0);
      for (std::size_t t = 0; t < t_len; ++t) {
        emit[obs[t]] += gamma[t][i];
        total += gamma[t][i];
      }
      for (int s = 0; s < m; ++s)
        next.emission[i][s] =
            (total > 0.0 ? emit[s] / total : cur.emission[i][s]) + config.floor;

      next.initial[i] = gamma[0][i];
    }
    next.transition = normalize_rows(next.transition);
    next.emission = normalize_rows(next.emission);
    next.initial = normalize_vector(next.initial);
    result.model = std::move(next);
  }
  // Score the returned model so the trace ends with it.
  result.log_likelihood_trace.push_back(
      forward_log_likelihood(result.model, obs));
  return result;
}

}  // namespace trendhmm
