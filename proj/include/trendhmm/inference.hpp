#ifndef TRENDHMM_INFERENCE_HPP
#define TRENDHMM_INFERENCE_HPP

#include <vector>

#include "trendhmm/model.hpp"

namespace trendhmm {

using ObservationSequence = std::vector<int>;  // indices into the alphabet
using StateSequence = std::vector<int>;        // indices into the state space

// Scaled forward-backward variables. alpha[t] is normalized to sum 1 and
// scale[t] holds the pre-normalization mass, so
//   log P(O | lambda) = sum_t log scale[t]
// and sum_i alpha[t][i] * beta[t][i] == 1 for every t.
struct ForwardBackward {
  Matrix alpha;               // T x N
  Matrix beta;                // T x N
  std::vector<double> scale;  // length T
  double log_likelihood = 0.0;
};

// log P(O | lambda); -inf when the sequence is impossible under the model.
double forward_log_likelihood(const HmmModel& model, const ObservationSequence& obs);

// Throws NumericError when P(O | lambda) = 0 (the backward variables are
// undefined in that case).
ForwardBackward forward_backward(const HmmModel& model, const ObservationSequence& obs);

struct ViterbiResult {
  StateSequence path;
  double log_probability;  // joint log P(path, O | lambda)
};

// Most probable state path; ties resolved toward the lowest state index at
// every backtrack step. Throws InfeasiblePathError when every path has
// probability zero.
ViterbiResult viterbi_decode(const HmmModel& model, const ObservationSequence& obs);

struct BaumWelchConfig {
  int max_iter = 100;
  double loglik_delta_tol = 0.0;  // 0 disables the early stop
  double floor = 0.0;  // added to re-estimated rows before normalization
};

struct BaumWelchResult {
  HmmModel model;
  // trace[0] is the initial model's log-likelihood; the last entry scores
  // the returned model. Non-decreasing up to numerical slack.
  std::vector<double> log_likelihood_trace;
};

BaumWelchResult baum_welch_train(const HmmModel& model, const ObservationSequence& obs,
                                 const BaumWelchConfig& config = {});

}  // namespace trendhmm

#endif  // TRENDHMM_INFERENCE_HPP
