#ifndef TRENDHMM_TREND_HPP
#define TRENDHMM_TREND_HPP

#include <string>
#include <string_view>
#include <vector>

#include "trendhmm/generate.hpp"
#include "trendhmm/inference.hpp"
#include "trendhmm/model.hpp"
#include "trendhmm/stationary.hpp"

namespace trendhmm {

struct CandidateSet {
  std::vector<StateSequence> sequences;  // equal lengths, >= 2 sequences
  std::vector<std::string> labels;       // one per sequence
};

// Positional match proportion: |{t : a_t == b_t}| / L. A similarity in
// [0,1], symmetric, 1 on identical sequences; equals 1 minus the
// normalized Hamming distance.
double compare_sequences(const StateSequence& a, const StateSequence& b);

struct FitnessRow {
  std::string label;
  double compare_sum = 0.0;  // sum of compare against every other sequence
  double fitness = 0.0;      // 1 / compare_sum; +inf sentinel when sum is 0
  bool infinite = false;
};

struct FitnessResult {
  std::vector<FitnessRow> rows;  // input order
  std::vector<int> ranking;      // indices, best fitness first
};

// Highest fitness ranks first: the winning sequence is the one least
// similar to the rest of the candidate set, not the most likely one.
FitnessResult fitness_table(const CandidateSet& set);

struct OptimumSearch {
  GeneratedPath best;
  double best_log_probability = 0.0;
  // Best-so-far joint log-probability after each block of trials.
  std::vector<double> trace;
};

// Best-of-N seeded sampling ranked by joint path log-probability. Trial t
// draws from derive_seed(rng.seed, t), so the result is deterministic and
// non-decreasing in `trials` for a fixed base seed. Earliest trial wins ties.
OptimumSearch find_optimum_sequence(const HmmModel& model, int length, int trials,
                                    const RngSpec& rng, bool include_start);

struct TrendRow {
  std::string state;
  double probability = 0.0;
  double percent = 0.0;
};

struct TrendReport {
  std::string label;
  std::vector<TrendRow> rows;
  int dominant_state = 0;  // argmax probability, lowest index on ties
};

// Steady-state probabilities of the model's transition matrix read as
// long-run trend percentages. Propagates NonUniqueStationaryError.
TrendReport trend_report(const HmmModel& model, std::string_view label,
                         const StationaryOptions& options = {});

// Aligned-column text, 2 decimals. When reference_sums is given, rows whose
// compare sum differs from the reference by more than reference_tol are
// flagged in a trailing column.
std::string render_fitness_text(const FitnessResult& result,
                                const std::vector<double>* reference_sums = nullptr,
                                double reference_tol = 0.01);
std::string render_trend_text(const TrendReport& report);

}  // namespace trendhmm

#endif  // TRENDHMM_TREND_HPP
