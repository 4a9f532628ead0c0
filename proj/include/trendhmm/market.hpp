#ifndef TRENDHMM_MARKET_HPP
#define TRENDHMM_MARKET_HPP

#include <string>
#include <string_view>
#include <vector>

#include "trendhmm/inference.hpp"
#include "trendhmm/model.hpp"

namespace trendhmm {

struct PricePoint {
  std::string date;  // ISO-8601 for CSV input, 1-based row number otherwise
  double close = 0.0;
};

struct PriceSeries {
  std::vector<PricePoint> points;
  std::size_t size() const { return points.size(); }
};

struct DiffPoint {
  std::string date;
  double diff = 0.0;  // close_t - close_{t-k}
};

struct DiffSeries {
  int k = 1;
  std::vector<DiffPoint> values;
  std::size_t size() const { return values.size(); }
};

enum class ZeroPolicy {
  MapToDecrease,  // default: a flat day counts as a non-increase
  MapToIncrease,
  Reject,
};

struct SymbolizeResult {
  ObservationSequence symbols;  // indices into the I/D alphabet
  int zero_count = 0;           // flat days absorbed by the policy
};

enum class BinningMode { EqualWidth, Quantile, Explicit };

// Maps a difference to one of the six trend levels. Bins are ordered most
// negative (S1) to most positive (S6); a boundary value belongs to the
// higher bin, and the top bin is closed above.
struct BinningSpec {
  BinningMode mode = BinningMode::EqualWidth;
  std::vector<double> thresholds;  // 5 ascending cut points, Explicit only
  ZeroPolicy zero_policy = ZeroPolicy::MapToDecrease;
};

inline constexpr int kTrendBins = 6;

struct LabeledSeries {
  DiffSeries diffs;
  ObservationSequence symbols;
  StateSequence states;
  BinningSpec binning;
  std::vector<double> resolved_thresholds;  // the 5 cut points actually used
  int zero_count = 0;
};

// Which symbol a state's emission counts pair with.
enum class EmissionPairing {
  SameStep,  // (state_t, symbol_t) — default
  NextStep,  // (state_t, symbol_{t+1})
};

struct CountedEstimate {
  std::vector<std::vector<long long>> transition_counts;  // N x N
  std::vector<std::vector<long long>> emission_counts;    // N x M
  std::vector<long long> initial_counts;                  // occupancy, length N
  double smoothing = 0.0;
};

struct EstimateResult {
  CountedEstimate counts;
  HmmModel model;
  std::vector<int> unvisited_states;  // rows forced uniform under alpha = 0
};

// CSV with header "date,close"; rows are re-sorted by date. Duplicate
// dates, non-positive closes and unparseable rows raise ParseError with
// the offending line number.
PriceSeries ingest_csv(std::string_view text);

// Headerless single column of close values, one per line; the row number
// stands in for the date.
PriceSeries ingest_close_column(std::string_view text);

DiffSeries difference(const PriceSeries& series, int k);

SymbolizeResult symbolize(const DiffSeries& diffs,
                          ZeroPolicy policy = ZeroPolicy::MapToDecrease);

// The five cut points this binning resolves to for this data (EqualWidth
// and Quantile need non-constant diffs).
std::vector<double> binning_thresholds(const DiffSeries& diffs, const BinningSpec& spec);

StateSequence assign_states(const DiffSeries& diffs, const BinningSpec& spec);

LabeledSeries label_series(const PriceSeries& series, int k, const BinningSpec& spec);

// Counting estimator. Row i of the transition matrix is
// (counts + alpha) / (total + alpha N); emission rows likewise with M.
// A state never visited gets a uniform row under alpha = 0 and is listed
// in unvisited_states. The initial distribution is the occupancy frequency.
EstimateResult estimate(const StateSequence& states, const ObservationSequence& symbols,
                        const StateSpace& space, const SymbolAlphabet& alphabet,
                        double alpha, EmissionPairing pairing = EmissionPairing::SameStep);

// N x (N*M) table: entry (i, j*M + m) is the probability of moving from
// state i to state j with the step's emission being symbol m. Transition
// mass is split by the destination state's counted symbol frequency (its
// model emission row when the destination was never visited). Row sums
// equal the transition row sums.
Matrix joint_transition_table(const HmmModel& model, const CountedEstimate& counts);

// "date,diff,symbol,state" with states written as S1..SN tokens.
std::string labeled_series_to_csv(const LabeledSeries& series,
                                  const SymbolAlphabet& alphabet);
LabeledSeries labeled_series_from_csv(std::string_view text, const StateSpace& space,
                                      const SymbolAlphabet& alphabet);

}  // namespace trendhmm

#endif  // TRENDHMM_MARKET_HPP
