#include <doctest.h>

#include <cmath>
#include <random>

#include "reference_data.hpp"
#include "trendhmm/generate.hpp"
#include "trendhmm/market.hpp"

using namespace trendhmm;

namespace {

const StateSpace kSix = StateSpace::six_level();
const SymbolAlphabet kId = SymbolAlphabet::increase_decrease();

DiffSeries diffs_from(const std::vector<double>& values) {
  DiffSeries diffs;
  for (std::size_t i = 0; i < values.size(); ++i)
    diffs.values.push_back({std::to_string(i + 1), values[i]});
  return diffs;
}

}  // namespace

TEST_CASE("ingest_csv parses, sorts and validates") {
  const PriceSeries two = ingest_csv("date,close\n2011-03-01,77.91\n2011-03-02,77.39\n");
  REQUIRE(two.size() == 2);
  CHECK(two.points[0].close == 77.91);

  // Out-of-order rows are re-sorted by date.
  const PriceSeries sorted =
      ingest_csv("date,close\n2011-03-02,77.39\n2011-03-01,77.91\n");
  CHECK(sorted.points[0].date == "2011-03-01");

  CHECK_THROWS_AS(ingest_csv(""), ParseError);
  CHECK_THROWS_AS(ingest_csv("date,close\n"), ParseError);
  CHECK_THROWS_WITH_AS(ingest_csv("date,close\n2011-03-01,abc\n"),
                       doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_WITH_AS(
      ingest_csv("date,close\n2011-03-01,77.91\n2011-03-01,77.39\n"),
      doctest::Contains("duplicate date"), ParseError);
  CHECK_THROWS_AS(ingest_csv("date,close\n2011-03-01,-3\n"), ParseError);
  CHECK_THROWS_AS(ingest_csv("close\n77.91\n"), ParseError);
}

TEST_CASE("close-column ingestion numbers the rows") {
  const PriceSeries series = ingest_close_column("77.91\n77.39\n76.5\n");
  REQUIRE(series.size() == 3);
  CHECK(series.points[2].date == "3");
  CHECK_THROWS_AS(ingest_close_column("\n\n"), ParseError);
}

TEST_CASE("difference lags and lengths") {
  PriceSeries series;
  for (std::size_t i = 0; i < refdata::kCloses.size(); ++i)
    series.points.push_back({std::to_string(i + 1), refdata::kCloses[i]});

  const DiffSeries one = difference(series, 1);
  REQUIRE(one.size() == 19);
  CHECK(one.values[0].diff == doctest::Approx(-0.52).epsilon(1e-12));

  const DiffSeries six = difference(series, 6);
  REQUIRE(six.size() == 14);
  CHECK(six.values[0].diff == doctest::Approx(1.6).epsilon(1e-12));

  PriceSeries flat;
  for (int i = 0; i < 5; ++i) flat.points.push_back({std::to_string(i + 1), 10.0});
  for (const auto& v : difference(flat, 2).values) CHECK(v.diff == 0.0);

  CHECK_THROWS_AS(difference(flat, 5), InputError);
  CHECK_THROWS_AS(difference(flat, 0), InputError);
}

TEST_CASE("symbolize matches the published one-day symbols") {
  PriceSeries series;
  for (std::size_t i = 0; i < refdata::kCloses.size(); ++i)
    series.points.push_back({std::to_string(i + 1), refdata::kCloses[i]});
  const SymbolizeResult result = symbolize(difference(series, 1));
  REQUIRE(result.symbols.size() == 19);
  CHECK(result.zero_count == 0);
  std::string rendered;
  for (int s : result.symbols) rendered += kId.symbols[s];
  CHECK(rendered == refdata::kDiffColumns[0].symbols);
}

TEST_CASE("symbolize is sign-consistent on random diffs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  std::vector<double> values(200);
  for (double& v : values) v = unit(rng);
  values[50] = 0.0;
  const DiffSeries diffs = diffs_from(values);
  const SymbolizeResult result = symbolize(diffs);
  for (std::size_t t = 0; t < values.size(); ++t) {
    const bool increase = result.symbols[t] == 0;
    CHECK(increase == (values[t] > 0.0));  // zeros fall to D by default
  }
  CHECK(result.zero_count == 1);
}

TEST_CASE("zero differences follow the configured policy") {
  const DiffSeries diffs = diffs_from({0.5, 0.0, -0.5});
  const SymbolizeResult fell = symbolize(diffs, ZeroPolicy::MapToDecrease);
  CHECK(fell.symbols == ObservationSequence{0, 1, 1});
  CHECK(fell.zero_count == 1);
  const SymbolizeResult rose = symbolize(diffs, ZeroPolicy::MapToIncrease);
  CHECK(rose.symbols == ObservationSequence{0, 0, 1});
  CHECK_THROWS_AS(symbolize(diffs, ZeroPolicy::Reject), InputError);
}

TEST_CASE("five-day symbols: first is I, fifth-to-last stretch matches") {
  PriceSeries series;
  for (std::size_t i = 0; i < refdata::kCloses.size(); ++i)
    series.points.push_back({std::to_string(i + 1), refdata::kCloses[i]});
  const SymbolizeResult result = symbolize(difference(series, 5));
  CHECK(result.symbols[0] == 0);   // 1.42 -> I
  CHECK(result.symbols[5] == 1);   // -0.26 -> D
}

TEST_CASE("equal-width binning of the one-day extremes") {
  const DiffSeries diffs = diffs_from(refdata::kDiffColumns[0].diffs);
  BinningSpec spec;  // EqualWidth
  const auto cuts = binning_thresholds(diffs, spec);
  REQUIRE(cuts.size() == 5);
  // Span [-2.2, 1.88] gives width 0.68.
  CHECK(cuts[0] == doctest::Approx(-2.2 + 0.68).epsilon(1e-12));
  const StateSequence states = assign_states(diffs, spec);
  CHECK(states[18] == 0);  // -2.20 -> S1
  CHECK(states[4] == 5);   //  1.88 -> S6
}

TEST_CASE("explicit thresholds place diffs in interval order") {
  const DiffSeries diffs = diffs_from({-0.52, 1.59, -2.5, 2.5, -1.0, 1.0});
  BinningSpec spec;
  spec.mode = BinningMode::Explicit;
  spec.thresholds = {-2, -1, 0, 1, 2};
  const StateSequence states = assign_states(diffs, spec);
  CHECK(states[0] == 2);  // -0.52 -> S3
  CHECK(states[1] == 4);  //  1.59 -> S5
  CHECK(states[2] == 0);
  CHECK(states[3] == 5);
  // Boundary values go to the higher bin.
  CHECK(states[4] == 2);  // -1.0 lands in [-1, 0)
  CHECK(states[5] == 4);  //  1.0 lands in [1, 2)
}

TEST_CASE("binning rejects degenerate and malformed specs") {
  BinningSpec quantile;
  quantile.mode = BinningMode::Quantile;
  CHECK_THROWS_AS(assign_states(diffs_from({1, 1, 1, 1, 1, 1}), quantile), InputError);
  BinningSpec width;  // EqualWidth
  CHECK_THROWS_AS(assign_states(diffs_from({2, 2}), width), InputError);
  BinningSpec bad;
  bad.mode = BinningMode::Explicit;
  bad.thresholds = {1, 2, 3};
  CHECK_THROWS_AS(assign_states(diffs_from({1, 2}), bad), InputError);
  bad.thresholds = {1, 2, 3, 3, 4};
  CHECK_THROWS_AS(assign_states(diffs_from({1, 2}), bad), InputError);
}

TEST_CASE("assign_states is total and order-preserving") {
  const DiffSeries diffs = diffs_from(refdata::kDiffColumns[0].diffs);
  for (const BinningMode mode : {BinningMode::EqualWidth, BinningMode::Quantile}) {
    BinningSpec spec;
    spec.mode = mode;
    const StateSequence states = assign_states(diffs, spec);
    REQUIRE(states.size() == diffs.size());
    for (std::size_t a = 0; a < diffs.size(); ++a)
      for (std::size_t b = 0; b < diffs.size(); ++b)
        if (diffs.values[a].diff < diffs.values[b].diff)
          CHECK(states[a] <= states[b]);
  }
}

TEST_CASE("estimate counts transitions the obvious way") {
  StateSpace two;
  two.names = {"A", "B"};
  const EstimateResult result =
      estimate({0, 0, 1}, {0, 1, 0}, two, kId, 0.0);
  CHECK(result.model.transition[0] == std::vector<double>{0.5, 0.5});
  CHECK(result.counts.transition_counts[0][0] == 1);
  CHECK(result.counts.transition_counts[0][1] == 1);
  CHECK(result.counts.initial_counts == std::vector<long long>{2, 1});
  CHECK(result.model.initial[0] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("estimate reproduces the one-day S5 row shape") {
  // S5 visited four times: one move to S1, one to S2, two to S3.
  const StateSequence states = {4, 0, 4, 1, 4, 2, 4, 2, 2};
  const ObservationSequence symbols = {1, 1, 1, 0, 1, 0, 1, 0, 0};
  const EstimateResult result = estimate(states, symbols, kSix, kId, 0.0);
  const auto& row = result.model.transition[4];
  CHECK(row[0] == doctest::Approx(0.25));
  CHECK(row[1] == doctest::Approx(0.25));
  CHECK(row[2] == doctest::Approx(0.5));
  CHECK(row[3] == 0.0);
  CHECK(validate_model(result.model, 1e-9).ok());
  // S4 and S6 never appear, so their rows are uniform and flagged.
  CHECK(result.unvisited_states == std::vector<int>{3, 5});
  CHECK(result.model.transition[3][0] == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("estimate count totals and smoothing") {
  const StateSequence states = {0, 1, 0, 1, 1};
  const ObservationSequence symbols = {0, 1, 0, 1, 0};
  StateSpace two;
  two.names = {"A", "B"};
  const EstimateResult plain = estimate(states, symbols, two, kId, 0.0);
  long long transition_total = 0, emission_total = 0;
  for (const auto& row : plain.counts.transition_counts)
    for (long long c : row) transition_total += c;
  for (const auto& row : plain.counts.emission_counts)
    for (long long c : row) emission_total += c;
  CHECK(transition_total == 4);  // length - 1
  CHECK(emission_total == 5);    // length

  const EstimateResult smoothed = estimate(states, symbols, two, kId, 1.0);
  // (count + 1) / (total + 2): A -> A is (0 + 1) / (2 + 2).
  CHECK(smoothed.model.transition[0][0] == doctest::Approx(0.25));
  CHECK(validate_model(smoothed.model, 1e-9).ok());

  CHECK_THROWS_AS(estimate({0}, {0, 1}, two, kId, 0.0), InputError);
  CHECK_THROWS_AS(estimate({0}, {0}, two, kId, 0.0), InputError);
}

TEST_CASE("structural zeros in counts stay zero under alpha 0") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> state(0, 3), symbol(0, 1);
  StateSequence states;
  ObservationSequence symbols;
  for (int t = 0; t < 40; ++t) {
    states.push_back(state(rng));
    symbols.push_back(symbol(rng));
  }
  StateSpace four;
  four.names = {"a", "b", "c", "d"};
  const EstimateResult result = estimate(states, symbols, four, kId, 0.0);
  CHECK(validate_model(result.model, 1e-9).ok());
  for (int i = 0; i < 4; ++i) {
    long long row_total = 0;
    for (long long c : result.counts.transition_counts[i]) row_total += c;
    if (row_total == 0) continue;  // uniform fallback row
    for (int j = 0; j < 4; ++j)
      if (result.counts.transition_counts[i][j] == 0)
        CHECK(result.model.transition[i][j] == 0.0);
  }
}

TEST_CASE("next-step pairing shifts the emission counts") {
  StateSpace two;
  two.names = {"A", "B"};
  const StateSequence states = {0, 1, 0};
  const ObservationSequence symbols = {0, 1, 1};
  const EstimateResult next =
      estimate(states, symbols, two, kId, 0.0, EmissionPairing::NextStep);
  // A pairs with symbols at t+1 of its two visits at t=0, t=2 -> only t=0 counts.
  CHECK(next.counts.emission_counts[0][1] == 1);
  CHECK(next.counts.emission_counts[0][0] == 0);
  CHECK(next.counts.emission_counts[1][1] == 1);
}

TEST_CASE("joint table splits the S3 row by destination symbol frequency") {
  // Sign-consistent labeling: low states always emit D, high states I.
  // Seven S3 visits moving once to S2, once to S3, four times to S5 and
  // once to S6 reproduce the published one-day row.
  const StateSequence states = {2, 1, 2, 2, 4, 2, 4, 2, 4, 2, 4, 2, 5, 2};
  ObservationSequence symbols;
  for (int s : states) symbols.push_back(s <= 2 ? 1 : 0);  // I=0, D=1
  const EstimateResult result = estimate(states, symbols, kSix, kId, 0.0);

  CHECK(result.counts.transition_counts[2][1] == 1);
  CHECK(result.counts.transition_counts[2][2] == 1);
  CHECK(result.counts.transition_counts[2][4] == 4);
  CHECK(result.counts.transition_counts[2][5] == 1);

  const Matrix table = joint_transition_table(result.model, result.counts);
  const int m = 2;
  CHECK(table[2][1 * m + 1] == doctest::Approx(0.1429).epsilon(1e-2));  // (S2,D)
  CHECK(table[2][2 * m + 1] == doctest::Approx(0.1429).epsilon(1e-2));  // (S3,D)
  CHECK(table[2][4 * m + 0] == doctest::Approx(0.5714).epsilon(1e-2));  // (S5,I)
  CHECK(table[2][5 * m + 0] == doctest::Approx(0.1429).epsilon(1e-2));  // (S6,I)
  CHECK(table[2][4 * m + 1] == 0.0);  // no D mass on the S5 move

  double row_sum = 0.0;
  for (double v : table[2]) row_sum += v;
  CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("joint table of a deterministic chain has one 1 per row") {
  StateSpace two;
  two.names = {"A", "B"};
  const EstimateResult result =
      estimate({0, 1, 0, 1, 0}, {0, 1, 0, 1, 0}, two, kId, 0.0);
  const Matrix table = joint_transition_table(result.model, result.counts);
  for (const auto& row : table) {
    int ones = 0;
    for (double v : row) {
      if (v == doctest::Approx(1.0)) ++ones;
      else CHECK(v == doctest::Approx(0.0));
    }
    CHECK(ones == 1);
  }
}

TEST_CASE("joint table row sums equal 1 for random counted estimates") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> state(0, 5), symbol(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    StateSequence states;
    ObservationSequence symbols;
    for (int t = 0; t < 60; ++t) {
      states.push_back(state(rng));
      symbols.push_back(symbol(rng));
    }
    const EstimateResult result = estimate(states, symbols, kSix, kId, 0.0);
    const Matrix table = joint_transition_table(result.model, result.counts);
    for (const auto& row : table) {
      double sum = 0.0;
      for (double v : row) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("labeled series round-trips through csv") {
  PriceSeries series;
  for (std::size_t i = 0; i < refdata::kCloses.size(); ++i)
    series.points.push_back({std::to_string(i + 1), refdata::kCloses[i]});
  const LabeledSeries labeled = label_series(series, 1, BinningSpec{});
  const std::string csv = labeled_series_to_csv(labeled, kId);
  const LabeledSeries back = labeled_series_from_csv(csv, kSix, kId);
  CHECK(back.states == labeled.states);
  CHECK(back.symbols == labeled.symbols);
  REQUIRE(back.diffs.size() == labeled.diffs.size());
  for (std::size_t t = 0; t < labeled.diffs.size(); ++t)
    CHECK(back.diffs.values[t].diff == labeled.diffs.values[t].diff);
}

TEST_CASE("estimation recovers the generating model from a long path") {
  const HmmModel truth = refdata::reference_model(0);
  const GeneratedPath path = generate(truth, 100000, RngSpec{31337});
  const EstimateResult result =
      estimate(path.states, path.symbols, truth.states, truth.alphabet, 0.0);
  CHECK(result.unvisited_states.empty());
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j)
      CHECK(std::abs(result.model.transition[i][j] - truth.transition[i][j]) <= 0.02);
    for (int s = 0; s < 2; ++s)
      CHECK(std::abs(result.model.emission[i][s] - truth.emission[i][s]) <= 0.02);
  }
}
