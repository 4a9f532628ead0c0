#include "trendhmm/market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace trendhmm {

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    start = end + 1;
  }
  // A trailing newline should not look like an extra empty record.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_number(const std::string& field, std::size_t line_no,
                    const char* what) {
  const std::string s = trim(field);
  if (s.empty())
    throw ParseError("line " + std::to_string(line_no) + ": empty " + what);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v))
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse " +
                     what + " '" + s + "'");
  return v;
}

bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::string format_diff(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Linear-interpolation quantile of a sorted sample (the usual "type 7").
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

int bin_of(double x, const std::vector<double>& thresholds) {
  int bin = 0;
  for (double t : thresholds)
    if (x >= t) ++bin;  // boundary belongs to the higher bin
  return bin;
}

}  // namespace

PriceSeries ingest_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("no data rows");

  std::size_t first = 0;
  {
    // Header row is required: "date,close".
    std::string header = trim(lines[0]);
    std::transform(header.begin(), header.end(), header.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
    if (header != "date,close")
      throw ParseError("line 1: expected header 'date,close'");
    first = 1;
  }

  PriceSeries series;
  std::set<std::string> dates;
  for (std::size_t idx = first; idx < lines.size(); ++idx) {
    const std::size_t line_no = idx + 1;
    if (trim(lines[idx]).empty()) continue;
    const std::size_t comma = lines[idx].find(',');
    if (comma == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'date,close'");
    const std::string date = trim(lines[idx].substr(0, comma));
    if (!is_iso_date(date))
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected ISO date YYYY-MM-DD, got '" + date + "'");
    const double close = parse_number(lines[idx].substr(comma + 1), line_no, "close");
    if (close <= 0.0)
      throw ParseError("line " + std::to_string(line_no) + ": close must be positive");
    if (!dates.insert(date).second)
      throw ParseError("line " + std::to_string(line_no) + ": duplicate date " + date);
    series.points.push_back({date, close});
  }
  if (series.points.empty()) throw ParseError("no data rows");
  std::sort(series.points.begin(), series.points.end(),
            [](const PricePoint& a, const PricePoint& b) { return a.date < b.date; });
  return series;
}

PriceSeries ingest_close_column(std::string_view text) {
  const auto lines = split_lines(text);
  PriceSeries series;
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    if (trim(lines[idx]).empty()) continue;
    const double close = parse_number(lines[idx], idx + 1, "close");
    if (close <= 0.0)
      throw ParseError("line " + std::to_string(idx + 1) + ": close must be positive");
    series.points.push_back({std::to_string(series.points.size() + 1), close});
  }
  if (series.points.empty()) throw ParseError("no data rows");
  return series;
}

DiffSeries difference(const PriceSeries& series, int k) {
  if (k < 1) throw InputError("lag k must be at least 1");
  if (series.size() <= static_cast<std::size_t>(k))
    throw InputError("lag " + std::to_string(k) + " needs more than " +
                     std::to_string(k) + " data points, got " +
                     std::to_string(series.size()));
  DiffSeries diffs;
  diffs.k = k;
  for (std::size_t t = k; t < series.size(); ++t)
    diffs.values.push_back({series.points[t].date,
                            series.points[t].close - series.points[t - k].close});
  return diffs;
}

SymbolizeResult symbolize(const DiffSeries& diffs, ZeroPolicy policy) {
  const SymbolAlphabet alphabet = SymbolAlphabet::increase_decrease();
  const int increase = alphabet.index_of("I");
  const int decrease = alphabet.index_of("D");
  SymbolizeResult result;
  for (std::size_t t = 0; t < diffs.size(); ++t) {
    const double d = diffs.values[t].diff;
    if (d > 0.0) {
      result.symbols.push_back(increase);
    } else if (d < 0.0) {
      result.symbols.push_back(decrease);
    } else {
      switch (policy) {
        case ZeroPolicy::MapToDecrease:
          result.symbols.push_back(decrease);
          break;
        case ZeroPolicy::MapToIncrease:
          result.symbols.push_back(increase);
          break;
        case ZeroPolicy::Reject:
          throw InputError("zero difference at " + diffs.values[t].date +
                           " with zero_policy = reject");
      }
      ++result.zero_count;
    }
  }
  return result;
}

std::vector<double> binning_thresholds(const DiffSeries& diffs, const BinningSpec& spec) {
  if (diffs.size() == 0) throw InputError("no differences to bin");
  switch (spec.mode) {
    case BinningMode::Explicit: {
      if (spec.thresholds.size() != kTrendBins - 1)
        throw InputError("explicit binning needs exactly 5 thresholds");
      for (std::size_t i = 1; i < spec.thresholds.size(); ++i)
        if (!(spec.thresholds[i - 1] < spec.thresholds[i]))
          throw InputError("explicit thresholds must be strictly ascending");
      return spec.thresholds;
    }
    case BinningMode::EqualWidth: {
      double lo = diffs.values[0].diff, hi = diffs.values[0].diff;
      for (const auto& v : diffs.values) {
        lo = std::min(lo, v.diff);
        hi = std::max(hi, v.diff);
      }
      if (lo == hi)
        throw InputError("equal-width binning needs non-constant differences");
      const double width = (hi - lo) / kTrendBins;
      std::vector<double> cuts;
      for (int i = 1; i < kTrendBins; ++i) cuts.push_back(lo + width * i);
      return cuts;
    }
    case BinningMode::Quantile: {
      std::vector<double> sorted;
      sorted.reserve(diffs.size());
      for (const auto& v : diffs.values) sorted.push_back(v.diff);
      std::sort(sorted.begin(), sorted.end());
      if (sorted.front() == sorted.back())
        throw InputError("quantile binning needs non-constant differences");
      std::vector<double> cuts;
      for (int i = 1; i < kTrendBins; ++i)
        cuts.push_back(quantile_sorted(sorted, static_cast<double>(i) / kTrendBins));
      return cuts;
    }
  }
  throw InputError("unknown binning mode");
}

StateSequence assign_states(const DiffSeries& diffs, const BinningSpec& spec) {
  const std::vector<double> cuts = binning_thresholds(diffs, spec);
  StateSequence states;
  states.reserve(diffs.size());
  for (const auto& v : diffs.values) states.push_back(bin_of(v.diff, cuts));
  return states;
}

LabeledSeries label_series(const PriceSeries& series, int k, const BinningSpec& spec) {
  LabeledSeries labeled;
  labeled.diffs = difference(series, k);
  labeled.binning = spec;
  labeled.resolved_thresholds = binning_thresholds(labeled.diffs, spec);
  SymbolizeResult sym = symbolize(labeled.diffs, spec.zero_policy);
  labeled.symbols = std::move(sym.symbols);
  labeled.zero_count = sym.zero_count;
  labeled.states = assign_states(labeled.diffs, spec);
  return labeled;
}

EstimateResult estimate(const StateSequence& states, const ObservationSequence& symbols,
                        const StateSpace& space, const SymbolAlphabet& alphabet,
                        double alpha, EmissionPairing pairing) {
  if (states.size() != symbols.size())
    throw InputError("state and symbol sequences differ in length");
  if (states.size() < 2) throw InputError("need at least 2 labeled steps");
  if (alpha < 0.0) throw InputError("smoothing must be non-negative");
  const int n = space.size();
  const int m = alphabet.size();
  for (int s : states)
    if (s < 0 || s >= n) throw InputError("state index out of range");
  for (int s : symbols)
    if (s < 0 || s >= m) throw InputError("symbol index out of range");

  EstimateResult result;
  result.counts.smoothing = alpha;
  result.counts.transition_counts.assign(n, std::vector<long long>(n, 0));
  result.counts.emission_counts.assign(n, std::vector<long long>(m, 0));
  result.counts.initial_counts.assign(n, 0);

  for (std::size_t t = 0; t + 1 < states.size(); ++t)
    ++result.counts.transition_counts[states[t]][states[t + 1]];
  if (pairing == EmissionPairing::SameStep) {
    for (std::size_t t = 0; t < states.size(); ++t)
      ++result.counts.emission_counts[states[t]][symbols[t]];
  } else {
    for (std::size_t t = 0; t + 1 < states.size(); ++t)
      ++result.counts.emission_counts[states[t]][symbols[t + 1]];
  }
  for (std::size_t t = 0; t < states.size(); ++t)
    ++result.counts.initial_counts[states[t]];

  HmmModel model;
  model.states = space;
  model.alphabet = alphabet;
  model.transition.assign(n, std::vector<double>(n, 0.0));
  model.emission.assign(n, std::vector<double>(m, 0.0));
  model.initial.assign(n, 0.0);

  auto fill_rows = [alpha](const std::vector<std::vector<long long>>& counts,
                           Matrix& probs, std::vector<int>* empty_rows) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      long long total = 0;
      for (long long c : counts[i]) total += c;
      const std::size_t width = counts[i].size();
      const double denom = static_cast<double>(total) + alpha * width;
      if (denom > 0.0) {
        for (std::size_t j = 0; j < width; ++j)
          probs[i][j] = (static_cast<double>(counts[i][j]) + alpha) / denom;
      } else {
        // Never visited and no smoothing: keep the model usable.
        for (std::size_t j = 0; j < width; ++j)
          probs[i][j] = 1.0 / static_cast<double>(width);
        if (empty_rows) empty_rows->push_back(static_cast<int>(i));
      }
    }
  };
  fill_rows(result.counts.transition_counts, model.transition,
            &result.unvisited_states);
  std::vector<int> empty_emission;
  fill_rows(result.counts.emission_counts, model.emission, &empty_emission);
  for (int i : empty_emission)
    if (std::find(result.unvisited_states.begin(), result.unvisited_states.end(), i) ==
        result.unvisited_states.end())
      result.unvisited_states.push_back(i);
  std::sort(result.unvisited_states.begin(), result.unvisited_states.end());

  for (int i = 0; i < n; ++i)
    model.initial[i] = static_cast<double>(result.counts.initial_counts[i]) /
                       static_cast<double>(states.size());

  model.transition = normalize_rows(model.transition);
  model.emission = normalize_rows(model.emission);
  model.initial = normalize_vector(model.initial);
  result.model = std::move(model);
  return result;
}

Matrix joint_transition_table(const HmmModel& model, const CountedEstimate& counts) {
  const int n = model.num_states();
  const int m = model.num_symbols();
  if (static_cast<int>(counts.emission_counts.size()) != n)
    throw DimensionError("counts do not match the model's state count");
  for (const auto& row : counts.emission_counts)
    if (static_cast<int>(row.size()) != m)
      throw DimensionError("counts do not match the model's alphabet size");

  Matrix table(n, std::vector<double>(n * m, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double mass = model.transition[i][j];
      if (mass == 0.0) continue;
      long long total = 0;
      for (long long c : counts.emission_counts[j]) total += c;
      for (int s = 0; s < m; ++s) {
        const double share =
            total > 0 ? static_cast<double>(counts.emission_counts[j][s]) /
                            static_cast<double>(total)
                      : model.emission[j][s];
        table[i][j * m + s] = mass * share;
      }
    }
  }
  return table;
}

std::string labeled_series_to_csv(const LabeledSeries& series,
                                  const SymbolAlphabet& alphabet) {
  std::ostringstream out;
  out << "date,diff,symbol,state\n";
  for (std::size_t t = 0; t < series.diffs.size(); ++t) {
    out << series.diffs.values[t].date << ',' << format_diff(series.diffs.values[t].diff)
        << ',' << alphabet.symbols.at(series.symbols[t]) << ",S"
        << series.states[t] + 1 << '\n';
  }
  return out.str();
}

LabeledSeries labeled_series_from_csv(std::string_view text, const StateSpace& space,
                                      const SymbolAlphabet& alphabet) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("no data rows");
  {
    std::string header = trim(lines[0]);
    header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
    if (header != "date,diff,symbol,state")
      throw ParseError("line 1: expected header 'date,diff,symbol,state'");
  }
  LabeledSeries series;
  for (std::size_t idx = 1; idx < lines.size(); ++idx) {
    const std::size_t line_no = idx + 1;
    if (trim(lines[idx]).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(lines[idx]);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 4)
      throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields");
    series.diffs.values.push_back(
        {trim(fields[0]), parse_number(fields[1], line_no, "diff")});
    const int sym = alphabet.index_of(trim(fields[2]));
    if (sym < 0)
      throw ParseError("line " + std::to_string(line_no) + ": unknown symbol '" +
                       trim(fields[2]) + "'");
    series.symbols.push_back(sym);
    const std::string token = trim(fields[3]);
    int state = -1;
    if (token.size() >= 2 && (token[0] == 'S' || token[0] == 's')) {
      char* end = nullptr;
      const long v = std::strtol(token.c_str() + 1, &end, 10);
      if (end == token.c_str() + token.size() && v >= 1 && v <= space.size())
        state = static_cast<int>(v - 1);
    }
    if (state < 0) state = space.index_of(token);
    if (state < 0)
      throw ParseError("line " + std::to_string(line_no) + ": unknown state '" +
                       token + "'");
    series.states.push_back(state);
  }
  if (series.states.empty()) throw ParseError("no data rows");
  return series;
}

}  // namespace trendhmm
