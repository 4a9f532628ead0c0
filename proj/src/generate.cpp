#include "trendhmm/generate.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

namespace trendhmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Explicit 53-bit mapping to [0,1); std::uniform_real_distribution is not
// pinned down by the standard, the engine itself is.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw over one stochastic row. Never returns an index with
// zero probability.
int sample_row(std::mt19937_64& rng, const std::vector<double>& row) {
  const double u = next_uniform(rng);
  double acc = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] <= 0.0) continue;
    acc += row[i];
    last_positive = static_cast<int>(i);
    if (u < acc) return last_positive;
  }
  if (last_positive < 0) throw NumericError("cannot sample from a zero row");
  return last_positive;  // row sum rounded just below 1
}

void check_rng(const RngSpec& rng) {
  if (rng.algorithm != kRngAlgorithm)
    throw InputError("unknown rng algorithm '" + rng.algorithm + "' (expected '" +
                     kRngAlgorithm + "')");
}

double log_factor(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GeneratedPath generate(const HmmModel& model, int length, const RngSpec& rng,
                       bool include_start) {
  check_rng(rng);
  require_valid(model, 1e-9);
  if (length < 1) throw InputError("length must be at least 1");

  std::mt19937_64 engine(rng.seed);
  GeneratedPath path;
  path.include_start = include_start;
  path.seed = rng.seed;
  path.algorithm = rng.algorithm;
  path.states.reserve(length);
  path.symbols.reserve(length);

  if (include_start) {
    // Start state emits before each transition; the marker fills slot 0.
    path.states.push_back(0);
    path.symbols.push_back(kStartMarker);
    int current = 0;
    for (int t = 1; t < length; ++t) {
      path.symbols.push_back(sample_row(engine, model.emission[current]));
      current = sample_row(engine, model.transition[current]);
      path.states.push_back(current);
    }
  } else {
    // Transition out of state 0 happens before the first emission.
    int current = 0;
    for (int t = 0; t < length; ++t) {
      current = sample_row(engine, model.transition[current]);
      path.states.push_back(current);
      path.symbols.push_back(sample_row(engine, model.emission[current]));
    }
  }
  return path;
}

double path_log_probability(const HmmModel& model, const GeneratedPath& path) {
  const int n = model.num_states();
  const int m = model.num_symbols();
  const std::size_t len = path.states.size();
  if (len == 0 || path.symbols.size() != len)
    throw DimensionError("path state and symbol tracks must have equal positive length");
  for (std::size_t t = 0; t < len; ++t) {
    if (path.states[t] < 0 || path.states[t] >= n)
      throw DimensionError("state index out of range at position " + std::to_string(t));
    const bool marker = path.symbols[t] == kStartMarker;
    if (marker != (path.include_start && t == 0))
      throw DimensionError(path.include_start
                               ? "start marker must occupy exactly position 0"
                               : "start marker not allowed without include_start");
    if (!marker && (path.symbols[t] < 0 || path.symbols[t] >= m))
      throw DimensionError("symbol index out of range at position " + std::to_string(t));
  }

  double lp = 0.0;
  if (path.include_start) {
    if (path.states[0] != 0)
      throw DimensionError("include_start paths must begin in state 0");
    // Slot t's symbol was emitted by the state in slot t-1.
    for (std::size_t t = 1; t < len; ++t) {
      lp += log_factor(model.emission[path.states[t - 1]][path.symbols[t]]);
      lp += log_factor(model.transition[path.states[t - 1]][path.states[t]]);
    }
  } else {
    lp += log_factor(model.transition[0][path.states[0]]);
    lp += log_factor(model.emission[path.states[0]][path.symbols[0]]);
    for (std::size_t t = 1; t < len; ++t) {
      lp += log_factor(model.transition[path.states[t - 1]][path.states[t]]);
      lp += log_factor(model.emission[path.states[t]][path.symbols[t]]);
    }
  }
  return lp;
}

std::string path_to_json(const GeneratedPath& path, const HmmModel& model) {
  nlohmann::json j;
  j["seed"] = path.seed;
  j["algorithm"] = path.algorithm;
  j["include_start"] = path.include_start;
  nlohmann::json states = nlohmann::json::array();
  for (int s : path.states) states.push_back(model.states.names.at(s));
  nlohmann::json symbols = nlohmann::json::array();
  for (int s : path.symbols)
    symbols.push_back(s == kStartMarker ? std::string(kStartMarkerLabel)
                                        : model.alphabet.symbols.at(s));
  j["states"] = std::move(states);
  j["symbols"] = std::move(symbols);
  return j.dump(2) + "\n";
}

GeneratedPath path_from_json(std::string_view text, const HmmModel& model) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("path document: ") + e.what());
  }
  GeneratedPath path;
  path.seed = j.value("seed", std::uint64_t{0});
  path.algorithm = j.value("algorithm", std::string(kRngAlgorithm));
  path.include_start = j.value("include_start", false);
  if (!j.contains("states") || !j["states"].is_array() ||
      !j.contains("symbols") || !j["symbols"].is_array())
    throw ParseError("path document needs 'states' and 'symbols' arrays");
  for (const auto& name : j["states"]) {
    const int idx = model.states.index_of(name.get<std::string>());
    if (idx < 0) throw InputError("unknown state '" + name.get<std::string>() + "'");
    path.states.push_back(idx);
  }
  std::size_t pos = 0;
  for (const auto& label : j["symbols"]) {
    const std::string s = label.get<std::string>();
    if (s == kStartMarkerLabel) {
      if (pos != 0) throw InputError("start marker only allowed at position 0");
      path.symbols.push_back(kStartMarker);
    } else {
      const int idx = model.alphabet.index_of(s);
      if (idx < 0) throw InputError("unknown symbol '" + s + "'");
      path.symbols.push_back(idx);
    }
    ++pos;
  }
  return path;
}

}  // namespace trendhmm
