#ifndef TRENDHMM_GENERATE_HPP
#define TRENDHMM_GENERATE_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "trendhmm/inference.hpp"
#include "trendhmm/model.hpp"

namespace trendhmm {

// Sampling is fully specified: the mt19937_64 stream is mapped to [0,1)
// doubles and inverted through the row CDF, so the same seed yields the
// same path on every platform.
inline constexpr char kRngAlgorithm[] = "mt19937_64";

struct RngSpec {
  std::uint64_t seed = 0;
  std::string algorithm = kRngAlgorithm;
};

// Symbol slot holding the start marker (rendered as epsilon).
inline constexpr int kStartMarker = -1;
inline constexpr char kStartMarkerLabel[] = "\xCE\xB5";  // U+03B5

// states and symbols always have equal length L.
//
// include_start = false (canonical): the chain sits in state 0 before the
// first step; states[0] is drawn from transition row 0 and symbols[t] is
// emitted by states[t].
//
// include_start = true: states[0] is the start state itself, symbols[0] is
// the start marker, and each later symbols[t] is emitted by states[t-1]
// just before the transition to states[t]. L-1 steps follow the start.
struct GeneratedPath {
  StateSequence states;
  ObservationSequence symbols;
  bool include_start = false;
  std::uint64_t seed = 0;
  std::string algorithm = kRngAlgorithm;
};

GeneratedPath generate(const HmmModel& model, int length, const RngSpec& rng,
                       bool include_start = false);

// Joint log-probability of the recorded path under the model's start rule:
// the product of the start factor, every transition factor and every
// emission factor. -inf when any factor is zero.
double path_log_probability(const HmmModel& model, const GeneratedPath& path);

// {"seed":..., "algorithm":..., "include_start":..., "states":[names],
//  "symbols":[labels]} with the epsilon marker allowed only at position 0.
std::string path_to_json(const GeneratedPath& path, const HmmModel& model);
GeneratedPath path_from_json(std::string_view text, const HmmModel& model);

// Stable per-trial seed derivation (splitmix64 mix of base and index);
// disjoint trials can be generated concurrently with identical results.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace trendhmm

#endif  // TRENDHMM_GENERATE_HPP
