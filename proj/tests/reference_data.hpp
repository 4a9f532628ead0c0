// Reference data for the bundled sample study: 20 daily close values, the
// published k-day difference tables, the six estimated model matrices and
// the candidate state sequences compared by the fitness table. All values
// transcribed as printed (2-3 decimals).
#ifndef TRENDHMM_TESTS_REFERENCE_DATA_HPP
#define TRENDHMM_TESTS_REFERENCE_DATA_HPP

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "trendhmm/model.hpp"

namespace refdata {

inline const std::vector<double> kCloses = {
    77.91, 77.39, 76.50, 75.86, 77.45, 79.33, 79.51, 79.15, 79.95, 78.56,
    79.07, 77.40, 77.28, 77.95, 77.33, 76.70, 77.73, 77.07, 77.90, 75.70};

struct DiffColumn {
  int k;
  std::vector<double> diffs;    // printed k-day differences
  std::string symbols;          // printed observing symbols, one char each
};

inline const std::vector<DiffColumn> kDiffColumns = {
    {1,
     {-0.52, -0.89, -0.64, 1.59, 1.88, 0.18, -0.36, 0.80, -1.39, 0.51,
      -1.67, -0.12, 0.67, -0.62, -0.63, 1.03, -0.66, 0.83, -2.20},
     "DDDIIIDIDIDDIDDIDID"},
    {2,
     {-1.41, -1.53, 0.95, 3.47, 2.06, -0.18, 0.44, -0.59, -0.88, -1.16,
      -1.79, 0.55, 0.05, -1.25, 0.40, 0.37, 0.17, -1.37},
     "DDIIIDIDDDDIIDIIID"},
    {3,
     {-2.05, 0.06, 2.83, 3.65, 1.70, 0.62, -0.95, -0.08, -2.55, -1.28,
      -1.12, -0.07, -0.58, -0.22, -0.26, 1.20, -2.03},
     "DIIIIIDDDDDDDDDID"},
    {4,
     {-0.46, 1.94, 3.01, 3.29, 2.50, -0.77, -0.44, -1.75, -2.67, -0.61,
      -1.74, -0.70, 0.45, -0.88, 0.57, -1.00},
     "DIIIIDDDDDDDIDID"},
    {5,
     {1.42, 2.12, 2.65, 4.09, 1.11, -0.26, -2.11, -1.87, -2.00, -1.23,
      -2.37, 0.33, -0.21, -0.05, -1.63},
     "IIIIIDDDDDDIDDD"},
    {6,
     {1.60, 1.76, 3.45, 2.70, 1.62, -1.93, -2.23, -1.20, -2.62, -1.86,
      -1.34, -0.33, 0.62, -2.25},
     "IIIIIDDDDDDDID"},
};

// Transition/emission pairs estimated from the k-day differences,
// k = 1..6, states S1..S6, symbols (I, D).
inline const std::array<trendhmm::Matrix, 6> kTpm = {{
    {{0, 0, 1, 0, 0, 0},
     {0, 0, 0.5, 0.5, 0, 0},
     {0, 0.143, 0.143, 0, 0.571, 0.143},
     {0.5, 0, 0.5, 0, 0, 0},
     {0.25, 0.25, 0.5, 0, 0, 0},
     {0, 0, 0, 0.5, 0, 0.5}},
    {{0.4, 0, 0.4, 0.2, 0, 0},
     {0.33, 0.33, 0.33, 0, 0, 0},
     {0.33, 0.17, 0.5, 0, 0, 0},
     {0, 0, 0, 0, 0, 1},
     {0, 1, 0, 0, 0, 0},
     {0, 0, 0, 0, 1, 0}},
    {{0, 0.5, 0.5, 0, 0, 0},
     {0, 0.25, 0.75, 0, 0, 0},
     {0.2, 0.2, 0.2, 0.2, 0, 0.2},
     {0.5, 0.5, 0, 0, 0, 0},
     {0, 0, 0, 1, 0, 0},
     {0, 0, 0, 0, 0.5, 0.5}},
    {{0.33, 0.33, 0.33, 0, 0, 0},
     {0, 0, 0.33, 0.67, 0, 0},
     {0.67, 0, 0, 0, 0.33, 0},
     {0, 1, 0, 0, 0, 0},
     {0, 0, 0, 0, 0, 1},
     {0, 0.33, 0, 0, 0, 0.67}},
    {{0.5, 0.25, 0.25, 0, 0, 0},
     {1, 0, 0, 0, 0, 0},
     {0.33, 0, 0.67, 0, 0, 0},
     {0, 0.5, 0, 0, 0.5, 0},
     {0, 0, 0, 0, 0.5, 0.5},
     {0, 0, 0, 1, 0, 0}},
    {{0.5, 0.5, 0, 0, 0, 0},
     {0.5, 0, 0.5, 0, 0, 0},
     {0, 0, 0, 1, 0, 0},
     {1, 0, 0, 0, 0, 0},
     {0.33, 0, 0, 0, 0.33, 0.33},
     {0, 0, 0, 0, 0.5, 0.5}},
}};

inline const std::array<trendhmm::Matrix, 6> kEpm = {{
    {{0, 1}, {0.5, 0.5}, {0.71, 0.29}, {0, 1}, {0, 1}, {1, 0}},
    {{0.6, 0.4}, {0.33, 0.67}, {0.5, 0.5}, {1, 0}, {0, 1}, {0, 1}},
    {{0.5, 0.5}, {0, 1}, {0.4, 0.6}, {0, 1}, {1, 0}, {1, 0}},
    {{0, 1}, {0.67, 0.33}, {0.33, 0.67}, {0, 1}, {1, 0}, {0.67, 0.33}},
    {{0.25, 0.75}, {0, 1}, {0, 1}, {0.5, 0.5}, {1, 0}, {1, 0}},
    {{0, 1}, {0, 1}, {1, 0}, {0, 1}, {0.67, 0.33}, {1, 0}},
}};

// Steady-state vectors as published alongside the matrices. The 4-day
// vector sums to 0.36 and cannot be a distribution (known erratum).
inline const std::array<std::vector<double>, 6> kPublishedSteadyState = {{
    {0.06, 0.11, 0.39, 0.11, 0.22, 0.11},
    {0.29, 0.18, 0.35, 0.06, 0.06, 0.06},
    {0.13, 0.25, 0.31, 0.13, 0.06, 0.13},
    {0.04, 0.04, 0.04, 0.13, 0.07, 0.04},
    {0.29, 0.14, 0.21, 0.14, 0.14, 0.07},
    {0.31, 0.15, 0.08, 0.08, 0.23, 0.15},
}};

// Stationary vectors actually solved from the row-normalized matrices,
// frozen from an independent least-squares run (12 decimals).
inline const std::array<std::vector<double>, 6> kComputedStationary = {{
    {0.105252250800, 0.105275276889, 0.368417416933, 0.105321329066,
     0.210366345069, 0.105367381243},
    {0.293079096045, 0.177966101695, 0.353107344633, 0.058615819209,
     0.058615819209, 0.058615819209},
    {0.125, 0.25, 0.3125, 0.125, 0.0625, 0.125},
    {0.149993216046, 0.300755280177, 0.149246981141, 0.201506037719,
     0.049251503776, 0.149246981141},
    {0.498113207547, 0.124528301887, 0.377358490566, 0.0, 0.0, 0.0},
    {0.5, 0.25, 0.125, 0.125, 0.0, 0.0},
}};

// The six candidate state sequences (0-based indices), labels "1-day".."6-day".
inline const std::array<std::vector<int>, 6> kCandidateSequences = {{
    {0, 2, 4, 2, 4, 2, 4},
    {0, 2, 0, 0, 2, 0, 0},
    {0, 1, 2, 3, 0, 2, 3},
    {0, 1, 3, 1, 3, 1, 2},
    {0, 1, 0, 0, 0, 1, 0},
    {0, 1, 2, 3, 0, 1, 2},
}};

// Published comparison table: row 4 prints 1.43 / 0.70 where the
// positional-match definition gives 11/7 = 1.57 / 0.64.
inline const std::vector<double> kPublishedCompareSums = {1.00, 1.29, 1.86,
                                                          1.43, 2.14, 2.14};
inline const std::vector<double> kPublishedFitness = {1.00, 0.76, 0.54,
                                                      0.70, 0.47, 0.47};
inline const std::vector<double> kComputedCompareSums = {
    7.0 / 7.0, 9.0 / 7.0, 13.0 / 7.0, 11.0 / 7.0, 15.0 / 7.0, 15.0 / 7.0};

inline trendhmm::HmmModel reference_model(int day_index /* 0-based, 0 = 1-day */) {
  trendhmm::HmmModel model;
  model.states = trendhmm::StateSpace::six_level();
  model.alphabet = trendhmm::SymbolAlphabet::increase_decrease();
  model.transition = trendhmm::normalize_rows(kTpm[day_index]);
  model.emission = trendhmm::normalize_rows(kEpm[day_index]);
  model.initial.assign(6, 1.0 / 6.0);
  return model;
}

inline std::string closes_csv() {
  // Synthetic consecutive dates; only the ordering matters.
  std::string csv = "date,close\n";
  for (std::size_t i = 0; i < kCloses.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "2011-03-%02d,%.2f\n",
                  static_cast<int>(i + 1), kCloses[i]);
    csv += buf;
  }
  return csv;
}

}  // namespace refdata

#endif  // TRENDHMM_TESTS_REFERENCE_DATA_HPP
