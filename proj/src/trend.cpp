#include "trendhmm/trend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace trendhmm {

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

double compare_sequences(const StateSequence& a, const StateSequence& b) {
  if (a.empty() || a.size() != b.size())
    throw InputError("sequences must have equal positive length");
  std::size_t matches = 0;
  for (std::size_t t = 0; t < a.size(); ++t)
    if (a[t] == b[t]) ++matches;
  return static_cast<double>(matches) / static_cast<double>(a.size());
}

FitnessResult fitness_table(const CandidateSet& set) {
  const std::size_t n = set.sequences.size();
  if (n < 2) throw InputError("need at least 2 candidate sequences");
  if (set.labels.size() != n)
    throw InputError("need one label per sequence");
  for (const auto& seq : set.sequences)
    if (seq.size() != set.sequences[0].size())
      throw InputError("candidate sequences must have equal length");

  FitnessResult result;
  for (std::size_t i = 0; i < n; ++i) {
    FitnessRow row;
    row.label = set.labels[i];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row.compare_sum += compare_sequences(set.sequences[i], set.sequences[j]);
    if (row.compare_sum > 0.0) {
      row.fitness = 1.0 / row.compare_sum;
    } else {
      row.fitness = std::numeric_limits<double>::infinity();
      row.infinite = true;
    }
    result.rows.push_back(std::move(row));
  }

  result.ranking.resize(n);
  std::iota(result.ranking.begin(), result.ranking.end(), 0);
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [&result](int a, int b) {
                     return result.rows[a].fitness > result.rows[b].fitness;
                   });
  return result;
}

OptimumSearch find_optimum_sequence(const HmmModel& model, int length, int trials,
                                    const RngSpec& rng, bool include_start) {
  if (trials < 1) throw InputError("trials must be at least 1");
  OptimumSearch search;
  search.best_log_probability = -std::numeric_limits<double>::infinity();
  const int block = std::max(1, trials / 100);
  bool have_best = false;
  for (int t = 0; t < trials; ++t) {
    RngSpec trial_rng{derive_seed(rng.seed, static_cast<std::uint64_t>(t)),
                      rng.algorithm};
    GeneratedPath path = generate(model, length, trial_rng, include_start);
    const double lp = path_log_probability(model, path);
    if (!have_best || lp > search.best_log_probability) {
      search.best = std::move(path);
      search.best_log_probability = lp;
      have_best = true;
    }
    if ((t + 1) % block == 0 || t + 1 == trials)
      search.trace.push_back(search.best_log_probability);
  }
  return search;
}

TrendReport trend_report(const HmmModel& model, std::string_view label,
                         const StationaryOptions& options) {
  TrendReport report;
  report.label = std::string(label);
  const std::vector<double> pi = stationary_distribution(model.transition, options);
  for (int i = 0; i < model.num_states(); ++i)
    report.rows.push_back({model.states.names[i], pi[i], pi[i] * 100.0});
  report.dominant_state = static_cast<int>(
      std::max_element(pi.begin(), pi.end()) - pi.begin());
  return report;
}

std::string render_fitness_text(const FitnessResult& result,
                                const std::vector<double>* reference_sums,
                                double reference_tol) {
  std::size_t label_width = 8;
  for (const auto& row : result.rows)
    label_width = std::max(label_width, row.label.size());

  std::ostringstream out;
  out << "sequence";
  out << std::string(label_width - 8 + 2, ' ') << "compare_sum  fitness";
  if (reference_sums) out << "  note";
  out << '\n';
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    out << row.label << std::string(label_width - row.label.size() + 2, ' ');
    std::string sum = fixed2(row.compare_sum);
    out << sum << std::string(sum.size() < 11 ? 11 - sum.size() : 1, ' ') << "  ";
    out << (row.infinite ? std::string("inf") : fixed2(row.fitness));
    if (reference_sums && i < reference_sums->size() &&
        std::abs(row.compare_sum - (*reference_sums)[i]) > reference_tol) {
      out << "     differs from reference " << fixed2((*reference_sums)[i]);
    }
    out << '\n';
  }
  out << "ranking:";
  for (std::size_t r = 0; r < result.ranking.size(); ++r)
    out << (r ? " > " : " ") << result.rows[result.ranking[r]].label;
  out << '\n';
  return out.str();
}

std::string render_trend_text(const TrendReport& report) {
  std::size_t name_width = 5;
  for (const auto& row : report.rows)
    name_width = std::max(name_width, row.state.size());

  std::ostringstream out;
  out << "Trend report";
  if (!report.label.empty()) out << " (" << report.label << ")";
  out << '\n';
  out << "state" << std::string(name_width - 5 + 2, ' ') << "probability  percent\n";
  for (const auto& row : report.rows) {
    out << row.state << std::string(name_width - row.state.size() + 2, ' ');
    std::string p = fixed2(row.probability);
    out << p << std::string(p.size() < 11 ? 11 - p.size() : 1, ' ') << "  "
        << fixed2(row.percent) << "%\n";
  }
  out << "dominant trend: " << report.rows[report.dominant_state].state << " ("
      << fixed2(report.rows[report.dominant_state].percent) << "%)\n";
  return out.str();
}

}  // namespace trendhmm
