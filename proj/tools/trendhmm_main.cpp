// trendhmm: estimate, inspect and sample discrete trend HMMs from daily
// close values.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "trendhmm/generate.hpp"
#include "trendhmm/inference.hpp"
#include "trendhmm/market.hpp"
#include "trendhmm/model.hpp"
#include "trendhmm/model_io.hpp"
#include "trendhmm/stationary.hpp"
#include "trendhmm/trend.hpp"

namespace {

using nlohmann::json;
using namespace trendhmm;

constexpr const char* kSeedEnvVar = "TRENDHMM_SEED";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv(kSeedEnvVar)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw InputError(std::string("cannot parse ") + kSeedEnvVar + "='" + env + "'");
  }
  std::random_device entropy;
  return (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
}

struct BinningFlags {
  std::string mode = "equal-width";
  std::vector<double> thresholds;
  std::string zero_policy = "decrease";

  void attach(CLI::App* cmd) {
    cmd->add_option("--binning", mode, "equal-width | quantile | explicit")
        ->check(CLI::IsMember({"equal-width", "quantile", "explicit"}));
    cmd->add_option("--thresholds", thresholds,
                    "5 ascending cut points (explicit binning)")
        ->delimiter(',');
    cmd->add_option("--zero-policy", zero_policy,
                    "zero diffs: decrease | increase | reject")
        ->check(CLI::IsMember({"decrease", "increase", "reject"}));
  }

  BinningSpec to_spec() const {
    BinningSpec spec;
    if (mode == "quantile") spec.mode = BinningMode::Quantile;
    else if (mode == "explicit") spec.mode = BinningMode::Explicit;
    else spec.mode = BinningMode::EqualWidth;
    spec.thresholds = thresholds;
    if (zero_policy == "increase") spec.zero_policy = ZeroPolicy::MapToIncrease;
    else if (zero_policy == "reject") spec.zero_policy = ZeroPolicy::Reject;
    else spec.zero_policy = ZeroPolicy::MapToDecrease;
    return spec;
  }
};

PriceSeries load_prices(const std::string& path, bool close_column) {
  const std::string text = read_file(path);
  return close_column ? ingest_close_column(text) : ingest_csv(text);
}

ObservationSequence parse_symbols(const std::string& inline_symbols,
                                  const std::string& input_path,
                                  const SymbolAlphabet& alphabet,
                                  const StateSpace& space) {
  if (!inline_symbols.empty()) {
    ObservationSequence obs;
    std::stringstream ss(inline_symbols);
    std::string token;
    while (std::getline(ss, token, ',')) {
      const int idx = alphabet.index_of(token);
      if (idx < 0) throw InputError("unknown symbol '" + token + "'");
      obs.push_back(idx);
    }
    if (obs.empty()) throw InputError("no symbols given");
    return obs;
  }
  if (input_path.empty())
    throw InputError("need --symbols or --input");
  LabeledSeries series = labeled_series_from_csv(read_file(input_path), space, alphabet);
  return series.symbols;
}

json trend_to_json(const TrendReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows)
    rows.push_back({{"state", row.state},
                    {"probability", row.probability},
                    {"percent", row.percent}});
  return json{{"label", report.label},
              {"rows", std::move(rows)},
              {"dominant", report.rows[report.dominant_state].state}};
}

json fitness_to_json(const FitnessResult& result) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    json r{{"label", row.label}, {"compare_sum", row.compare_sum}};
    if (row.infinite) r["fitness"] = "inf";
    else r["fitness"] = row.fitness;
    rows.push_back(std::move(r));
  }
  json ranking = json::array();
  for (int idx : result.ranking) ranking.push_back(result.rows[idx].label);
  return json{{"rows", std::move(rows)}, {"ranking", std::move(ranking)}};
}

// Sequences document: {"sequences":[{"label":..., "states":[...]}, ...]}
// with states given as strings or integers; distinct tokens are compared
// positionally, so no model is needed.
CandidateSet load_candidate_set(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("sequences document: ") + e.what());
  }
  if (!j.contains("sequences") || !j["sequences"].is_array())
    throw ParseError("sequences document needs a 'sequences' array");
  CandidateSet set;
  std::map<std::string, int> token_ids;
  for (const auto& entry : j["sequences"]) {
    set.labels.push_back(entry.value("label",
                                     "seq" + std::to_string(set.labels.size() + 1)));
    if (!entry.contains("states") || !entry["states"].is_array())
      throw ParseError("each sequence needs a 'states' array");
    StateSequence seq;
    for (const auto& token : entry["states"]) {
      const std::string key = token.is_string() ? token.get<std::string>() : token.dump();
      auto [it, _] = token_ids.emplace(key, static_cast<int>(token_ids.size()));
      seq.push_back(it->second);
    }
    set.sequences.push_back(std::move(seq));
  }
  return set;
}

std::string state_token(int index) { return "S" + std::to_string(index + 1); }

int run(int argc, char** argv) {
  CLI::App app{"discrete HMM toolkit for market trend analysis"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose", verbose, "echo the effective configuration to stderr");

  const StateSpace six = StateSpace::six_level();
  const SymbolAlphabet id_alphabet = SymbolAlphabet::increase_decrease();

  // ingest: prices CSV -> labeled series CSV
  auto* ingest = app.add_subcommand("ingest", "difference, symbolize and bin close values");
  std::string ingest_input, ingest_output;
  bool ingest_close_col = false;
  int ingest_k = 1;
  BinningFlags ingest_binning;
  ingest->add_option("--input", ingest_input, "prices CSV (date,close)")->required();
  ingest->add_flag("--close-column", ingest_close_col,
                   "input is a headerless single column of closes");
  ingest->add_option("--k", ingest_k, "difference lag in days")->check(CLI::PositiveNumber);
  ingest_binning.attach(ingest);
  ingest->add_option("--output", ingest_output, "labeled series CSV (default stdout)");

  // estimate: labeled series CSV -> model JSON (+ joint table CSV)
  auto* est = app.add_subcommand("estimate", "count transition/emission probabilities");
  std::string est_input, est_output, est_joint;
  double est_alpha = 0.0;
  std::string est_pairing = "same-step";
  est->add_option("--input", est_input, "labeled series CSV")->required();
  est->add_option("--alpha", est_alpha, "additive smoothing constant")
      ->check(CLI::NonNegativeNumber);
  est->add_option("--pairing", est_pairing, "emission pairing: same-step | next-step")
      ->check(CLI::IsMember({"same-step", "next-step"}));
  est->add_option("--output", est_output, "model JSON (default stdout)");
  est->add_option("--joint-table", est_joint, "also write the joint transition-emission CSV");

  // stationary: model JSON -> steady-state trend report
  auto* stat = app.add_subcommand("stationary", "steady-state probabilities of a model");
  std::string stat_model, stat_output, stat_format = "text", stat_label;
  std::string stat_method = "linear";
  int stat_max_iter = 100000;
  double stat_residual = 1e-10, stat_tolerance = 0.01;
  stat->add_option("--model", stat_model, "model JSON")->required();
  stat->add_option("--method", stat_method, "linear | power")
      ->check(CLI::IsMember({"linear", "power"}));
  stat->add_option("--max-iter", stat_max_iter, "power iteration cap");
  stat->add_option("--residual-tol", stat_residual, "L1 residual tolerance");
  stat->add_option("--row-tolerance", stat_tolerance,
                   "row-sum tolerance when loading the model");
  stat->add_option("--label", stat_label, "report label");
  stat->add_option("--format", stat_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  stat->add_option("--output", stat_output, "output path (default stdout)");

  // generate: model JSON -> sampled path JSON
  auto* gen = app.add_subcommand("generate", "sample a (symbols, states) path");
  std::string gen_model, gen_output, gen_format = "json";
  int gen_length = 7;
  std::optional<std::uint64_t> gen_seed;
  bool gen_include_start = false;
  double gen_tolerance = 0.01;
  gen->add_option("--model", gen_model, "model JSON")->required();
  gen->add_option("--length", gen_length, "path length L")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "rng seed (default: $" + std::string(kSeedEnvVar) +
                                          " or OS entropy)");
  gen->add_flag("--include-start", gen_include_start,
                "prefix the start state and epsilon marker");
  gen->add_option("--row-tolerance", gen_tolerance, "model loading tolerance");
  gen->add_option("--format", gen_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  gen->add_option("--output", gen_output, "output path (default stdout)");

  // decode: model + symbols -> most probable state path
  auto* dec = app.add_subcommand("decode", "most probable state path for symbols");
  std::string dec_model, dec_symbols, dec_input, dec_output, dec_format = "json";
  double dec_tolerance = 0.01;
  dec->add_option("--model", dec_model, "model JSON")->required();
  dec->add_option("--symbols", dec_symbols, "comma-separated symbols, e.g. I,D,D");
  dec->add_option("--input", dec_input, "labeled series CSV to take symbols from");
  dec->add_option("--row-tolerance", dec_tolerance, "model loading tolerance");
  dec->add_option("--format", dec_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  dec->add_option("--output", dec_output, "output path (default stdout)");

  // train: model + symbols -> re-estimated model
  auto* train = app.add_subcommand("train", "Baum-Welch re-estimation");
  std::string train_model, train_symbols, train_input, train_output, train_format = "json";
  int train_iter = 100;
  double train_delta = 0.0, train_floor = 0.0, train_tolerance = 0.01;
  train->add_option("--model", train_model, "initial model JSON")->required();
  train->add_option("--symbols", train_symbols, "comma-separated symbols");
  train->add_option("--input", train_input, "labeled series CSV to take symbols from");
  train->add_option("--max-iter", train_iter, "iteration cap")->check(CLI::PositiveNumber);
  train->add_option("--delta-tol", train_delta,
                    "stop when log-likelihood gain falls below this");
  train->add_option("--floor", train_floor, "emission/transition floor")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--row-tolerance", train_tolerance, "model loading tolerance");
  train->add_option("--format", train_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  train->add_option("--output", train_output, "output path (default stdout)");

  // fitness: sequences JSON -> comparison table
  auto* fit = app.add_subcommand("fitness", "rank candidate state sequences");
  std::string fit_paths, fit_reference, fit_output, fit_format = "text";
  double fit_reference_tol = 0.01;
  fit->add_option("--paths", fit_paths, "sequences JSON")->required();
  fit->add_option("--reference", fit_reference,
                  "reference compare sums JSON to diff against");
  fit->add_option("--reference-tol", fit_reference_tol, "flag threshold");
  fit->add_option("--format", fit_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  fit->add_option("--output", fit_output, "output path (default stdout)");

  // optimum: best-of-N sampled sequence
  auto* opt = app.add_subcommand("optimum", "best sampled path by joint log-probability");
  std::string opt_model, opt_output, opt_format = "json";
  int opt_length = 7, opt_trials = 10000;
  std::optional<std::uint64_t> opt_seed;
  bool opt_include_start = false;
  double opt_tolerance = 0.01;
  opt->add_option("--model", opt_model, "model JSON")->required();
  opt->add_option("--length", opt_length, "path length L")->check(CLI::PositiveNumber);
  opt->add_option("--trials", opt_trials, "sampled trials")->check(CLI::PositiveNumber);
  opt->add_option("--seed", opt_seed, "rng seed");
  opt->add_flag("--include-start", opt_include_start,
                "prefix the start state and epsilon marker");
  opt->add_option("--row-tolerance", opt_tolerance, "model loading tolerance");
  opt->add_option("--format", opt_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  opt->add_option("--output", opt_output, "output path (default stdout)");

  // report: prices CSV -> end-to-end trend report
  auto* rep = app.add_subcommand("report", "prices to trend report in one step");
  std::string rep_input, rep_output, rep_format = "text";
  bool rep_close_col = false;
  int rep_k = 1;
  double rep_alpha = 0.0;
  BinningFlags rep_binning;
  std::string rep_method = "linear";
  rep->add_option("--input", rep_input, "prices CSV (date,close)")->required();
  rep->add_flag("--close-column", rep_close_col,
                "input is a headerless single column of closes");
  rep->add_option("--k", rep_k, "difference lag in days")->check(CLI::PositiveNumber);
  rep->add_option("--alpha", rep_alpha, "estimation smoothing")
      ->check(CLI::NonNegativeNumber);
  rep_binning.attach(rep);
  rep->add_option("--method", rep_method, "linear | power")
      ->check(CLI::IsMember({"linear", "power"}));
  rep->add_option("--format", rep_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  rep->add_option("--output", rep_output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 1;
  }

  auto echo_config = [&](const json& cfg) {
    if (verbose) std::cerr << "config: " << cfg.dump() << '\n';
  };

  if (ingest->parsed()) {
    echo_config({{"command", "ingest"}, {"input", ingest_input}, {"k", ingest_k},
                 {"binning", ingest_binning.mode},
                 {"zero_policy", ingest_binning.zero_policy}});
    PriceSeries prices = load_prices(ingest_input, ingest_close_col);
    LabeledSeries labeled = label_series(prices, ingest_k, ingest_binning.to_spec());
    if (labeled.zero_count > 0)
      std::cerr << "warning: " << labeled.zero_count
                << " zero difference(s) mapped by zero policy\n";
    write_output(ingest_output, labeled_series_to_csv(labeled, id_alphabet));
    return 0;
  }

  if (est->parsed()) {
    echo_config({{"command", "estimate"}, {"input", est_input}, {"alpha", est_alpha},
                 {"pairing", est_pairing}});
    LabeledSeries labeled =
        labeled_series_from_csv(read_file(est_input), six, id_alphabet);
    EstimateResult result = estimate(
        labeled.states, labeled.symbols, six, id_alphabet, est_alpha,
        est_pairing == "next-step" ? EmissionPairing::NextStep
                                   : EmissionPairing::SameStep);
    for (int s : result.unvisited_states)
      std::cerr << "warning: state " << state_token(s)
                << " never visited; row set uniform\n";
    if (!est_joint.empty()) {
      Matrix table = joint_transition_table(result.model, result.counts);
      std::ostringstream csv;
      csv << "from";
      for (int j = 0; j < six.size(); ++j)
        for (const auto& sym : id_alphabet.symbols)
          csv << ',' << state_token(j) << ':' << sym;
      csv << '\n';
      for (int i = 0; i < six.size(); ++i) {
        csv << state_token(i);
        for (double v : table[i]) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "%.17g", v);
          csv << ',' << buf;
        }
        csv << '\n';
      }
      write_output(est_joint, csv.str());
    }
    write_output(est_output, save_model(result.model));
    return 0;
  }

  if (stat->parsed()) {
    echo_config({{"command", "stationary"}, {"model", stat_model},
                 {"method", stat_method}, {"residual_tol", stat_residual}});
    HmmModel model = load_model_file(stat_model, stat_tolerance);
    StationaryOptions options;
    options.method = stat_method == "power" ? StationaryMethod::PowerIteration
                                            : StationaryMethod::LinearSolve;
    options.max_iter = stat_max_iter;
    options.residual_tol = stat_residual;
    TrendReport report = trend_report(model, stat_label, options);
    if (stat_format == "json") {
      json out = trend_to_json(report);
      json pi = json::array();
      for (const auto& row : report.rows) pi.push_back(row.probability);
      out["pi"] = std::move(pi);
      write_output(stat_output, out.dump(2) + "\n");
    } else {
      write_output(stat_output, render_trend_text(report));
    }
    return 0;
  }

  if (gen->parsed()) {
    const std::uint64_t seed = resolve_seed(gen_seed);
    echo_config({{"command", "generate"}, {"model", gen_model},
                 {"length", gen_length}, {"seed", seed},
                 {"include_start", gen_include_start}});
    std::cerr << "seed: " << seed << '\n';
    HmmModel model = load_model_file(gen_model, gen_tolerance);
    GeneratedPath path = generate(model, gen_length, RngSpec{seed}, gen_include_start);
    if (gen_format == "text") {
      std::ostringstream out;
      out << "seed: " << seed << "\nstates:";
      for (int s : path.states) out << ' ' << state_token(s);
      out << "\nsymbols:";
      for (int s : path.symbols)
        out << ' '
            << (s == kStartMarker ? std::string(kStartMarkerLabel)
                                  : model.alphabet.symbols.at(s));
      out << '\n';
      write_output(gen_output, out.str());
    } else {
      write_output(gen_output, path_to_json(path, model));
    }
    return 0;
  }

  if (dec->parsed()) {
    echo_config({{"command", "decode"}, {"model", dec_model}});
    HmmModel model = load_model_file(dec_model, dec_tolerance);
    ObservationSequence obs =
        parse_symbols(dec_symbols, dec_input, model.alphabet, model.states);
    ViterbiResult result = viterbi_decode(model, obs);
    if (dec_format == "text") {
      std::ostringstream out;
      out << "states:";
      for (int s : result.path) out << ' ' << state_token(s);
      out << "\nlog_probability: " << result.log_probability << '\n';
      write_output(dec_output, out.str());
    } else {
      json names = json::array();
      for (int s : result.path) names.push_back(model.states.names.at(s));
      write_output(dec_output,
                   json{{"states", std::move(names)},
                        {"log_probability", result.log_probability}}.dump(2) + "\n");
    }
    return 0;
  }

  if (train->parsed()) {
    echo_config({{"command", "train"}, {"model", train_model},
                 {"max_iter", train_iter}, {"delta_tol", train_delta},
                 {"floor", train_floor}});
    HmmModel model = load_model_file(train_model, train_tolerance);
    ObservationSequence obs =
        parse_symbols(train_symbols, train_input, model.alphabet, model.states);
    BaumWelchConfig config;
    config.max_iter = train_iter;
    config.loglik_delta_tol = train_delta;
    config.floor = train_floor;
    BaumWelchResult result = baum_welch_train(model, obs, config);
    if (train_format == "text") {
      std::ostringstream out;
      out << "log-likelihood trace:";
      for (double ll : result.log_likelihood_trace) out << ' ' << ll;
      out << '\n' << save_model(result.model);
      write_output(train_output, out.str());
    } else {
      json out{{"model", json::parse(save_model(result.model))},
               {"log_likelihood_trace", result.log_likelihood_trace}};
      write_output(train_output, out.dump(2) + "\n");
    }
    return 0;
  }

  if (fit->parsed()) {
    echo_config({{"command", "fitness"}, {"paths", fit_paths}});
    CandidateSet set = load_candidate_set(fit_paths);
    FitnessResult result = fitness_table(set);
    std::vector<double> reference;
    if (!fit_reference.empty()) {
      json j = json::parse(read_file(fit_reference));
      const json& arr = j.is_array() ? j : j.at("compare_sums");
      for (const auto& v : arr) reference.push_back(v.get<double>());
    }
    if (fit_format == "json") {
      json out = fitness_to_json(result);
      if (!reference.empty()) {
        json flags = json::array();
        for (std::size_t i = 0; i < result.rows.size(); ++i)
          flags.push_back(i < reference.size() &&
                          std::abs(result.rows[i].compare_sum - reference[i]) >
                              fit_reference_tol);
        out["differs_from_reference"] = std::move(flags);
      }
      write_output(fit_output, out.dump(2) + "\n");
    } else {
      write_output(fit_output,
                   render_fitness_text(result,
                                       reference.empty() ? nullptr : &reference,
                                       fit_reference_tol));
    }
    return 0;
  }

  if (opt->parsed()) {
    const std::uint64_t seed = resolve_seed(opt_seed);
    echo_config({{"command", "optimum"}, {"model", opt_model},
                 {"length", opt_length}, {"trials", opt_trials}, {"seed", seed}});
    std::cerr << "seed: " << seed << '\n';
    HmmModel model = load_model_file(opt_model, opt_tolerance);
    OptimumSearch search = find_optimum_sequence(model, opt_length, opt_trials,
                                                 RngSpec{seed}, opt_include_start);
    if (opt_format == "text") {
      std::ostringstream out;
      out << "seed: " << seed << "\nbest log-probability: "
          << search.best_log_probability << "\nstates:";
      for (int s : search.best.states) out << ' ' << state_token(s);
      out << '\n';
      write_output(opt_output, out.str());
    } else {
      json out = json::parse(path_to_json(search.best, model));
      out["base_seed"] = seed;
      out["trials"] = opt_trials;
      out["log_probability"] = search.best_log_probability;
      write_output(opt_output, out.dump(2) + "\n");
    }
    return 0;
  }

  if (rep->parsed()) {
    echo_config({{"command", "report"}, {"input", rep_input}, {"k", rep_k},
                 {"alpha", rep_alpha}, {"binning", rep_binning.mode}});
    PriceSeries prices = load_prices(rep_input, rep_close_col);
    LabeledSeries labeled = label_series(prices, rep_k, rep_binning.to_spec());
    if (labeled.zero_count > 0)
      std::cerr << "warning: " << labeled.zero_count
                << " zero difference(s) mapped by zero policy\n";
    EstimateResult est_result =
        estimate(labeled.states, labeled.symbols, six, id_alphabet, rep_alpha);
    for (int s : est_result.unvisited_states)
      std::cerr << "warning: state " << state_token(s)
                << " never visited; row set uniform\n";
    StationaryOptions options;
    options.method = rep_method == "power" ? StationaryMethod::PowerIteration
                                           : StationaryMethod::LinearSolve;
    TrendReport report =
        trend_report(est_result.model, std::to_string(rep_k) + "-day", options);
    if (rep_format == "json") {
      json out{{"k", rep_k},
               {"report", trend_to_json(report)},
               {"zero_diffs", labeled.zero_count},
               {"model", json::parse(save_model(est_result.model))}};
      write_output(rep_output, out.dump(2) + "\n");
    } else {
      write_output(rep_output, render_trend_text(report));
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
