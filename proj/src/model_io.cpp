#include "trendhmm/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace trendhmm {

namespace {

using nlohmann::json;

std::vector<std::string> string_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ParseError(std::string("missing or non-array '") + key + "'");
  std::vector<std::string> out;
  for (const auto& item : j[key]) {
    if (!item.is_string())
      throw ParseError(std::string("'") + key + "' must contain strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

Matrix number_matrix(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ParseError(std::string("missing or non-array '") + key + "'");
  Matrix out;
  for (const auto& row : j[key]) {
    if (!row.is_array())
      throw ParseError(std::string("'") + key + "' rows must be arrays");
    std::vector<double> r;
    for (const auto& item : row) {
      if (!item.is_number())
        throw ParseError(std::string("'") + key + "' must contain numbers");
      r.push_back(item.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string save_model(const HmmModel& model) {
  json j;
  j["states"] = model.states.names;
  j["symbols"] = model.alphabet.symbols;
  j["transition"] = model.transition;
  j["emission"] = model.emission;
  j["initial"] = model.initial;
  return j.dump(2) + "\n";
}

HmmModel load_model(std::string_view json_text, double row_tolerance) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model document: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model document must be a JSON object");

  HmmModel model;
  model.states.names = string_array(j, "states");
  model.alphabet.symbols = string_array(j, "symbols");
  model.transition = number_matrix(j, "transition");
  model.emission = number_matrix(j, "emission");

  if (!j.contains("initial") || !j["initial"].is_array())
    throw ParseError("missing or non-array 'initial'");
  for (const auto& item : j["initial"]) {
    if (!item.is_number()) throw ParseError("'initial' must contain numbers");
    model.initial.push_back(item.get<double>());
  }

  const std::size_t n = model.states.names.size();
  const std::size_t m = model.alphabet.symbols.size();
  if (model.transition.size() != n)
    throw DimensionError("transition has " + std::to_string(model.transition.size()) +
                         " rows, expected " + std::to_string(n));
  for (const auto& row : model.transition)
    if (row.size() != n)
      throw DimensionError("transition rows must have " + std::to_string(n) +
                           " entries");
  if (model.emission.size() != n)
    throw DimensionError("emission has " + std::to_string(model.emission.size()) +
                         " rows, expected " + std::to_string(n));
  for (const auto& row : model.emission)
    if (row.size() != m)
      throw DimensionError("emission rows must have " + std::to_string(m) +
                           " entries");
  if (model.initial.size() != n)
    throw DimensionError("initial has " + std::to_string(model.initial.size()) +
                         " entries, expected " + std::to_string(n));

  require_valid(model, row_tolerance);

  // Accepted; bring rows to strict stochastic form.
  model.transition = normalize_rows(model.transition);
  model.emission = normalize_rows(model.emission);
  model.initial = normalize_vector(model.initial);
  return model;
}

HmmModel load_model_file(const std::string& path, double row_tolerance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str(), row_tolerance);
}

void save_model_file(const HmmModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model file: " + path);
  out << save_model(model);
}

}  // namespace trendhmm
