#ifndef TRENDHMM_MODEL_IO_HPP
#define TRENDHMM_MODEL_IO_HPP

#include <string>
#include <string_view>

#include "trendhmm/model.hpp"

namespace trendhmm {

// Model document: JSON object with keys "states", "symbols", "transition",
// "emission", "initial" and an optional free-form "meta" object. Numbers
// are written with shortest round-trip decimal encoding, so save/load is
// bit-exact for every probability.

std::string save_model(const HmmModel& model);

// Parses, checks dimensions, validates at row_tolerance, then renormalizes
// rows (2-3 decimal transcriptions ingest cleanly at tolerance 0.01;
// computed models keep the strict 1e-9 default).
HmmModel load_model(std::string_view json_text, double row_tolerance = 1e-9);

HmmModel load_model_file(const std::string& path, double row_tolerance = 1e-9);
void save_model_file(const HmmModel& model, const std::string& path);

}  // namespace trendhmm

#endif  // TRENDHMM_MODEL_IO_HPP
