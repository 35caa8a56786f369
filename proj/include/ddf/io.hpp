// io.hpp - schedule JSON, numeric CSV reading and fixed number formatting.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ddf/sequences.hpp"

namespace ddf {

// 17 significant digits, locale independent; "nan"/"inf"/"-inf" for non-finite.
std::string format_number(double v);

nlohmann::json schedule_to_json(const PulseSchedule& s);
// Validates; restores the SDD/NUDD recipe when the stored times match one.
PulseSchedule schedule_from_json(const nlohmann::json& j);

void write_schedule_file(const PulseSchedule& s, const std::string& path);
PulseSchedule read_schedule_file(const std::string& path);

// Rows of numbers from a comma separated file. Blank lines and a leading
// non-numeric header line are skipped. Every row must have `columns` fields.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t columns);

}  // namespace ddf
