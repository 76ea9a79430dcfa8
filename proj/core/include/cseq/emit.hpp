#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "cseq/experiment.hpp"

namespace cseq {

enum class OutputFormat { kCsv, kJson, kSvg };

/// Columns: method,trial,t,volume,covered,active_count,stop_t,time_uniform.
/// stop_t is empty outside without-replacement runs.
void write_csv(const ExperimentResult& result, std::ostream& os);

/// {"config": ..., "rows": [...], "summary": {...}}; rows mirror the CSV.
void write_json(const ExperimentResult& result, std::ostream& os);

/// Mean relative volume and per-step coverage against t, one polyline per
/// method, dashed for methods that are not time-uniform.
void write_svg(const ExperimentResult& result, std::ostream& os);

/// Writes to a file; throws std::runtime_error naming the path if it cannot be opened.
void emit(const ExperimentResult& result, OutputFormat format, const std::string& path);

std::string config_to_json(const ExperimentConfig& config);

/// Reads a config written with ExperimentConfig's field names. Starts from
/// the defaults of the file's preset (and k); unknown fields are errors.
ExperimentConfig config_from_json(std::string_view text);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace cseq
