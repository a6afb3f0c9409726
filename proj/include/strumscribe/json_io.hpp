#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "strumscribe/decoder.hpp"
#include "strumscribe/metrics.hpp"
#include "strumscribe/synth.hpp"
#include "strumscribe/timeline.hpp"

namespace strumscribe {

/// Whole-file read; IoError when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Parses JSON text; ValidationError (naming `what`) on syntax errors.
nlohmann::json parse_json(std::string_view text, std::string_view what);

// {"strums_sec":[...]}
nlohmann::json strums_to_json(const StrumSequence& strums);
StrumSequence strums_from_json(const nlohmann::json& doc);

// {"barlines_sec":[...]}
nlohmann::json barlines_to_json(const BarlineTrack& bars);
BarlineTrack barlines_from_json(const nlohmann::json& doc);

// {"total_cost":..., "measures":[{"index","pattern_id","phase","time_signature"}]}
nlohmann::json transcription_to_json(const Transcription& t);
Transcription transcription_from_json(const nlohmann::json& doc);

// {f1, precision, recall, pattern_disc, timesig_disc, measure_disc} plus match counts
nlohmann::json report_to_json(const EvaluationReport& report);
// Each metric as {"mean":..., "sem":...}
nlohmann::json aggregate_to_json(const AggregateReport& agg);

// {"transcription", "barlines_sec", "nominal_strums_sec", "observed_strums_sec"}
nlohmann::json ground_truth_bundle(const SynthSong& song);

/// Serialization used for every output file: two-space indent, trailing newline.
std::string dump(const nlohmann::json& doc);

}  // namespace strumscribe
