#include "strumscribe/json_io.hpp"

#include <fstream>
#include <sstream>

#include "strumscribe/error.hpp"

namespace strumscribe {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

nlohmann::json parse_json(std::string_view text, std::string_view what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

namespace {

std::vector<double> number_array(const nlohmann::json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key) || !doc[key].is_array()) {
    throw ValidationError(std::string("expected an object with a \"") + key + "\" array");
  }
  std::vector<double> out;
  for (const auto& v : doc[key]) {
    if (!v.is_number()) throw ValidationError(std::string("\"") + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

nlohmann::json strums_to_json(const StrumSequence& strums) {
  return {{"strums_sec", strums.times()}};
}

StrumSequence strums_from_json(const nlohmann::json& doc) {
  return StrumSequence(number_array(doc, "strums_sec"));
}

nlohmann::json barlines_to_json(const BarlineTrack& bars) {
  return {{"barlines_sec", bars.times()}};
}

BarlineTrack barlines_from_json(const nlohmann::json& doc) {
  return BarlineTrack(number_array(doc, "barlines_sec"));
}

nlohmann::json transcription_to_json(const Transcription& t) {
  nlohmann::json measures = nlohmann::json::array();
  for (const auto& e : t.entries) {
    measures.push_back({{"index", e.measure_index},
                        {"pattern_id", e.pattern_id},
                        {"phase", e.phase},
                        {"time_signature", e.time_signature.to_string()}});
  }
  return {{"total_cost", t.total_cost}, {"measures", std::move(measures)}};
}

Transcription transcription_from_json(const nlohmann::json& doc) {
  Transcription t;
  try {
    t.total_cost = doc.at("total_cost").get<double>();
    for (const auto& m : doc.at("measures")) {
      TranscriptionEntry e;
      e.measure_index = m.at("index").get<std::size_t>();
      e.pattern_id = m.at("pattern_id").get<std::string>();
      e.phase = m.at("phase").get<int>();
      e.time_signature = TimeSignature::parse(m.at("time_signature").get<std::string>());
      t.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed transcription: ") + e.what());
  }
  return t;
}

nlohmann::json report_to_json(const EvaluationReport& r) {
  return {{"f1", r.strums.f1},
          {"precision", r.strums.precision},
          {"recall", r.strums.recall},
          {"true_positives", r.strums.true_positives},
          {"false_positives", r.strums.false_positives},
          {"false_negatives", r.strums.false_negatives},
          {"pattern_disc", r.pattern_disc},
          {"timesig_disc", r.timesig_disc},
          {"measure_disc", r.measure_disc}};
}

nlohmann::json aggregate_to_json(const AggregateReport& agg) {
  const auto block = [](const MetricSummary& s) { return nlohmann::json{{"mean", s.mean}, {"sem", s.sem}}; };
  return {{"songs", agg.songs},
          {"f1", block(agg.f1)},
          {"precision", block(agg.precision)},
          {"recall", block(agg.recall)},
          {"pattern_disc", block(agg.pattern_disc)},
          {"timesig_disc", block(agg.timesig_disc)},
          {"measure_disc", block(agg.measure_disc)}};
}

nlohmann::json ground_truth_bundle(const SynthSong& song) {
  return {{"transcription", transcription_to_json(song.ground_truth)},
          {"barlines_sec", song.bars.times()},
          {"nominal_strums_sec", song.nominal.times()},
          {"observed_strums_sec", song.observed.times()}};
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace strumscribe
