#include "strumscribe/vocabulary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "strumscribe/error.hpp"

namespace strumscribe {

namespace {

int parse_positive_int(std::string_view text, std::string_view whole) {
  int value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ValidationError("malformed time signature '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

TimeSignature TimeSignature::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw ValidationError("malformed time signature '" + std::string(text) + "'");
  }
  TimeSignature ts{parse_positive_int(text.substr(0, slash), text),
                   parse_positive_int(text.substr(slash + 1), text)};
  validate(ts);
  return ts;
}

std::string TimeSignature::to_string() const {
  return std::to_string(numerator) + "/" + std::to_string(denominator);
}

void validate(const TimeSignature& ts) {
  if (ts.numerator < 1) {
    throw ValidationError("time signature numerator must be >= 1, got " + ts.to_string());
  }
  switch (ts.denominator) {
    case 1: case 2: case 4: case 8: case 16: case 32:
      return;
    default:
      throw ValidationError("time signature denominator must be a power of two <= 32, got " +
                            ts.to_string());
  }
}

bool RhythmicPattern::is_empty() const {
  return std::all_of(onsets.begin(), onsets.end(), [](const auto& m) { return m.empty(); });
}

void validate(const RhythmicPattern& pattern) {
  const auto where = [&] { return "pattern '" + pattern.id + "': "; };
  if (pattern.id.empty()) throw ValidationError("pattern id must not be empty");
  validate(pattern.time_signature);
  if (pattern.measures() != 1 && pattern.measures() != 2) {
    throw ValidationError(where() + "measures must be 1 or 2, got " +
                          std::to_string(pattern.measures()));
  }
  for (const auto& measure : pattern.onsets) {
    for (std::size_t i = 0; i < measure.size(); ++i) {
      const double x = measure[i];
      if (!std::isfinite(x) || x < 0.0 || x >= 1.0) {
        throw ValidationError(where() + "onset position out of [0,1)");
      }
      if (i > 0 && !(measure[i - 1] < x)) {
        throw ValidationError(where() + "onset positions must be strictly ascending");
      }
    }
  }
  if (pattern.is_empty() && pattern.measures() != 1) {
    throw ValidationError(where() + "an empty pattern must span exactly one measure");
  }
}

std::string empty_pattern_id(const TimeSignature& ts) {
  return "EMPTY_" + std::to_string(ts.numerator) + "_" + std::to_string(ts.denominator);
}

Vocabulary::Vocabulary(std::vector<RhythmicPattern> patterns) : patterns_(std::move(patterns)) {
  std::set<std::pair<TimeSignature, std::vector<std::vector<double>>>> seen;
  std::set<TimeSignature> has_empty;
  std::vector<TimeSignature> needs_empty;

  for (const auto& p : patterns_) {
    validate(p);
    if (by_id_.count(p.id) != 0) throw ValidationError("duplicate pattern id '" + p.id + "'");
    by_id_.emplace(p.id, by_id_.size());
    if (p.is_empty()) {
      if (!has_empty.insert(p.time_signature).second) {
        throw ValidationError("more than one empty pattern for " + p.time_signature.to_string());
      }
      continue;
    }
    if (!seen.emplace(p.time_signature, p.onsets).second) {
      throw ValidationError("pattern '" + p.id + "' duplicates an earlier pattern in " +
                            p.time_signature.to_string());
    }
    if (std::find(needs_empty.begin(), needs_empty.end(), p.time_signature) == needs_empty.end()) {
      needs_empty.push_back(p.time_signature);
    }
  }

  for (const auto& ts : needs_empty) {
    if (has_empty.count(ts) != 0) continue;
    RhythmicPattern empty{empty_pattern_id(ts), "", ts, {{}}};
    if (by_id_.count(empty.id) != 0) {
      throw ValidationError("pattern id '" + empty.id + "' is reserved for the generated empty pattern");
    }
    by_id_.emplace(empty.id, patterns_.size());
    patterns_.push_back(std::move(empty));
    ++generated_empty_;
  }

  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    const auto& ts = patterns_[i].time_signature;
    auto& members = by_signature_[ts];
    if (members.empty()) signatures_.push_back(ts);
    members.push_back(i);
  }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const RhythmicPattern& Vocabulary::at(std::string_view id) const {
  auto index = index_of(id);
  if (!index) throw ValidationError("unknown pattern id '" + std::string(id) + "'");
  return patterns_[*index];
}

std::span<const std::size_t> Vocabulary::with_signature(const TimeSignature& ts) const {
  auto it = by_signature_.find(ts);
  if (it == by_signature_.end()) return {};
  return it->second;
}

Vocabulary parse_vocabulary(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("vocabulary is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("patterns") || !doc["patterns"].is_array()) {
    throw ValidationError("vocabulary must be an object with a \"patterns\" array");
  }

  std::vector<RhythmicPattern> patterns;
  try {
    for (const auto& entry : doc["patterns"]) {
      RhythmicPattern p;
      p.id = entry.at("id").get<std::string>();
      if (entry.contains("name") && !entry["name"].is_null()) p.name = entry["name"].get<std::string>();
      p.time_signature = TimeSignature::parse(entry.at("time_signature").get<std::string>());
      const int measures = entry.at("measures").get<int>();
      p.onsets = entry.at("onsets").get<std::vector<std::vector<double>>>();
      if (measures != 1 && measures != 2) {
        throw ValidationError("pattern '" + p.id + "': measures must be 1 or 2");
      }
      if (static_cast<int>(p.onsets.size()) != measures) {
        throw ValidationError("pattern '" + p.id + "': onsets must hold one list per measure");
      }
      patterns.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed vocabulary entry: ") + e.what());
  }
  return Vocabulary(std::move(patterns));
}

Vocabulary load_vocabulary(std::istream& source) {
  std::ostringstream buffer;
  buffer << source.rdbuf();
  if (source.bad()) throw IoError("failed to read vocabulary stream");
  return parse_vocabulary(buffer.str());
}

std::string serialize_vocabulary(const Vocabulary& vocab) {
  nlohmann::json patterns = nlohmann::json::array();
  for (const auto& p : vocab.patterns()) {
    nlohmann::json entry;
    entry["id"] = p.id;
    if (!p.name.empty()) entry["name"] = p.name;
    entry["time_signature"] = p.time_signature.to_string();
    entry["measures"] = p.measures();
    entry["onsets"] = p.onsets;
    patterns.push_back(std::move(entry));
  }
  return nlohmann::json{{"patterns", std::move(patterns)}}.dump(2) + "\n";
}

std::vector<GlobalPosition> pattern_positions_global(const RhythmicPattern& pattern) {
  std::vector<GlobalPosition> out;
  for (int m = 0; m < pattern.measures(); ++m) {
    for (double x : pattern.onsets[static_cast<std::size_t>(m)]) out.push_back({m, x});
  }
  return out;
}

}  // namespace strumscribe
