#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace strumscribe {

/// Meter label such as 4/4 or 6/8. Equality is componentwise, so 6/8 != 3/4.
struct TimeSignature {
  int numerator = 4;
  int denominator = 4;

  /// Parses "N/D". Throws ValidationError on malformed text or invalid values.
  static TimeSignature parse(std::string_view text);
  std::string to_string() const;

  /// Beats of length 1/denominator per measure, expressed in quarter notes.
  double quarter_notes() const { return numerator * 4.0 / denominator; }

  auto operator<=>(const TimeSignature&) const = default;
};

/// Throws ValidationError unless numerator >= 1 and denominator is in {1,2,4,8,16,32}.
void validate(const TimeSignature& ts);

/// One vocabulary entry. `onsets[k]` holds the onset positions of measure k of
/// the pattern as fractions of that measure in [0, 1), strictly ascending.
struct RhythmicPattern {
  std::string id;
  std::string name;
  TimeSignature time_signature;
  std::vector<std::vector<double>> onsets;

  int measures() const { return static_cast<int>(onsets.size()); }
  bool is_empty() const;

  bool operator==(const RhythmicPattern&) const = default;
};

/// Throws ValidationError if the pattern breaks a type invariant.
void validate(const RhythmicPattern& pattern);

/// Immutable, validated pattern vocabulary.
///
/// Construction appends one empty pattern (id "EMPTY_<num>_<den>") for every
/// time signature used by a non-empty pattern that does not already have an
/// explicit empty pattern. Pattern order is otherwise preserved, so pattern
/// indices are stable and can be used for tie-breaking.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<RhythmicPattern> patterns);

  const std::vector<RhythmicPattern>& patterns() const { return patterns_; }
  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  const RhythmicPattern& operator[](std::size_t i) const { return patterns_[i]; }

  std::optional<std::size_t> index_of(std::string_view id) const;
  /// Throws ValidationError for unknown ids.
  const RhythmicPattern& at(std::string_view id) const;

  /// Indices of the patterns labelled with `ts`, in vocabulary order.
  std::span<const std::size_t> with_signature(const TimeSignature& ts) const;
  /// Distinct time signatures in order of first appearance.
  const std::vector<TimeSignature>& signatures() const { return signatures_; }

  std::size_t generated_empty_count() const { return generated_empty_; }

  bool operator==(const Vocabulary& other) const { return patterns_ == other.patterns_; }

 private:
  std::vector<RhythmicPattern> patterns_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<TimeSignature, std::vector<std::size_t>> by_signature_;
  std::vector<TimeSignature> signatures_;
  std::size_t generated_empty_ = 0;
};

std::string empty_pattern_id(const TimeSignature& ts);

/// Reads the JSON vocabulary format `{"patterns":[...]}`.
Vocabulary load_vocabulary(std::istream& source);
Vocabulary parse_vocabulary(std::string_view json_text);
/// Writes every pattern (including generated empty ones) so that loading the
/// result yields an equal vocabulary.
std::string serialize_vocabulary(const Vocabulary& vocab);

struct GlobalPosition {
  int measure_offset = 0;
  double position = 0.0;

  bool operator==(const GlobalPosition&) const = default;
};

/// Flattens a pattern into (measure offset, position) pairs in temporal order.
std::vector<GlobalPosition> pattern_positions_global(const RhythmicPattern& pattern);

}  // namespace strumscribe
