#include "strumscribe/render.hpp"

#include <cmath>
#include <sstream>

#include "strumscribe/error.hpp"

namespace strumscribe {

void RenderOptions::validate() const {
  if (grid_resolution < 1) throw ValidationError("grid_resolution must be >= 1");
}

namespace {

std::string grid_cell(const std::vector<double>& onsets, int resolution, std::size_t measure,
                      const std::string& pattern_id, std::vector<std::string>& warnings) {
  std::string cell(static_cast<std::size_t>(resolution), '.');
  for (double pos : onsets) {
    const double exact = pos * resolution;
    long slot = std::lround(exact);
    bool lossy = std::abs(exact - static_cast<double>(slot)) > 1e-9;
    if (slot >= resolution) {
      slot = resolution - 1;
      lossy = true;
    }
    auto& c = cell[static_cast<std::size_t>(slot)];
    if (c == 'x') lossy = true;
    c = 'x';
    if (lossy) {
      std::ostringstream msg;
      msg << "measure " << measure << ": onset " << pos << " of pattern '" << pattern_id
          << "' rendered at grid slot " << slot << "/" << resolution;
      warnings.push_back(msg.str());
    }
  }
  return cell;
}

}  // namespace

RenderResult render_text(const Transcription& t, const Vocabulary& vocab, const RenderOptions& opts) {
  opts.validate();
  validate_transcription(t, vocab);

  RenderResult result;
  std::string& out = result.text;
  const auto add_cell = [&](std::size_t m, const std::string& cell) {
    const bool needs_marker =
        m == 0 || t.entries[m].time_signature != t.entries[m - 1].time_signature;
    if (needs_marker) {
      if (!out.empty()) out += " |";
      if (!out.empty()) out += ' ';
      out += t.entries[m].time_signature.to_string();
    }
    out += " | ";
    out += cell;
  };

  const std::string* previous_id = nullptr;
  for (std::size_t m = 0; m < t.entries.size();) {
    const auto& entry = t.entries[m];
    const auto& pattern = vocab.at(entry.pattern_id);
    const auto len = static_cast<std::size_t>(pattern.measures());
    const bool repeat = opts.use_repeat_symbol && previous_id != nullptr && *previous_id == pattern.id;

    if (repeat) {
      add_cell(m, len == 1 ? "%" : "%%");
    } else {
      for (std::size_t k = 0; k < len; ++k) {
        std::string cell = grid_cell(pattern.onsets[k], opts.grid_resolution, m + k, pattern.id,
                                     result.warnings);
        if (opts.show_pattern_ids && k == 0) cell = pattern.id + ": " + cell;
        add_cell(m + k, cell);
      }
    }
    previous_id = &entry.pattern_id;
    m += len;
  }
  if (!out.empty()) out += " |";
  return result;
}

}  // namespace strumscribe
