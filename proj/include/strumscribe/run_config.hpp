#pragma once

#include <cstdint>
#include <string_view>

#include "json.hpp"
#include "strumscribe/barlines.hpp"
#include "strumscribe/likelihood.hpp"
#include "strumscribe/metrics.hpp"
#include "strumscribe/onsets.hpp"
#include "strumscribe/render.hpp"

namespace strumscribe {

/// Every tunable of the command-line tool.
struct RunConfig {
  DecoderConfig decoder;
  PostprocConfig postproc;
  OnsetConfig onsets;
  RenderOptions render;
  double strum_tolerance_sec = kStrumToleranceSec;
  double barline_tolerance_sec = kBarlineToleranceSec;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Overlays the keys present in `doc` onto `base`. Unknown keys and wrongly
/// typed values are ValidationErrors.
///
/// Layout: {"decoder":{sigma,c1,c2}, "postproc":{subdivision_factors,
/// deletion_penalty, insertion_penalty, tempo_change_penalty, snap_tolerance_sec, tempo_free_band,
/// lookahead}, "onsets":{frame_size, hop_size, mel_bands, fmin_hz, fmax_hz,
/// log_gain, delta, pre_max, post_max, pre_avg, post_avg, min_gap_sec},
/// "render":{use_repeat_symbol, grid_resolution, show_pattern_ids},
/// "strum_tolerance_sec", "barline_tolerance_sec", "seed"}.
RunConfig apply_config_json(const nlohmann::json& doc, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace strumscribe
