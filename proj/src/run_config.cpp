#include "strumscribe/run_config.hpp"

#include <functional>
#include <map>
#include <string>

#include "strumscribe/error.hpp"

namespace strumscribe {

void RunConfig::validate() const {
  decoder.validate();
  postproc.validate();
  onsets.validate();
  render.validate();
  if (!(strum_tolerance_sec > 0.0)) throw ValidationError("strum_tolerance_sec must be > 0");
  if (!(barline_tolerance_sec > 0.0)) throw ValidationError("barline_tolerance_sec must be > 0");
}

namespace {

using Setter = std::function<void(const nlohmann::json&)>;

template <typename T>
Setter bind(T& field) {
  return [&field](const nlohmann::json& v) { field = v.get<T>(); };
}

void apply_section(const nlohmann::json& doc, const std::map<std::string, Setter>& setters,
                   const std::string& prefix) {
  if (!doc.is_object()) throw ValidationError("config section '" + prefix + "' must be an object");
  for (const auto& [key, value] : doc.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ValidationError("unknown config key '" + prefix + key + "'");
    try {
      it->second(value);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("config key '" + prefix + key + "' has the wrong type: " + e.what());
    }
  }
}

}  // namespace

RunConfig apply_config_json(const nlohmann::json& doc, RunConfig cfg) {
  const std::map<std::string, Setter> decoder{
      {"sigma", bind(cfg.decoder.sigma)}, {"c1", bind(cfg.decoder.c1)}, {"c2", bind(cfg.decoder.c2)}};
  const std::map<std::string, Setter> postproc{
      {"subdivision_factors", bind(cfg.postproc.subdivision_factors)},
      {"deletion_penalty", bind(cfg.postproc.deletion_penalty)},
      {"insertion_penalty", bind(cfg.postproc.insertion_penalty)},
      {"tempo_change_penalty", bind(cfg.postproc.tempo_change_penalty)},
      {"snap_tolerance_sec", bind(cfg.postproc.snap_tolerance_sec)},
      {"tempo_free_band", bind(cfg.postproc.tempo_free_band)},
      {"lookahead", bind(cfg.postproc.lookahead)}};
  const std::map<std::string, Setter> onsets{
      {"frame_size", bind(cfg.onsets.frame_size)}, {"hop_size", bind(cfg.onsets.hop_size)},
      {"mel_bands", bind(cfg.onsets.mel_bands)},   {"fmin_hz", bind(cfg.onsets.fmin_hz)},
      {"fmax_hz", bind(cfg.onsets.fmax_hz)},       {"log_gain", bind(cfg.onsets.log_gain)},
      {"delta", bind(cfg.onsets.delta)},           {"pre_max", bind(cfg.onsets.pre_max)},
      {"post_max", bind(cfg.onsets.post_max)},     {"pre_avg", bind(cfg.onsets.pre_avg)},
      {"post_avg", bind(cfg.onsets.post_avg)},     {"min_gap_sec", bind(cfg.onsets.min_gap_sec)}};
  const std::map<std::string, Setter> render{
      {"use_repeat_symbol", bind(cfg.render.use_repeat_symbol)},
      {"grid_resolution", bind(cfg.render.grid_resolution)},
      {"show_pattern_ids", bind(cfg.render.show_pattern_ids)}};
  const std::map<std::string, Setter> top{
      {"decoder", [&](const nlohmann::json& v) { apply_section(v, decoder, "decoder."); }},
      {"postproc", [&](const nlohmann::json& v) { apply_section(v, postproc, "postproc."); }},
      {"onsets", [&](const nlohmann::json& v) { apply_section(v, onsets, "onsets."); }},
      {"render", [&](const nlohmann::json& v) { apply_section(v, render, "render."); }},
      {"strum_tolerance_sec", bind(cfg.strum_tolerance_sec)},
      {"barline_tolerance_sec", bind(cfg.barline_tolerance_sec)},
      {"seed", bind(cfg.seed)}};
  apply_section(doc, top, "");
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  return {
      {"decoder", {{"sigma", cfg.decoder.sigma}, {"c1", cfg.decoder.c1}, {"c2", cfg.decoder.c2}}},
      {"postproc",
       {{"subdivision_factors", cfg.postproc.subdivision_factors},
        {"deletion_penalty", cfg.postproc.deletion_penalty},
        {"insertion_penalty", cfg.postproc.insertion_penalty},
        {"tempo_change_penalty", cfg.postproc.tempo_change_penalty},
        {"snap_tolerance_sec", cfg.postproc.snap_tolerance_sec},
        {"tempo_free_band", cfg.postproc.tempo_free_band},
        {"lookahead", cfg.postproc.lookahead}}},
      {"onsets",
       {{"frame_size", cfg.onsets.frame_size}, {"hop_size", cfg.onsets.hop_size},
        {"mel_bands", cfg.onsets.mel_bands},   {"fmin_hz", cfg.onsets.fmin_hz},
        {"fmax_hz", cfg.onsets.fmax_hz},       {"log_gain", cfg.onsets.log_gain},
        {"delta", cfg.onsets.delta},           {"pre_max", cfg.onsets.pre_max},
        {"post_max", cfg.onsets.post_max},     {"pre_avg", cfg.onsets.pre_avg},
        {"post_avg", cfg.onsets.post_avg},     {"min_gap_sec", cfg.onsets.min_gap_sec}}},
      {"render",
       {{"use_repeat_symbol", cfg.render.use_repeat_symbol},
        {"grid_resolution", cfg.render.grid_resolution},
        {"show_pattern_ids", cfg.render.show_pattern_ids}}},
      {"strum_tolerance_sec", cfg.strum_tolerance_sec},
      {"barline_tolerance_sec", cfg.barline_tolerance_sec},
      {"seed", cfg.seed}};
}

}  // namespace strumscribe
