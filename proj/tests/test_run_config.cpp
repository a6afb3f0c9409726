#include "doctest.h"
#include "strumscribe/error.hpp"
#include "strumscribe/run_config.hpp"

using namespace strumscribe;
using nlohmann::json;

TEST_CASE("defaults") {
  const RunConfig cfg;
  CHECK(cfg.decoder.sigma == 0.03);
  CHECK(cfg.decoder.c1 == 2.0);
  CHECK(cfg.decoder.c2 == 6.0);
  CHECK(cfg.strum_tolerance_sec == 0.05);
  CHECK(cfg.barline_tolerance_sec == 0.07);
  CHECK(cfg.onsets.frame_size == 2048);
  CHECK(cfg.onsets.hop_size == 512);
  CHECK(cfg.onsets.mel_bands == 128);
  CHECK(cfg.onsets.min_gap_sec == 0.05);
  CHECK(cfg.render.grid_resolution == 16);
  CHECK(cfg.render.use_repeat_symbol);
}

TEST_CASE("config overrides are applied per section") {
  const auto cfg = apply_config_json(json::parse(R"({
    "decoder": {"c1": 0.5, "sigma": 0.05},
    "postproc": {"subdivision_factors": [1, 2], "lookahead": 3},
    "onsets": {"delta": 0.1},
    "render": {"grid_resolution": 12},
    "strum_tolerance_sec": 0.04,
    "seed": 9
  })"));
  CHECK(cfg.decoder.c1 == 0.5);
  CHECK(cfg.decoder.c2 == 6.0);
  CHECK(cfg.decoder.sigma == 0.05);
  CHECK(cfg.postproc.subdivision_factors == std::vector<int>{1, 2});
  CHECK(cfg.postproc.lookahead == 3);
  CHECK(cfg.onsets.delta == 0.1);
  CHECK(cfg.render.grid_resolution == 12);
  CHECK(cfg.strum_tolerance_sec == 0.04);
  CHECK(cfg.seed == 9);
}

TEST_CASE("config round trips through JSON") {
  RunConfig cfg;
  cfg.decoder.c2 = 1.5;
  cfg.onsets.pre_avg = 7;
  cfg.render.show_pattern_ids = true;
  const auto back = apply_config_json(config_to_json(cfg));
  CHECK(back.decoder.c2 == 1.5);
  CHECK(back.onsets.pre_avg == 7);
  CHECK(back.render.show_pattern_ids);
  CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("unknown keys, wrong types and invalid values are rejected") {
  CHECK_THROWS_AS(apply_config_json(json::parse(R"({"decoder": {"c3": 1}})")), ValidationError);
  CHECK_THROWS_AS(apply_config_json(json::parse(R"({"verbose": true})")), ValidationError);
  CHECK_THROWS_AS(apply_config_json(json::parse(R"({"decoder": {"c1": "big"}})")), ValidationError);
  CHECK_THROWS_AS(apply_config_json(json::parse(R"({"decoder": 3})")), ValidationError);
  CHECK_THROWS_AS(apply_config_json(json::parse(R"({"decoder": {"sigma": 0}})")), ValidationError);
  CHECK_THROWS_AS(apply_config_json(json::parse(R"({"onsets": {"hop_size": 4096}})")), ValidationError);
  CHECK_THROWS_AS(apply_config_json(json::parse("[]")), ValidationError);
}
