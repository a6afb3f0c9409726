#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "strumscribe/synth.hpp"
#include "strumscribe/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kFixtures = STRUMSCRIBE_FIXTURES;

struct Run {
  int code = -1;
  std::string out, err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("strumscribe_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

Run cli(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const auto err = scratch() / "stderr.txt";
  const std::string cmd = std::string("'") + STRUMSCRIBE_CLI + "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

json load(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::string> pattern_ids(const json& transcription) {
  std::vector<std::string> ids;
  for (const auto& m : transcription["measures"]) ids.push_back(m["pattern_id"]);
  return ids;
}

const std::string kSmallVocab = R"({"patterns":[
  {"id":"A","time_signature":"4/4","measures":1,"onsets":[[0.0,0.5]]},
  {"id":"Q","time_signature":"4/4","measures":1,"onsets":[[0.0,0.25,0.5,0.75]]},
  {"id":"W","time_signature":"4/4","measures":1,"onsets":[[0.0]]}]})";

}  // namespace

TEST_CASE("decode reproduces the golden fixtures") {
  for (const char* song : {"song_44", "song_mixed", "song_rests"}) {
    CAPTURE(song);
    const auto dir = kFixtures / song;
    const auto out = scratch() / (std::string(song) + ".json");
    const auto r = cli("decode --strums " + q(dir / "strums.json") + " --barlines " + q(dir / "barlines.json") +
                       " --vocab " + q(kFixtures / "vocab.json") + " --out " + q(out));
    REQUIRE(r.code == 0);
    CHECK(slurp(out) == slurp(dir / "expected_transcription.json"));
    CHECK(pattern_ids(load(out)) == pattern_ids(load(dir / "transcription.json")));
  }
}

TEST_CASE("decode reports discarded strums") {
  const auto dir = scratch();
  spit(dir / "vocab.json", kSmallVocab);
  spit(dir / "bars.json", R"({"barlines_sec":[1.0,3.0,5.0]})");
  spit(dir / "strums.json", R"({"strums_sec":[0.5,1.0,2.0,3.0,4.0,5.5]})");
  const auto r = cli("decode --strums " + q(dir / "strums.json") + " --barlines " + q(dir / "bars.json") +
                     " --vocab " + q(dir / "vocab.json") + " --out " + q(dir / "t.json"));
  REQUIRE(r.code == 0);
  CHECK(r.err.find("discarded 2 strum(s)") != std::string::npos);
  CHECK(pattern_ids(load(dir / "t.json")) == std::vector<std::string>{"A", "A"});
}

TEST_CASE("barlines command") {
  const auto dir = scratch();
  spit(dir / "steady.json", R"({"barlines_sec":[0.5,2.5,4.5,6.5]})");
  REQUIRE(cli("barlines --in " + q(dir / "steady.json") + " --out " + q(dir / "steady_out.json")).code == 0);
  CHECK(load(dir / "steady_out.json")["barlines_sec"] == json::parse("[0.5,2.5,4.5,6.5]"));

  spit(dir / "spurious.json", R"({"barlines_sec":[0,2,3,4,6]})");
  REQUIRE(cli("barlines --in " + q(dir / "spurious.json") + " --out " + q(dir / "spurious_out.json")).code == 0);
  CHECK(load(dir / "spurious_out.json")["barlines_sec"] == json::parse("[0.0,2.0,4.0,6.0]"));

  const std::string odd = "{ \"barlines_sec\" : [0, 2, 3,4, 6] }";
  spit(dir / "odd.json", odd);
  REQUIRE(cli("barlines --no-barline-postproc --in " + q(dir / "odd.json") + " --out " + q(dir / "odd_out.json"))
              .code == 0);
  CHECK(slurp(dir / "odd_out.json") == odd);
}

TEST_CASE("eval on single songs") {
  const auto dir = scratch();
  spit(dir / "vocab.json", kSmallVocab);
  spit(dir / "bars.json", R"({"barlines_sec":[0,2,4,6]})");
  spit(dir / "truth.json", R"({"strums_sec":[0,0.5,1,1.5,2,2.5,3,3.5,4,4.5,5,5.5]})");
  spit(dir / "perfect.json", R"({"total_cost":0,"measures":[
    {"index":0,"pattern_id":"Q","phase":0,"time_signature":"4/4"},
    {"index":1,"pattern_id":"Q","phase":0,"time_signature":"4/4"},
    {"index":2,"pattern_id":"Q","phase":0,"time_signature":"4/4"}]})");
  spit(dir / "off.json", R"({"total_cost":0,"measures":[
    {"index":0,"pattern_id":"Q","phase":0,"time_signature":"4/4"},
    {"index":1,"pattern_id":"Q","phase":0,"time_signature":"4/4"},
    {"index":2,"pattern_id":"W","phase":0,"time_signature":"4/4"}]})");
  const std::string common = " --barlines " + q(dir / "bars.json") + " --vocab " + q(dir / "vocab.json") +
                             " --ground-truth " + q(dir / "truth.json");

  REQUIRE(cli("eval --transcription " + q(dir / "perfect.json") + common + " --out " + q(dir / "r1.json")).code == 0);
  auto report = load(dir / "r1.json");
  CHECK(report["f1"] == 1.0);
  CHECK(report["pattern_disc"] == 0.0);

  // Last measure written as one strum instead of four: 9 of 12 recovered.
  REQUIRE(cli("eval --transcription " + q(dir / "off.json") + common + " --out " + q(dir / "r2.json")).code == 0);
  report = load(dir / "r2.json");
  CHECK(report["true_positives"] == 9);
  CHECK(report["precision"] == 1.0);
  CHECK(report["recall"].get<double>() == doctest::Approx(0.75));
  CHECK(report["f1"].get<double>() == doctest::Approx(2 * 0.75 / 1.75));
  CHECK(report["pattern_disc"].get<double>() == doctest::Approx(1.0 / 3.0));

  spit(dir / "bad.json", R"({"total_cost":0,"measures":[{"index":0,"pattern_id":"nope","phase":0,"time_signature":"4/4"}]})");
  CHECK(cli("eval --transcription " + q(dir / "bad.json") + common + " --out " + q(dir / "r3.json")).code == 1);
}

TEST_CASE("batch eval aggregates mean and standard error in manifest order") {
  const auto dir = scratch() / "batch";
  fs::create_directories(dir);
  const auto vocab = kFixtures / "vocab.json";
  std::string manifest;
  for (int i = 0; i < 5; ++i) {
    const auto song = dir / ("s" + std::to_string(i));
    REQUIRE(cli("synth --vocab " + q(vocab) + " --out-dir " + q(song) + " --seed " + std::to_string(100 + i) +
                " --measures 12 --jitter 0.03 --miss-rate 0.1 --spurious-rate 0.1")
                .code == 0);
    REQUIRE(cli("decode --strums " + q(song / "strums.json") + " --barlines " + q(song / "barlines.json") +
                " --vocab " + q(vocab) + " --out " + q(song / "decoded.json"))
                .code == 0);
    // Relative paths resolve against the manifest directory.
    manifest += json{{"song_id", "song" + std::to_string(i)},
                     {"transcription", "s" + std::to_string(i) + "/decoded.json"},
                     {"barlines", "s" + std::to_string(i) + "/barlines.json"},
                     {"vocab", vocab.string()},
                     {"ground_truth", "s" + std::to_string(i) + "/nominal.json"}}
                    .dump() +
                "\n";
  }
  spit(dir / "manifest.ndjson", manifest);
  const auto r = cli("eval --manifest " + q(dir / "manifest.ndjson") + " --jobs 3 --out " + q(dir / "report.json"));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("f1 ") != std::string::npos);
  const auto report = load(dir / "report.json");
  REQUIRE(report["songs"].size() == 5);

  std::vector<double> f1;
  for (int i = 0; i < 5; ++i) {
    const auto& s = report["songs"][static_cast<std::size_t>(i)];
    CHECK(s["song_id"] == "song" + std::to_string(i));
    const auto song = dir / ("s" + std::to_string(i));
    REQUIRE(cli("eval --transcription " + q(song / "decoded.json") + " --barlines " + q(song / "barlines.json") +
                " --vocab " + q(vocab) + " --ground-truth " + q(song / "nominal.json") + " --out " +
                q(song / "single.json"))
                .code == 0);
    CHECK(load(song / "single.json")["f1"] == s["f1"]);
    f1.push_back(s["f1"].get<double>());
  }
  double mean = 0.0;
  for (double v : f1) mean += v / 5.0;
  double var = 0.0;
  for (double v : f1) var += (v - mean) * (v - mean) / 4.0;
  CHECK(report["aggregate"]["songs"] == 5);
  CHECK(report["aggregate"]["f1"]["mean"].get<double>() == doctest::Approx(mean).epsilon(1e-12));
  CHECK(report["aggregate"]["f1"]["sem"].get<double>() == doctest::Approx(std::sqrt(var / 5.0)).epsilon(1e-12));

  const auto again = cli("eval --manifest " + q(dir / "manifest.ndjson") + " --jobs 1 --out " + q(dir / "report1.json"));
  REQUIRE(again.code == 0);
  CHECK(slurp(dir / "report1.json") == slurp(dir / "report.json"));
}

TEST_CASE("render command") {
  const auto dir = scratch();
  spit(dir / "vocab.json", kSmallVocab);
  spit(dir / "t.json", R"({"total_cost":0,"measures":[
    {"index":0,"pattern_id":"A","phase":0,"time_signature":"4/4"},
    {"index":1,"pattern_id":"A","phase":0,"time_signature":"4/4"},
    {"index":2,"pattern_id":"A","phase":0,"time_signature":"4/4"}]})");
  auto r = cli("render --transcription " + q(dir / "t.json") + " --vocab " + q(dir / "vocab.json") +
               " --grid-resolution 8");
  REQUIRE(r.code == 0);
  CHECK(r.out == "4/4 | x...x... | % | % |\n");

  spit(dir / "cfg.json", R"({"render":{"grid_resolution":8,"use_repeat_symbol":false}})");
  r = cli("render --transcription " + q(dir / "t.json") + " --vocab " + q(dir / "vocab.json") + " --config " +
          q(dir / "cfg.json") + " --grid-resolution 4 --out " + q(dir / "out.txt"));
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "out.txt") == "4/4 | x.x. | x.x. | x.x. |\n");
}

TEST_CASE("pipeline recovers a synthesized song end to end") {
  const auto dir = scratch() / "pipe";
  const auto vocab = kFixtures / "vocab.json";
  REQUIRE(cli("synth --vocab " + q(kFixtures / "vocab_44.json") + " --out-dir " + q(dir) +
              " --seed 7 --measures 12 --switch-prob 0.4 --wav")
              .code == 0);
  REQUIRE(fs::exists(dir / "song.wav"));
  const auto r = cli("pipeline --wav " + q(dir / "song.wav") + " --barlines " + q(dir / "barlines.json") +
                     " --vocab " + q(vocab) + " --out " + q(dir / "pipe.json") + " --dump-dir " + q(dir / "dump"));
  REQUIRE(r.code == 0);
  CHECK(pattern_ids(load(dir / "pipe.json")) == pattern_ids(load(dir / "transcription.json")));
  CHECK(r.out == slurp(dir / "dump" / "rendered.txt"));

  // The same result from the individual commands.
  REQUIRE(cli("onsets --in " + q(dir / "song.wav") + " --out " + q(dir / "onsets.json")).code == 0);
  REQUIRE(cli("barlines --in " + q(dir / "barlines.json") + " --out " + q(dir / "clean.json")).code == 0);
  REQUIRE(cli("decode --strums " + q(dir / "onsets.json") + " --barlines " + q(dir / "clean.json") + " --vocab " +
              q(vocab) + " --out " + q(dir / "chained.json"))
              .code == 0);
  CHECK(slurp(dir / "onsets.json") == slurp(dir / "dump" / "strums.json"));
  CHECK(slurp(dir / "clean.json") == slurp(dir / "dump" / "barlines.json"));
  CHECK(slurp(dir / "chained.json") == slurp(dir / "pipe.json"));
}

TEST_CASE("pipeline on silence yields empty measures") {
  const auto dir = scratch();
  strumscribe::AudioBuffer silence;
  silence.samples.assign(44100 * 5, 0.0f);
  strumscribe::write_wav(dir / "silence.wav", silence);
  spit(dir / "bars.json", R"({"barlines_sec":[0,2,4]})");
  const auto r = cli("pipeline --wav " + q(dir / "silence.wav") + " --barlines " + q(dir / "bars.json") +
                     " --vocab " + q(kFixtures / "vocab.json") + " --out " + q(dir / "silent.json"));
  REQUIRE(r.code == 0);
  CHECK(pattern_ids(load(dir / "silent.json")) == std::vector<std::string>{"EMPTY_4_4", "EMPTY_4_4"});
  CHECK(r.out == "4/4 | ................ | % |\n");
}

TEST_CASE("exit codes") {
  const auto dir = scratch();
  auto r = cli("pipeline --wav " + q(dir / "missing.wav") + " --barlines " + q(dir / "missing.json") + " --vocab " +
               q(kFixtures / "vocab.json") + " --out " + q(dir / "x.json"));
  CHECK(r.code == 2);
  CHECK(r.err.find("missing") != std::string::npos);

  r = cli("decode --strums " + q(dir / "nope.json") + " --barlines x --vocab y --out z");
  CHECK(r.code == 2);

  spit(dir / "broken.json", "{\"patterns\": [");
  spit(dir / "bars.json", R"({"barlines_sec":[0,2]})");
  spit(dir / "strums.json", R"({"strums_sec":[0.5]})");
  r = cli("decode --strums " + q(dir / "strums.json") + " --barlines " + q(dir / "bars.json") + " --vocab " +
          q(dir / "broken.json") + " --out " + q(dir / "z.json"));
  CHECK(r.code == 1);

  spit(dir / "typo.json", R"({"decoder":{"c_1":1}})");
  r = cli("decode --strums " + q(dir / "strums.json") + " --barlines " + q(dir / "bars.json") + " --vocab " +
          q(kFixtures / "vocab.json") + " --config " + q(dir / "typo.json") + " --out " + q(dir / "z.json"));
  CHECK(r.code == 1);
  CHECK(r.err.find("decoder.c_1") != std::string::npos);

  CHECK(cli("").code == 1);
  CHECK(cli("decode --c1 -3 --strums a --barlines b --vocab c --out d").code == 1);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("synth output is deterministic in the seed") {
  const auto a = scratch() / "det_a";
  const auto b = scratch() / "det_b";
  const std::string args = " --vocab " + q(kFixtures / "vocab.json") +
                           " --seed 5 --jitter 0.02 --miss-rate 0.05 --spurious-rate 0.05 --rest-prob 0.1 --wav";
  REQUIRE(cli("synth --out-dir " + q(a) + args).code == 0);
  REQUIRE(cli("synth --out-dir " + q(b) + args).code == 0);
  for (const char* f : {"strums.json", "nominal.json", "barlines.json", "transcription.json", "ground_truth.json",
                        "song.wav"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("onset tuning writes a usable config") {
  const auto dir = scratch() / "tune";
  fs::create_directories(dir);
  std::string manifest;
  for (int i = 0; i < 2; ++i) {
    std::vector<double> onsets;
    for (double t = 0.2; t < 2.8; t += 0.35 + 0.05 * i) onsets.push_back(t);
    const auto name = "clip" + std::to_string(i);
    strumscribe::write_wav(dir / (name + ".wav"), strumscribe::render_pluck_train(onsets, 3.0, 22050, 4 + i));
    spit(dir / (name + ".json"), json{{"strums_sec", onsets}}.dump());
    manifest += json{{"wav", name + ".wav"}, {"strums", name + ".json"}}.dump() + "\n";
  }
  spit(dir / "labels.ndjson", manifest);
  const auto r = cli("onsets --tune " + q(dir / "labels.ndjson") + " --trials 5 --seed 1 --fmax 10000 --out " +
                     q(dir / "tuned.json"));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("mean onset F1") != std::string::npos);
  const auto tuned = load(dir / "tuned.json");
  CHECK(tuned["onsets"]["fmax_hz"] == 10000.0);
  CHECK(cli("onsets --config " + q(dir / "tuned.json") + " --in " + q(dir / "clip0.wav") + " --out " +
            q(dir / "o.json"))
            .code == 0);
}
