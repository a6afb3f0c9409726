#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "strumscribe/error.hpp"

using namespace strumscribe;
using namespace strumscribe::cli;

namespace {

void add_common(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config_path, "JSON config file; flags override it");
  cmd.add_option("--seed", o.seed, "RNG seed");
}

void add_decoder(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--sigma", o.sigma, "strum timing std in measure fractions")->group("Decoder");
  cmd.add_option("--c1", o.c1, "pattern change cost")->group("Decoder");
  cmd.add_option("--c2", o.c2, "extra time-signature change cost")->group("Decoder");
}

void add_postproc(CLI::App& cmd, Overrides& o) {
  const char* g = "Bar-line cleanup";
  cmd.add_option("--subdivision-factors", o.subdivision_factors, "allowed span subdivisions")->group(g);
  cmd.add_option("--deletion-penalty", o.deletion_penalty)->group(g);
  cmd.add_option("--insertion-penalty", o.insertion_penalty)->group(g);
  cmd.add_option("--tempo-change-penalty", o.tempo_change_penalty)->group(g);
  cmd.add_option("--snap-tolerance", o.snap_tolerance_sec, "seconds")->group(g);
  cmd.add_option("--tempo-free-band", o.tempo_free_band, "relative change")->group(g);
  cmd.add_option("--lookahead", o.lookahead, "estimates")->group(g);
}

void add_onsets(CLI::App& cmd, Overrides& o) {
  const char* g = "Onset detection";
  cmd.add_option("--frame-size", o.frame_size)->group(g);
  cmd.add_option("--hop-size", o.hop_size)->group(g);
  cmd.add_option("--mel-bands", o.mel_bands)->group(g);
  cmd.add_option("--fmin", o.fmin_hz, "Hz")->group(g);
  cmd.add_option("--fmax", o.fmax_hz, "Hz")->group(g);
  cmd.add_option("--log-gain", o.log_gain)->group(g);
  cmd.add_option("--delta", o.delta, "peak threshold")->group(g);
  cmd.add_option("--pre-max", o.pre_max, "frames")->group(g);
  cmd.add_option("--post-max", o.post_max, "frames")->group(g);
  cmd.add_option("--pre-avg", o.pre_avg, "frames")->group(g);
  cmd.add_option("--post-avg", o.post_avg, "frames")->group(g);
  cmd.add_option("--min-gap", o.min_gap_sec, "seconds")->group(g);
}

void add_render(CLI::App& cmd, Overrides& o) {
  const char* g = "Rendering";
  cmd.add_option("--grid-resolution", o.grid_resolution, "slots per measure")->group(g);
  cmd.add_option("--repeat-symbol", o.use_repeat_symbol, "write repeats as %")->group(g);
  cmd.add_option("--show-pattern-ids", o.show_pattern_ids)->group(g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strumming-pattern transcription from strum onsets and bar lines"};
  app.require_subcommand(1);
  Overrides o;
  std::function<int(const RunConfig&)> action;

  OnsetsArgs onsets;
  auto* c_onsets = app.add_subcommand("onsets", "detect strum onsets in a WAV file");
  c_onsets->add_option("--in", onsets.in, "input WAV");
  c_onsets->add_option("--out", onsets.out, "strums JSON, or tuned config with --tune")->required();
  c_onsets->add_option("--tune", onsets.tune_manifest,
                       "NDJSON manifest of {wav, strums} records; random-search the peak picker");
  c_onsets->add_option("--trials", onsets.trials, "tuning trials")->check(CLI::PositiveNumber);
  add_common(*c_onsets, o);
  add_onsets(*c_onsets, o);
  c_onsets->add_option("--tolerance", o.strum_tolerance_sec, "tuning match tolerance, seconds");
  c_onsets->callback([&] {
    if (!onsets.tune_manifest && onsets.in.empty()) throw CLI::RequiredError("--in");
    action = [&](const RunConfig& cfg) { return run_onsets(onsets, cfg); };
  });

  BarlinesArgs barlines;
  auto* c_bars = app.add_subcommand("barlines", "clean raw bar-line estimates");
  c_bars->add_option("--in", barlines.in, "raw bar lines JSON")->required();
  c_bars->add_option("--out", barlines.out, "cleaned bar lines JSON")->required();
  c_bars->add_flag("--no-barline-postproc", barlines.bypass, "copy the input unchanged");
  add_common(*c_bars, o);
  add_postproc(*c_bars, o);
  c_bars->callback([&] { action = [&](const RunConfig& cfg) { return run_barlines(barlines, cfg); }; });

  DecodeArgs dec;
  auto* c_dec = app.add_subcommand("decode", "decode strums into a pattern sequence");
  c_dec->add_option("--strums", dec.strums)->required();
  c_dec->add_option("--barlines", dec.barlines)->required();
  c_dec->add_option("--vocab", dec.vocab)->required();
  c_dec->add_option("--out", dec.out, "transcription JSON")->required();
  add_common(*c_dec, o);
  add_decoder(*c_dec, o);
  c_dec->callback([&] { action = [&](const RunConfig& cfg) { return run_decode(dec, cfg); }; });

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "score transcriptions against ground-truth strums");
  c_eval->add_option("--transcription", ev.transcription);
  c_eval->add_option("--barlines", ev.barlines);
  c_eval->add_option("--vocab", ev.vocab);
  c_eval->add_option("--ground-truth", ev.ground_truth, "ground-truth strums JSON");
  c_eval->add_option("--manifest", ev.manifest,
                     "NDJSON of {song_id, transcription, barlines, vocab, ground_truth} records");
  c_eval->add_option("--out", ev.out, "report JSON")->required();
  c_eval->add_option("--jobs", ev.jobs, "worker threads (0 = all cores)");
  c_eval->add_option("--tolerance", o.strum_tolerance_sec, "match tolerance, seconds");
  add_common(*c_eval, o);
  c_eval->callback([&] { action = [&](const RunConfig& cfg) { return run_eval(ev, cfg); }; });

  SynthArgs syn;
  auto* c_syn = app.add_subcommand("synth", "generate a synthetic song");
  c_syn->add_option("--vocab", syn.vocab)->required();
  c_syn->add_option("--out-dir", syn.out_dir)->required();
  c_syn->add_option("--tempo", syn.tempo_bpm, "BPM");
  c_syn->add_option("--measures", syn.measures);
  c_syn->add_option("--jitter", syn.sigma_norm, "timing std in measure fractions");
  c_syn->add_option("--switch-prob", syn.switch_prob);
  c_syn->add_option("--spurious-rate", syn.spurious_rate);
  c_syn->add_option("--miss-rate", syn.miss_rate);
  c_syn->add_option("--rest-prob", syn.rest_prob);
  c_syn->add_flag("--wav", syn.wav, "also render song.wav as a pluck train");
  c_syn->add_option("--sample-rate", syn.sample_rate);
  add_common(*c_syn, o);
  c_syn->callback([&] { action = [&](const RunConfig& cfg) { return run_synth(syn, cfg); }; });

  RenderArgs ren;
  auto* c_ren = app.add_subcommand("render", "print a transcription as text notation");
  c_ren->add_option("--transcription", ren.transcription)->required();
  c_ren->add_option("--vocab", ren.vocab)->required();
  c_ren->add_option("--out", ren.out, "text file (default stdout)");
  add_common(*c_ren, o);
  add_render(*c_ren, o);
  c_ren->callback([&] { action = [&](const RunConfig& cfg) { return run_render(ren, cfg); }; });

  PipelineArgs pipe;
  auto* c_pipe = app.add_subcommand("pipeline", "onsets, bar-line cleanup, decoding and rendering");
  c_pipe->add_option("--wav", pipe.wav)->required();
  c_pipe->add_option("--barlines", pipe.barlines, "raw bar lines JSON")->required();
  c_pipe->add_option("--vocab", pipe.vocab)->required();
  c_pipe->add_option("--out", pipe.out, "transcription JSON")->required();
  c_pipe->add_option("--text-out", pipe.text_out, "rendered text (default stdout)");
  c_pipe->add_option("--dump-dir", pipe.dump_dir, "write intermediate files here");
  c_pipe->add_flag("--no-barline-postproc", pipe.bypass);
  add_common(*c_pipe, o);
  add_decoder(*c_pipe, o);
  add_postproc(*c_pipe, o);
  add_onsets(*c_pipe, o);
  add_render(*c_pipe, o);

  c_pipe->callback([&] { action = [&](const RunConfig& cfg) { return run_pipeline(pipe, cfg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    return action(o.resolve());
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
