#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <thread>

#include "strumscribe/barlines.hpp"
#include "strumscribe/decoder.hpp"
#include "strumscribe/error.hpp"
#include "strumscribe/json_io.hpp"
#include "strumscribe/metrics.hpp"
#include "strumscribe/onsets.hpp"
#include "strumscribe/render.hpp"
#include "strumscribe/synth.hpp"
#include "strumscribe/wav.hpp"

namespace strumscribe::cli {

namespace {

template <typename T>
void set_if(const std::optional<T>& value, T& field) {
  if (value) field = *value;
}

nlohmann::json load_json(const fs::path& path) {
  return parse_json(read_text_file(path), path.string());
}

Vocabulary load_vocab(const fs::path& path) { return parse_vocabulary(read_text_file(path)); }

struct ManifestRecord {
  std::size_t line = 0;
  nlohmann::json doc;
};

std::vector<ManifestRecord> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<ManifestRecord> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto doc = parse_json(line, path.string() + ":" + std::to_string(n));
    if (!doc.is_object()) throw ValidationError(path.string() + ":" + std::to_string(n) + ": record must be an object");
    out.push_back({n, std::move(doc)});
  }
  if (out.empty()) throw ValidationError("manifest " + path.string() + " has no records");
  return out;
}

fs::path record_path(const ManifestRecord& r, const char* key, const fs::path& base) {
  if (!r.doc.contains(key) || !r.doc[key].is_string()) {
    throw ValidationError("manifest line " + std::to_string(r.line) + ": missing string field '" + key + "'");
  }
  fs::path p = r.doc[key].get<std::string>();
  return p.is_absolute() ? p : base / p;
}

// Runs job(i) for i in [0, n) on `jobs` threads; rethrows the first failure in index order.
template <typename Job>
void parallel_for(std::size_t n, unsigned jobs, Job job) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Transcription decode_files(const StrumSequence& strums, const BarlineTrack& bars, const Vocabulary& vocab,
                           const RunConfig& cfg) {
  const auto binned = bin_strums(strums, bars);
  if (binned.discarded > 0) {
    std::cerr << "discarded " << binned.discarded << " strum(s) outside the bar-line range\n";
  }
  return decode(binned.measures, vocab, cfg.decoder);
}

void print_warnings(const RenderResult& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

RunConfig Overrides::resolve() const {
  RunConfig cfg;
  if (config_path) cfg = apply_config_json(load_json(*config_path), cfg);
  set_if(seed, cfg.seed);
  set_if(sigma, cfg.decoder.sigma);
  set_if(c1, cfg.decoder.c1);
  set_if(c2, cfg.decoder.c2);
  set_if(subdivision_factors, cfg.postproc.subdivision_factors);
  set_if(deletion_penalty, cfg.postproc.deletion_penalty);
  set_if(insertion_penalty, cfg.postproc.insertion_penalty);
  set_if(tempo_change_penalty, cfg.postproc.tempo_change_penalty);
  set_if(snap_tolerance_sec, cfg.postproc.snap_tolerance_sec);
  set_if(tempo_free_band, cfg.postproc.tempo_free_band);
  set_if(lookahead, cfg.postproc.lookahead);
  set_if(frame_size, cfg.onsets.frame_size);
  set_if(hop_size, cfg.onsets.hop_size);
  set_if(mel_bands, cfg.onsets.mel_bands);
  set_if(fmin_hz, cfg.onsets.fmin_hz);
  set_if(fmax_hz, cfg.onsets.fmax_hz);
  set_if(log_gain, cfg.onsets.log_gain);
  set_if(delta, cfg.onsets.delta);
  set_if(pre_max, cfg.onsets.pre_max);
  set_if(post_max, cfg.onsets.post_max);
  set_if(pre_avg, cfg.onsets.pre_avg);
  set_if(post_avg, cfg.onsets.post_avg);
  set_if(min_gap_sec, cfg.onsets.min_gap_sec);
  set_if(use_repeat_symbol, cfg.render.use_repeat_symbol);
  set_if(show_pattern_ids, cfg.render.show_pattern_ids);
  set_if(grid_resolution, cfg.render.grid_resolution);
  set_if(strum_tolerance_sec, cfg.strum_tolerance_sec);
  set_if(barline_tolerance_sec, cfg.barline_tolerance_sec);
  cfg.validate();
  return cfg;
}

int run_onsets(const OnsetsArgs& args, const RunConfig& cfg) {
  if (args.tune_manifest) {
    const auto records = read_manifest(*args.tune_manifest);
    const fs::path base = args.tune_manifest->parent_path();
    std::vector<LabeledAudio> labeled;
    for (const auto& r : records) {
      labeled.push_back({read_wav(record_path(r, "wav", base)),
                         strums_from_json(load_json(record_path(r, "strums", base)))});
    }
    const auto tuned = tune_onset_config(labeled, cfg.onsets, args.trials, cfg.seed, cfg.strum_tolerance_sec);
    RunConfig out = cfg;
    out.onsets = tuned.config;
    write_text_file(args.out, dump(config_to_json(out)));
    std::cout << "mean onset F1 " << tuned.mean_f1 << " over " << labeled.size() << " file(s)\n";
    return 0;
  }
  const auto strums = detect_onsets(read_wav(args.in), cfg.onsets);
  write_text_file(args.out, dump(strums_to_json(strums)));
  return 0;
}

int run_barlines(const BarlinesArgs& args, const RunConfig& cfg) {
  const std::string text = read_text_file(args.in);
  const auto raw = barlines_from_json(parse_json(text, args.in.string()));
  if (args.bypass) {
    write_text_file(args.out, text);
    return 0;
  }
  write_text_file(args.out, dump(barlines_to_json(postprocess_barlines(raw, cfg.postproc))));
  return 0;
}

int run_decode(const DecodeArgs& args, const RunConfig& cfg) {
  const auto strums = strums_from_json(load_json(args.strums));
  const auto bars = barlines_from_json(load_json(args.barlines));
  const auto vocab = load_vocab(args.vocab);
  write_text_file(args.out, dump(transcription_to_json(decode_files(strums, bars, vocab, cfg))));
  return 0;
}

namespace {

EvaluationReport evaluate_files(const fs::path& transcription, const fs::path& barlines, const fs::path& vocab_path,
                                const fs::path& ground_truth, const RunConfig& cfg) {
  const auto vocab = load_vocab(vocab_path);
  const auto t = transcription_from_json(load_json(transcription));
  validate_transcription(t, vocab);
  return evaluate_transcription(t, barlines_from_json(load_json(barlines)), vocab,
                                strums_from_json(load_json(ground_truth)), cfg.strum_tolerance_sec);
}

}  // namespace

int run_eval(const EvalArgs& args, const RunConfig& cfg) {
  if (!args.manifest) {
    if (!args.transcription || !args.barlines || !args.vocab || !args.ground_truth) {
      throw ValidationError("eval needs --transcription, --barlines, --vocab and --ground-truth, or --manifest");
    }
    const auto report = evaluate_files(*args.transcription, *args.barlines, *args.vocab, *args.ground_truth, cfg);
    write_text_file(args.out, dump(report_to_json(report)));
    return 0;
  }

  const auto records = read_manifest(*args.manifest);
  const fs::path base = args.manifest->parent_path();
  std::vector<EvaluationReport> reports(records.size());
  parallel_for(records.size(), args.jobs, [&](std::size_t i) {
    const auto& r = records[i];
    reports[i] = evaluate_files(record_path(r, "transcription", base), record_path(r, "barlines", base),
                                record_path(r, "vocab", base), record_path(r, "ground_truth", base), cfg);
  });

  nlohmann::json songs = nlohmann::json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto entry = report_to_json(reports[i]);
    const auto& doc = records[i].doc;
    entry["song_id"] = doc.contains("song_id") ? doc["song_id"] : nlohmann::json(std::to_string(i));
    if (doc.contains("group")) entry["group"] = doc["group"];
    songs.push_back(std::move(entry));
  }
  const auto agg = aggregate(reports);
  write_text_file(args.out, dump({{"songs", std::move(songs)}, {"aggregate", aggregate_to_json(agg)}}));

  const auto line = [](const char* name, const MetricSummary& s) {
    std::cout << name << " " << s.mean << " +- " << s.sem << "\n";
  };
  std::cout << "songs " << agg.songs << "\n";
  line("f1", agg.f1);
  line("precision", agg.precision);
  line("recall", agg.recall);
  line("pattern_disc", agg.pattern_disc);
  line("timesig_disc", agg.timesig_disc);
  line("measure_disc", agg.measure_disc);
  return 0;
}

int run_synth(const SynthArgs& args, const RunConfig& cfg) {
  SynthSpec spec;
  spec.seed = cfg.seed;
  spec.tempo_bpm = args.tempo_bpm;
  spec.measures = args.measures;
  spec.sigma_norm = args.sigma_norm;
  spec.switch_prob = args.switch_prob;
  spec.spurious_rate = args.spurious_rate;
  spec.miss_rate = args.miss_rate;
  spec.rest_prob = args.rest_prob;
  const auto song = generate_song(spec, load_vocab(args.vocab));

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) throw IoError("cannot create directory " + args.out_dir.string() + ": " + ec.message());
  write_text_file(args.out_dir / "strums.json", dump(strums_to_json(song.observed)));
  write_text_file(args.out_dir / "nominal.json", dump(strums_to_json(song.nominal)));
  write_text_file(args.out_dir / "barlines.json", dump(barlines_to_json(song.bars)));
  write_text_file(args.out_dir / "transcription.json", dump(transcription_to_json(song.ground_truth)));
  write_text_file(args.out_dir / "ground_truth.json", dump(ground_truth_bundle(song)));
  if (args.wav) {
    const auto audio = render_pluck_train(song.observed.times(), song.bars.times().back() + 0.5, args.sample_rate, cfg.seed);
    write_wav(args.out_dir / "song.wav", audio);
  }
  return 0;
}

int run_render(const RenderArgs& args, const RunConfig& cfg) {
  const auto vocab = load_vocab(args.vocab);
  const auto result = render_text(transcription_from_json(load_json(args.transcription)), vocab, cfg.render);
  print_warnings(result);
  if (args.out) {
    write_text_file(*args.out, result.text + "\n");
  } else {
    std::cout << result.text << "\n";
  }
  return 0;
}

int run_pipeline(const PipelineArgs& args, const RunConfig& cfg) {
  const auto vocab = load_vocab(args.vocab);
  const auto strums = detect_onsets(read_wav(args.wav), cfg.onsets);
  const auto raw = barlines_from_json(load_json(args.barlines));
  const auto bars = args.bypass ? raw : postprocess_barlines(raw, cfg.postproc);
  const auto t = decode_files(strums, bars, vocab, cfg);
  const auto rendered = render_text(t, vocab, cfg.render);
  print_warnings(rendered);

  if (args.dump_dir) {
    std::error_code ec;
    fs::create_directories(*args.dump_dir, ec);
    if (ec) throw IoError("cannot create directory " + args.dump_dir->string() + ": " + ec.message());
    write_text_file(*args.dump_dir / "strums.json", dump(strums_to_json(strums)));
    write_text_file(*args.dump_dir / "barlines.json", dump(barlines_to_json(bars)));
    write_text_file(*args.dump_dir / "transcription.json", dump(transcription_to_json(t)));
    write_text_file(*args.dump_dir / "rendered.txt", rendered.text + "\n");
  }
  write_text_file(args.out, dump(transcription_to_json(t)));
  if (args.text_out) {
    write_text_file(*args.text_out, rendered.text + "\n");
  } else {
    std::cout << rendered.text << "\n";
  }
  return 0;
}

}  // namespace strumscribe::cli
