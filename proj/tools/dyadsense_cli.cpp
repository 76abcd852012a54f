// Command line front end. Every subcommand parses arguments, resolves
// paths, and makes exactly one library call through the C interface; all
// behavior lives in the shared library.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dyadsense.h"

namespace {

struct CliConfig {
  std::string config_path;
  uint64_t seed = 42;
  std::string output_dir;
  std::string log_level = "warn";
};

// Relative output paths land under --output-dir when one is given.
std::string resolved(const CliConfig& g, const std::string& path) {
  if (g.output_dir.empty() || path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(g.output_dir) / p).string();
}

int exit_code(ds_status st) {
  switch (st) {
    case DS_OK:
      return 0;
    case DS_ERR_INVALID_ARGUMENT:
    case DS_ERR_CONFIG:
    case DS_ERR_IO:
    case DS_ERR_PARSE:
    case DS_ERR_SCHEMA:
      return 2;  // usage / input
    default:
      return 1;  // runtime / model
  }
}

int fail(ds_status st) {
  std::cerr << "error: " << ds_last_error() << "\n";
  return exit_code(st);
}

// Owning wrapper so every handler can create/load the config the same way.
struct Config {
  ds_config* h = nullptr;
  ~Config() { ds_config_free(h); }
};

ds_status open_config(const CliConfig& g, Config& cfg) {
  if (g.config_path.empty()) return ds_config_create(&cfg.h);
  return ds_config_load(g.config_path.c_str(), &cfg.h);
}

// Library-owned string, released on scope exit.
struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { ds_string_free(s); }
};

int emit(const CliConfig& g, const std::string& out_path, const char* text) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::string path = resolved(g, out_path);
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  return 0;
}

std::string format_double_arg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int print_version(const std::string& config_path) {
  Config cfg;
  ds_status st = config_path.empty()
                     ? ds_config_create(&cfg.h)
                     : ds_config_load(config_path.c_str(), &cfg.h);
  if (st != DS_OK) return fail(st);
  OwnedString hash;
  st = ds_config_hash(cfg.h, &hash.s);
  if (st != DS_OK) return fail(st);
  std::cout << "dyadsense " << ds_version() << " config " << hash.s << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig g;

  // --version must work regardless of position, and reflects --config.
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) g.config_path = argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) g.config_path = arg.substr(9);
    if (arg == "--version") return print_version(g.config_path);
  }
  g.config_path.clear();

  CLI::App app{"dyadic interaction sensing toolkit"};
  app.require_subcommand(1);
  auto add_globals = [&g](CLI::App* a) {
    a->add_option("--config", g.config_path, "configuration file (INI)");
    a->add_option("--seed", g.seed, "random seed");
    a->add_option("--output-dir", g.output_dir,
                  "directory for relative output paths");
    a->add_option("--log-level", g.log_level, "error|warn|info|debug");
  };
  add_globals(&app);

  struct {
    std::string input, out;
  } mfcc;
  auto* sc_mfcc =
      app.add_subcommand("mfcc", "audio file to per-frame coefficients");
  sc_mfcc->add_option("--input", mfcc.input, "WAV file")->required();
  sc_mfcc->add_option("--out", mfcc.out, "output (.jsonl for JSON lines)")
      ->required();

  struct {
    std::string input, out;
  } vtrain;
  auto* sc_vtrain =
      app.add_subcommand("vad-train", "train the frame classifier");
  sc_vtrain->add_option("--input", vtrain.input, "labeled feature CSV")
      ->required();
  sc_vtrain->add_option("--out", vtrain.out, "model JSON")->required();

  struct {
    std::string input, model, out;
  } vrun;
  auto* sc_vrun = app.add_subcommand("vad-run", "detect speech segments");
  sc_vrun->add_option("--input", vrun.input, "WAV file")->required();
  sc_vrun->add_option("--model", vrun.model, "model JSON")->required();
  sc_vrun->add_option("--out", vrun.out, "segments CSV")->required();

  struct {
    std::string train, eval, model, out;
  } veval;
  auto* sc_veval =
      app.add_subcommand("vad-eval", "score a model against a baseline");
  sc_veval->add_option("--train", veval.train, "training CSV (baseline fit)")
      ->required();
  sc_veval->add_option("--eval", veval.eval, "evaluation CSV")->required();
  sc_veval->add_option("--model", veval.model, "model JSON")->required();
  sc_veval->add_option("--out", veval.out, "report JSON (default stdout)");

  struct {
    std::string features, labels, axis, type = "svm", out;
  } etrain;
  auto* sc_etrain =
      app.add_subcommand("emotion-train", "train an emotion classifier");
  sc_etrain->add_option("--features", etrain.features, "feature CSV")
      ->required();
  sc_etrain->add_option("--labels", etrain.labels, "label CSV")->required();
  sc_etrain->add_option("--axis", etrain.axis, "valence|arousal")->required();
  sc_etrain->add_option("--type", etrain.type, "svm|forest");
  sc_etrain->add_option("--out", etrain.out, "model JSON")->required();

  struct {
    std::string features, labels, model, out;
    bool allow_imputation = false;
  } eeval;
  auto* sc_eeval =
      app.add_subcommand("emotion-eval", "evaluate an emotion classifier");
  sc_eeval->add_option("--features", eeval.features, "feature CSV")
      ->required();
  sc_eeval->add_option("--labels", eeval.labels, "label CSV")->required();
  sc_eeval->add_option("--model", eeval.model, "model JSON")->required();
  sc_eeval->add_flag("--allow-imputation", eeval.allow_imputation,
                     "fill absent features with training means");
  sc_eeval->add_option("--out", eeval.out, "report JSON (default stdout)");

  struct {
    std::string session_id = "session";
    std::string hr, imu, audio, segments, out;
  } extract;
  auto* sc_extract = app.add_subcommand(
      "extract-features", "session streams to a feature row");
  sc_extract->add_option("--session-id", extract.session_id, "row identifier");
  sc_extract->add_option("--hr", extract.hr, "heart rate JSONL");
  sc_extract->add_option("--imu", extract.imu, "IMU JSONL");
  sc_extract->add_option("--audio", extract.audio, "WAV file");
  sc_extract->add_option("--segments", extract.segments,
                         "speech segments CSV");
  sc_extract->add_option("--out", extract.out, "feature CSV")->required();

  struct {
    int scenarios = 10;
    double density = -1.0, duration = -1.0;
    std::string vad_model, out;
    bool dump_traces = false;
  } sim;
  auto* sc_sim =
      app.add_subcommand("simulate", "run seeded day scenarios end to end");
  sc_sim->add_option("--scenarios", sim.scenarios, "number of scenarios");
  sc_sim->add_option("--density", sim.density, "interaction density [0,1)");
  sc_sim->add_option("--duration", sim.duration, "scenario length (s)");
  sc_sim->add_option("--vad-model", sim.vad_model, "model JSON")->required();
  sc_sim->add_flag("--dump-traces", sim.dump_traces,
                   "write per-scenario input/output streams");
  sc_sim->add_option("--out", sim.out, "report JSON")->required();

  struct {
    std::string input, format = "text", out;
  } report;
  auto* sc_report =
      app.add_subcommand("report", "render a simulation report");
  sc_report->add_option("--input", report.input, "report JSON")->required();
  sc_report->add_option("--format", report.format, "text|csv");
  sc_report->add_option("--out", report.out, "output file (default stdout)");

  struct {
    std::string events, out;
  } replay;
  auto* sc_replay =
      app.add_subcommand("fsm-replay", "replay a trigger event log");
  sc_replay->add_option("--events", replay.events, "event JSONL")->required();
  sc_replay->add_option("--out", replay.out,
                        "actions JSONL (default stdout)");

  struct {
    double duration = 120.0;
    std::string out;
  } corpus;
  auto* sc_corpus = app.add_subcommand(
      "synth-vad-corpus", "labeled frame features from synthetic audio");
  sc_corpus->add_option("--duration", corpus.duration, "seconds of audio");
  sc_corpus->add_option("--out", corpus.out, "labeled CSV")->required();

  struct {
    int sessions = 200;
    std::string features_out, labels_out;
  } esynth;
  auto* sc_esynth = app.add_subcommand(
      "synth-emotion-data", "synthetic sessions with emotion labels");
  sc_esynth->add_option("--sessions", esynth.sessions, "number of sessions");
  sc_esynth->add_option("--features-out", esynth.features_out, "feature CSV")
      ->required();
  sc_esynth->add_option("--labels-out", esynth.labels_out, "label CSV")
      ->required();

  for (auto* sc : app.get_subcommands({})) add_globals(sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ds_status st = ds_set_log_level(g.log_level.c_str());
  if (st != DS_OK) return fail(st);
  if (!g.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(g.output_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create " << g.output_dir << "\n";
      return 2;
    }
  }

  Config cfg;
  st = open_config(g, cfg);
  if (st != DS_OK) return fail(st);

  if (*sc_mfcc) {
    bool jsonl = mfcc.out.size() >= 6 &&
                 mfcc.out.compare(mfcc.out.size() - 6, 6, ".jsonl") == 0;
    st = ds_mfcc_file(cfg.h, mfcc.input.c_str(),
                      resolved(g, mfcc.out).c_str(), jsonl ? 1 : 0);
    return st == DS_OK ? 0 : fail(st);
  }
  if (*sc_vtrain) {
    st = ds_vad_train_file(cfg.h, vtrain.input.c_str(), g.seed,
                           resolved(g, vtrain.out).c_str());
    return st == DS_OK ? 0 : fail(st);
  }
  if (*sc_vrun) {
    st = ds_vad_run_file(cfg.h, vrun.input.c_str(), vrun.model.c_str(),
                         resolved(g, vrun.out).c_str());
    return st == DS_OK ? 0 : fail(st);
  }
  if (*sc_veval) {
    OwnedString json;
    st = ds_vad_eval_file(cfg.h, veval.train.c_str(), veval.eval.c_str(),
                          veval.model.c_str(), &json.s);
    if (st != DS_OK) return fail(st);
    return emit(g, veval.out, json.s);
  }
  if (*sc_etrain) {
    st = ds_emotion_train_file(cfg.h, etrain.features.c_str(),
                               etrain.labels.c_str(), etrain.axis.c_str(),
                               etrain.type.c_str(), g.seed,
                               resolved(g, etrain.out).c_str());
    return st == DS_OK ? 0 : fail(st);
  }
  if (*sc_eeval) {
    OwnedString json;
    st = ds_emotion_eval_file(cfg.h, eeval.features.c_str(),
                              eeval.labels.c_str(), eeval.model.c_str(),
                              eeval.allow_imputation ? 1 : 0, &json.s);
    if (st != DS_OK) return fail(st);
    return emit(g, eeval.out, json.s);
  }
  if (*sc_extract) {
    st = ds_extract_features_file(
        cfg.h, extract.session_id.c_str(),
        extract.hr.empty() ? nullptr : extract.hr.c_str(),
        extract.imu.empty() ? nullptr : extract.imu.c_str(),
        extract.audio.empty() ? nullptr : extract.audio.c_str(),
        extract.segments.empty() ? nullptr : extract.segments.c_str(),
        resolved(g, extract.out).c_str());
    return st == DS_OK ? 0 : fail(st);
  }
  if (*sc_sim) {
    if (sim.density >= 0.0) {
      st = ds_config_set(cfg.h, "sim", "density",
                         format_double_arg(sim.density).c_str());
      if (st != DS_OK) return fail(st);
    }
    if (sim.duration >= 0.0) {
      st = ds_config_set(cfg.h, "sim", "duration",
                         format_double_arg(sim.duration).c_str());
      if (st != DS_OK) return fail(st);
    }
    std::string dump_dir = sim.dump_traces ? resolved(g, "traces") : "";
    OwnedString json;
    st = ds_sim_run_battery(cfg.h, sim.vad_model.c_str(), sim.scenarios,
                            g.seed, dump_dir.empty() ? nullptr : dump_dir.c_str(),
                            &json.s);
    if (st != DS_OK) return fail(st);
    return emit(g, sim.out, json.s);
  }
  if (*sc_report) {
    if (report.format != "text" && report.format != "csv") {
      std::cerr << "error: --format must be text or csv\n";
      return 2;
    }
    std::ifstream in(report.input, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open " << report.input << "\n";
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    OwnedString text;
    st = ds_sim_report_render(buf.str().c_str(),
                              report.format == "csv" ? 1 : 0, &text.s);
    if (st != DS_OK) return fail(st);
    return emit(g, report.out, text.s);
  }
  if (*sc_replay) {
    OwnedString jsonl;
    st = ds_trigger_replay_file(cfg.h, replay.events.c_str(), &jsonl.s);
    if (st != DS_OK) return fail(st);
    return emit(g, replay.out, jsonl.s);
  }
  if (*sc_corpus) {
    st = ds_synth_vad_corpus(cfg.h, corpus.duration, g.seed,
                             resolved(g, corpus.out).c_str());
    return st == DS_OK ? 0 : fail(st);
  }
  if (*sc_esynth) {
    st = ds_synth_emotion_data(cfg.h, esynth.sessions, g.seed,
                               resolved(g, esynth.features_out).c_str(),
                               resolved(g, esynth.labels_out).c_str());
    return st == DS_OK ? 0 : fail(st);
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
