#include "dyadsense.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/log.hpp"
#include "core/metrics.hpp"
#include "core/wav.hpp"
#include "dsp/mfcc.hpp"
#include "features/emotion.hpp"
#include "features/features.hpp"
#include "proximity/proximity.hpp"
#include "sim/sim.hpp"
#include "trigger/trigger.hpp"
#include "vad/svm.hpp"
#include "vad/vad.hpp"

#ifndef DS_VERSION_STRING
#define DS_VERSION_STRING "0.1.0"
#endif

using nlohmann::json;

namespace {

thread_local std::string g_last_error = "no error";

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, translating the error taxonomy onto status codes.
template <typename Fn>
ds_status guarded(Fn&& fn) {
  try {
    fn();
    return DS_OK;
  } catch (const ds::ConfigError& e) {
    set_error(e.what());
    return DS_ERR_CONFIG;
  } catch (const ds::IoError& e) {
    set_error(e.what());
    return DS_ERR_IO;
  } catch (const ds::ParseError& e) {
    set_error(e.what());
    return DS_ERR_PARSE;
  } catch (const ds::ModelError& e) {
    set_error(e.what());
    return DS_ERR_MODEL;
  } catch (const ds::StreamError& e) {
    set_error(e.what());
    return DS_ERR_STREAM;
  } catch (const ds::TrainingError& e) {
    set_error(e.what());
    return DS_ERR_TRAINING;
  } catch (const ds::SchemaError& e) {
    set_error(e.what());
    return DS_ERR_SCHEMA;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DS_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return DS_ERR_INTERNAL;
  }
}

ds_status invalid(const char* msg) {
  set_error(msg);
  return DS_ERR_INVALID_ARGUMENT;
}

int phase_to_int(ds::prox::Phase p) {
  switch (p) {
    case ds::prox::Phase::near:
      return DS_PHASE_NEAR;
    case ds::prox::Phase::far:
      return DS_PHASE_FAR;
    default:
      return DS_PHASE_UNKNOWN;
  }
}

ds::prox::Phase int_to_phase(int p) {
  switch (p) {
    case DS_PHASE_UNKNOWN:
      return ds::prox::Phase::unknown;
    case DS_PHASE_NEAR:
      return ds::prox::Phase::near;
    case DS_PHASE_FAR:
      return ds::prox::Phase::far;
    default:
      throw ds::ConfigError("invalid phase value " + std::to_string(p));
  }
}

// WAV ingest shared by the file-level pipelines; the configured rate is a
// contract, not a hint.
ds::dsp::AudioBuffer load_audio(const ds::cfg::ToolkitConfig& cfg,
                                const std::string& path) {
  auto wav = ds::wav::read_pcm16_mono(path);
  if (wav.sample_rate != cfg.sample_rate)
    throw ds::ConfigError("sample rate " + std::to_string(wav.sample_rate) +
                          " of " + path + " does not match configured " +
                          std::to_string(cfg.sample_rate));
  ds::dsp::AudioBuffer audio;
  audio.sample_rate = wav.sample_rate;
  audio.samples = std::move(wav.samples);
  return audio;
}

std::vector<ds::vad::VadDecision> score_frames(
    const std::vector<ds::dsp::FeatureVector>& frames,
    const ds::vad::LinearSvmModel& model) {
  std::vector<ds::vad::VadDecision> out;
  out.reserve(frames.size());
  for (const auto& fv : frames) {
    auto feats = ds::vad::model_features(fv, model.weights.size());
    double score = ds::vad::decision_score(model, feats);
    out.push_back({fv.frame_index, score, ds::vad::classify(score)});
  }
  return out;
}

std::string segments_csv(const std::vector<ds::vad::SpeechSegment>& segs) {
  std::string out = "start,end\n";
  for (const auto& s : segs)
    out += ds::io::format_double(s.start) + "," +
           ds::io::format_double(s.end) + "\n";
  return out;
}

std::vector<ds::vad::SpeechSegment> segments_from_csv(
    const std::string& text, const std::string& context) {
  std::vector<ds::vad::SpeechSegment> segs;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ds::ParseError(context + ": empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "start,end")
    throw ds::ParseError(context + ": expected header start,end");
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = ds::io::split_csv_line(line);
    if (fields.size() != 2)
      throw ds::ParseError(context + ":" + std::to_string(lineno) +
                           ": expected 2 fields");
    segs.push_back(
        {ds::io::parse_double(fields[0]), ds::io::parse_double(fields[1])});
  }
  return segs;
}

// One JSON object per line; empty lines are skipped.
std::vector<json> parse_jsonl(const std::string& text,
                              const std::string& context) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw ds::ParseError(context + ":" + std::to_string(lineno) + ": " +
                           e.what());
    }
  }
  return out;
}

double jsonl_number(const json& j, const char* field,
                    const std::string& where) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_number())
    throw ds::ParseError(where + ": missing numeric field \"" + field + "\"");
  return it->get<double>();
}

// Labels aligned to the feature sets by session id; every set needs one.
std::vector<int> aligned_labels(
    const std::vector<ds::feat::FeatureSet>& sets,
    const std::vector<ds::feat::SessionLabels>& labels, ds::feat::Axis axis) {
  std::map<std::string, const ds::feat::SessionLabels*> by_id;
  for (const auto& l : labels) by_id[l.session_id] = &l;
  std::vector<int> out;
  out.reserve(sets.size());
  for (const auto& s : sets) {
    auto it = by_id.find(s.session_id);
    if (it == by_id.end())
      throw ds::SchemaError("no label row for session " + s.session_id);
    out.push_back(axis == ds::feat::Axis::valence ? it->second->valence
                                                  : it->second->arousal);
  }
  return out;
}

}  // namespace

struct ds_config {
  ds::cfg::ToolkitConfig cfg;
};

struct ds_mfcc_stream {
  ds::dsp::MfccStream stream;
};

struct ds_svm_model {
  ds::vad::LinearSvmModel model;
};

struct ds_proximity {
  ds::prox::ProximityTracker tracker;
};

struct ds_trigger {
  ds::trig::TriggerStateMachine fsm;
};

extern "C" {

const char* ds_last_error(void) { return g_last_error.c_str(); }

const char* ds_version(void) { return DS_VERSION_STRING; }

void ds_string_free(char* s) { std::free(s); }

ds_status ds_set_log_level(const char* level) {
  if (!level) return invalid("level is NULL");
  return guarded([&] {
    std::string l = level;
    if (l == "error")
      ds::log::set_level(ds::log::Level::error);
    else if (l == "warn")
      ds::log::set_level(ds::log::Level::warn);
    else if (l == "info")
      ds::log::set_level(ds::log::Level::info);
    else if (l == "debug")
      ds::log::set_level(ds::log::Level::debug);
    else
      throw ds::ConfigError("log level must be error, warn, info or debug, got \"" + l + "\"");
  });
}

/* ---- configuration ------------------------------------------------- */

ds_status ds_config_create(ds_config** out) {
  if (!out) return invalid("out is NULL");
  return guarded([&] { *out = new ds_config{ds::cfg::default_config()}; });
}

ds_status ds_config_load(const char* path, ds_config** out) {
  if (!path || !out) return invalid("path/out is NULL");
  return guarded([&] { *out = new ds_config{ds::cfg::load_config(path)}; });
}

ds_status ds_config_set(ds_config* cfg, const char* section, const char* key,
                        const char* value) {
  if (!cfg || !section || !key || !value) return invalid("NULL argument");
  return guarded(
      [&] { ds::cfg::apply_override(cfg->cfg, section, key, value); });
}

ds_status ds_config_hash(const ds_config* cfg, char** out) {
  if (!cfg || !out) return invalid("cfg/out is NULL");
  return guarded([&] { *out = dup_string(ds::cfg::config_hash(cfg->cfg)); });
}

void ds_config_free(ds_config* cfg) { delete cfg; }

/* ---- audio features ------------------------------------------------- */

ds_status ds_mfcc_file(const ds_config* cfg, const char* wav_path,
                       const char* out_path, int as_jsonl) {
  if (!cfg || !wav_path || !out_path) return invalid("NULL argument");
  return guarded([&] {
    auto audio = load_audio(cfg->cfg, wav_path);
    auto frames = ds::dsp::batch_features(audio, cfg->cfg.mfcc);
    std::string out;
    if (as_jsonl) {
      for (const auto& fv : frames) {
        json j;
        j["frame_index"] = fv.frame_index;
        j["timestamp"] = fv.timestamp;
        j["values"] = fv.values;
        out += j.dump() + "\n";
      }
    } else {
      out = "frame_index,timestamp";
      for (int k = 0; k < cfg->cfg.mfcc.num_coefficients; ++k)
        out += ",c" + std::to_string(k);
      out += "\n";
      for (const auto& fv : frames) {
        out += std::to_string(fv.frame_index) + "," +
               ds::io::format_double(fv.timestamp);
        for (double v : fv.values) out += "," + ds::io::format_double(v);
        out += "\n";
      }
    }
    ds::io::write_file(out_path, out);
  });
}

ds_status ds_mfcc_stream_create(const ds_config* cfg, ds_mfcc_stream** out) {
  if (!cfg || !out) return invalid("cfg/out is NULL");
  return guarded([&] {
    *out = new ds_mfcc_stream{
        ds::dsp::MfccStream(cfg->cfg.mfcc, cfg->cfg.sample_rate)};
  });
}

ds_status ds_mfcc_stream_push(ds_mfcc_stream* s, const double* samples,
                              size_t n) {
  if (!s || (!samples && n > 0)) return invalid("NULL argument");
  return guarded([&] { s->stream.push(samples, n); });
}

ds_status ds_mfcc_stream_pop(ds_mfcc_stream* s, double* values,
                             size_t values_len, int64_t* frame_index,
                             double* timestamp, double* log_energy,
                             int* has_frame) {
  if (!s || !values || !has_frame) return invalid("NULL argument");
  return guarded([&] {
    ds::dsp::FeatureVector fv;
    if (!s->stream.pop(fv)) {
      *has_frame = 0;
      return;
    }
    if (values_len < fv.values.size())
      throw ds::ConfigError("values buffer holds " +
                            std::to_string(values_len) + ", need " +
                            std::to_string(fv.values.size()));
    std::memcpy(values, fv.values.data(), fv.values.size() * sizeof(double));
    if (frame_index) *frame_index = fv.frame_index;
    if (timestamp) *timestamp = fv.timestamp;
    if (log_energy) *log_energy = fv.log_energy;
    *has_frame = 1;
  });
}

void ds_mfcc_stream_free(ds_mfcc_stream* s) { delete s; }

/* ---- linear classifier ---------------------------------------------- */

ds_status ds_svm_load(const char* path, ds_svm_model** out) {
  if (!path || !out) return invalid("path/out is NULL");
  return guarded([&] { *out = new ds_svm_model{ds::vad::load_model(path)}; });
}

ds_status ds_svm_save(const ds_svm_model* m, const char* path) {
  if (!m || !path) return invalid("model/path is NULL");
  return guarded([&] { ds::vad::save_model(m->model, path); });
}

ds_status ds_svm_train(const double* x, size_t rows, size_t cols, const int* y,
                       double lambda, int epochs, uint64_t seed,
                       ds_svm_model** out) {
  if (!x || !y || !out) return invalid("NULL argument");
  return guarded([&] {
    std::vector<std::vector<double>> xs(rows);
    for (size_t r = 0; r < rows; ++r)
      xs[r].assign(x + r * cols, x + (r + 1) * cols);
    std::vector<int> ys(y, y + rows);
    ds::vad::SvmTrainOptions opts;
    opts.lambda = lambda;
    opts.epochs = epochs;
    opts.seed = seed;
    *out = new ds_svm_model{ds::vad::train_linear_svm(xs, ys, opts)};
  });
}

ds_status ds_svm_dim(const ds_svm_model* m, size_t* dim) {
  if (!m || !dim) return invalid("model/dim is NULL");
  *dim = m->model.weights.size();
  return DS_OK;
}

ds_status ds_svm_score(const ds_svm_model* m, const double* x, size_t n,
                       double* score) {
  if (!m || !x || !score) return invalid("NULL argument");
  return guarded([&] {
    std::vector<double> row(x, x + n);
    *score = ds::vad::decision_score(m->model, row);
  });
}

void ds_svm_free(ds_svm_model* m) { delete m; }

/* ---- proximity ------------------------------------------------------ */

ds_status ds_proximity_create(const ds_config* cfg, ds_proximity** out) {
  if (!cfg || !out) return invalid("cfg/out is NULL");
  return guarded([&] {
    *out = new ds_proximity{ds::prox::ProximityTracker(cfg->cfg.proximity)};
  });
}

ds_status ds_proximity_update(ds_proximity* p, double t, double rssi,
                              double* trans_t, int* trans_phase, size_t cap,
                              size_t* count) {
  if (!p || !count || (cap > 0 && (!trans_t || !trans_phase)))
    return invalid("NULL argument");
  return guarded([&] {
    auto transitions = p->tracker.update(t, rssi);
    if (transitions.size() > cap)
      throw ds::ConfigError("transition buffer holds " + std::to_string(cap) +
                            ", need " + std::to_string(transitions.size()));
    for (size_t i = 0; i < transitions.size(); ++i) {
      trans_t[i] = transitions[i].t;
      trans_phase[i] = phase_to_int(transitions[i].to);
    }
    *count = transitions.size();
  });
}

ds_status ds_proximity_poll(ds_proximity* p, double t, double* trans_t,
                            int* trans_phase, size_t* count) {
  if (!p || !trans_t || !trans_phase || !count) return invalid("NULL argument");
  return guarded([&] {
    auto tr = p->tracker.poll(t);
    if (tr) {
      trans_t[0] = tr->t;
      trans_phase[0] = phase_to_int(tr->to);
      *count = 1;
    } else {
      *count = 0;
    }
  });
}

ds_status ds_proximity_phase(const ds_proximity* p, int* phase) {
  if (!p || !phase) return invalid("tracker/phase is NULL");
  *phase = phase_to_int(p->tracker.phase());
  return DS_OK;
}

void ds_proximity_free(ds_proximity* p) { delete p; }

/* ---- trigger machine ------------------------------------------------ */

ds_status ds_trigger_create(const ds_config* cfg, ds_trigger** out) {
  if (!cfg || !out) return invalid("cfg/out is NULL");
  return guarded([&] {
    *out = new ds_trigger{ds::trig::TriggerStateMachine(cfg->cfg.trigger)};
  });
}

ds_status ds_trigger_on_proximity(ds_trigger* f, double t, int phase) {
  if (!f) return invalid("trigger is NULL");
  return guarded([&] { f->fsm.on_proximity(t, int_to_phase(phase)); });
}

ds_status ds_trigger_on_speech(ds_trigger* f, double t, int active) {
  if (!f) return invalid("trigger is NULL");
  return guarded([&] { f->fsm.on_speech(t, active != 0); });
}

ds_status ds_trigger_on_tick(ds_trigger* f, double t) {
  if (!f) return invalid("trigger is NULL");
  return guarded([&] { f->fsm.on_tick(t); });
}

ds_status ds_trigger_suspend(ds_trigger* f, double t) {
  if (!f) return invalid("trigger is NULL");
  return guarded([&] { f->fsm.suspend(t); });
}

ds_status ds_trigger_resume(ds_trigger* f, double t) {
  if (!f) return invalid("trigger is NULL");
  return guarded([&] { f->fsm.resume(t); });
}

ds_status ds_trigger_actions_jsonl(const ds_trigger* f, char** out) {
  if (!f || !out) return invalid("trigger/out is NULL");
  return guarded(
      [&] { *out = dup_string(ds::trig::actions_to_jsonl(f->fsm.actions())); });
}

void ds_trigger_free(ds_trigger* f) { delete f; }

ds_status ds_trigger_expected_count(const ds_config* cfg,
                                    const double* up_start,
                                    const double* up_end, size_t n,
                                    int* expected) {
  if (!cfg || !expected || (n > 0 && (!up_start || !up_end)))
    return invalid("NULL argument");
  return guarded([&] {
    std::vector<std::pair<double, double>> uptime;
    uptime.reserve(n);
    for (size_t i = 0; i < n; ++i) uptime.emplace_back(up_start[i], up_end[i]);
    *expected = ds::trig::expected_count(cfg->cfg.trigger, uptime);
  });
}

/* ---- file-level pipeline operations --------------------------------- */

ds_status ds_vad_train_file(const ds_config* cfg, const char* csv_path,
                            uint64_t seed, const char* model_out) {
  if (!cfg || !csv_path || !model_out) return invalid("NULL argument");
  return guarded([&] {
    auto table = ds::io::read_labeled_csv(csv_path);
    ds::vad::SvmTrainOptions opts = cfg->cfg.svm;
    opts.seed = seed;
    auto model = ds::vad::train_linear_svm(table.x, table.y, opts);
    ds::vad::save_model(model, model_out);
  });
}

ds_status ds_vad_run_file(const ds_config* cfg, const char* wav_path,
                          const char* model_path, const char* segments_out) {
  if (!cfg || !wav_path || !model_path || !segments_out)
    return invalid("NULL argument");
  return guarded([&] {
    auto model = ds::vad::load_model(model_path);
    auto audio = load_audio(cfg->cfg, wav_path);
    auto frames = ds::dsp::batch_features(audio, cfg->cfg.mfcc);
    auto decisions = score_frames(frames, model);
    double hop = static_cast<double>(cfg->cfg.mfcc.hop_length) /
                 cfg->cfg.sample_rate;
    auto segs = ds::vad::smooth(decisions, cfg->cfg.hysteresis, hop);
    ds::io::write_file(segments_out, segments_csv(segs));
  });
}

ds_status ds_vad_eval_file(const ds_config* cfg, const char* train_csv,
                           const char* eval_csv, const char* model_path,
                           char** report_json) {
  if (!cfg || !train_csv || !eval_csv || !model_path || !report_json)
    return invalid("NULL argument");
  return guarded([&] {
    auto train = ds::io::read_labeled_csv(train_csv);
    auto eval = ds::io::read_labeled_csv(eval_csv);
    auto model = ds::vad::load_model(model_path);
    auto r = ds::sim::evaluate_vad(model, train, eval);
    json j;
    j["model_balanced_accuracy"] = r.model_balanced_accuracy;
    j["baseline_balanced_accuracy"] = r.baseline_balanced_accuracy;
    j["baseline_threshold"] = r.baseline_threshold;
    j["num_eval_rows"] = r.num_eval_rows;
    *report_json = dup_string(j.dump(2) + "\n");
  });
}

ds_status ds_trigger_replay_file(const ds_config* cfg, const char* events_path,
                                 char** actions_jsonl) {
  if (!cfg || !events_path || !actions_jsonl) return invalid("NULL argument");
  return guarded([&] {
    auto events = ds::trig::parse_fsm_events(
        ds::io::read_file(events_path), events_path);
    ds::trig::TriggerStateMachine fsm(cfg->cfg.trigger);
    for (const auto& ev : events) ds::trig::apply_event(fsm, ev);
    *actions_jsonl = dup_string(ds::trig::actions_to_jsonl(fsm.actions()));
  });
}

ds_status ds_sim_run_battery(const ds_config* cfg, const char* vad_model_path,
                             int num_scenarios, uint64_t base_seed,
                             const char* dump_dir, char** report_json) {
  if (!cfg || !vad_model_path || !report_json) return invalid("NULL argument");
  return guarded([&] {
    auto model = ds::vad::load_model(vad_model_path);
    auto report =
        ds::sim::run_battery(cfg->cfg, model, num_scenarios, base_seed);
    if (dump_dir) {
      for (const auto& r : report.scenarios) {
        auto sc = ds::sim::generate_scenario(cfg->cfg.sim, r.seed);
        ds::sim::dump_scenario(
            std::string(dump_dir) + "/scenario_" + std::to_string(r.seed), sc,
            r);
      }
    }
    *report_json = dup_string(ds::sim::battery_to_json(report));
  });
}

ds_status ds_sim_report_render(const char* report_json, int as_csv,
                               char** out) {
  if (!report_json || !out) return invalid("NULL argument");
  return guarded([&] {
    auto report = ds::sim::battery_from_json(report_json);
    *out = dup_string(as_csv ? ds::sim::battery_render_csv(report)
                             : ds::sim::battery_render_text(report));
  });
}

ds_status ds_synth_vad_corpus(const ds_config* cfg, double duration,
                              uint64_t seed, const char* csv_out) {
  if (!cfg || !csv_out) return invalid("NULL argument");
  return guarded([&] {
    auto table = ds::sim::make_vad_corpus(cfg->cfg, duration, seed);
    ds::io::write_file(csv_out, ds::io::labeled_csv_text(table));
  });
}

ds_status ds_synth_emotion_data(const ds_config* cfg, int num_sessions,
                                uint64_t seed, const char* features_csv_out,
                                const char* labels_csv_out) {
  if (!cfg || !features_csv_out || !labels_csv_out)
    return invalid("NULL argument");
  return guarded([&] {
    auto data = ds::sim::make_emotion_sessions(cfg->cfg, num_sessions, seed);
    ds::io::write_file(features_csv_out,
                       ds::feat::feature_sets_to_csv(data.features));
    ds::io::write_file(labels_csv_out, ds::feat::labels_to_csv(data.labels));
  });
}

ds_status ds_emotion_train_file(const ds_config* cfg, const char* features_csv,
                                const char* labels_csv, const char* axis,
                                const char* model_type, uint64_t seed,
                                const char* model_out) {
  if (!cfg || !features_csv || !labels_csv || !axis || !model_type ||
      !model_out)
    return invalid("NULL argument");
  return guarded([&] {
    auto sets = ds::feat::feature_sets_from_csv(
        ds::io::read_file(features_csv), features_csv);
    auto labels = ds::feat::labels_from_csv(ds::io::read_file(labels_csv),
                                            labels_csv);
    auto ax = ds::feat::parse_axis(axis);
    ds::feat::EmotionTrainOptions opts;
    std::string type = model_type;
    if (type == "svm")
      opts.type = ds::feat::EmotionModelType::svm;
    else if (type == "forest")
      opts.type = ds::feat::EmotionModelType::forest;
    else
      throw ds::ConfigError("model_type must be svm or forest, got \"" + type +
                            "\"");
    opts.svm = cfg->cfg.svm;
    opts.svm.seed = seed;
    opts.forest = cfg->cfg.forest;
    opts.forest.seed = seed;
    auto model = ds::feat::train_emotion_model(sets, aligned_labels(sets, labels, ax),
                                               ax, opts);
    ds::feat::save_emotion_model(model, model_out);
  });
}

ds_status ds_emotion_eval_file(const ds_config* cfg, const char* features_csv,
                               const char* labels_csv, const char* model_path,
                               int allow_imputation, char** report_json) {
  if (!cfg || !features_csv || !labels_csv || !model_path || !report_json)
    return invalid("NULL argument");
  return guarded([&] {
    auto model = ds::feat::load_emotion_model(model_path);
    auto sets = ds::feat::feature_sets_from_csv(
        ds::io::read_file(features_csv), features_csv);
    auto labels = ds::feat::labels_from_csv(ds::io::read_file(labels_csv),
                                            labels_csv);
    auto truth = aligned_labels(sets, labels, model.axis);
    std::vector<int> pred;
    pred.reserve(sets.size());
    int imputed = 0;
    for (const auto& s : sets) {
      auto p = ds::feat::classify_emotion(model, s, allow_imputation != 0);
      pred.push_back(p.label);
      if (p.imputed) ++imputed;
    }
    json j;
    j["axis"] = ds::feat::axis_name(model.axis);
    j["balanced_accuracy"] = ds::balanced_accuracy(pred, truth);
    j["num_sessions"] = sets.size();
    j["imputed_sessions"] = imputed;
    *report_json = dup_string(j.dump(2) + "\n");
  });
}

ds_status ds_extract_features_file(const ds_config* cfg,
                                   const char* session_id,
                                   const char* hr_jsonl, const char* imu_jsonl,
                                   const char* wav_path,
                                   const char* segments_csv,
                                   const char* features_csv_out) {
  if (!cfg || !session_id || !features_csv_out) return invalid("NULL argument");
  return guarded([&] {
    ds::feat::SessionInputs in;
    if (hr_jsonl) {
      ds::feat::HrSeries hr;
      for (const auto& j :
           parse_jsonl(ds::io::read_file(hr_jsonl), hr_jsonl)) {
        hr.t.push_back(jsonl_number(j, "t", hr_jsonl));
        hr.bpm.push_back(jsonl_number(j, "bpm", hr_jsonl));
      }
      in.hr = std::move(hr);
    }
    if (imu_jsonl) {
      ds::feat::ImuSeries imu;
      for (const auto& j :
           parse_jsonl(ds::io::read_file(imu_jsonl), imu_jsonl)) {
        ds::feat::ImuSample s;
        s.t = jsonl_number(j, "t", imu_jsonl);
        s.ax = jsonl_number(j, "ax", imu_jsonl);
        s.ay = jsonl_number(j, "ay", imu_jsonl);
        s.az = jsonl_number(j, "az", imu_jsonl);
        s.gx = jsonl_number(j, "gx", imu_jsonl);
        s.gy = jsonl_number(j, "gy", imu_jsonl);
        s.gz = jsonl_number(j, "gz", imu_jsonl);
        imu.samples.push_back(s);
      }
      in.imu = std::move(imu);
    }
    if (wav_path) {
      auto audio = load_audio(cfg->cfg, wav_path);
      in.mfcc_frames = ds::dsp::batch_features(audio, cfg->cfg.mfcc);
    }
    if (segments_csv)
      in.segments =
          segments_from_csv(ds::io::read_file(segments_csv), segments_csv);
    auto set = ds::feat::extract_features(session_id, in,
                                          cfg->cfg.mfcc.num_coefficients);
    ds::io::write_file(features_csv_out, ds::feat::feature_sets_to_csv({set}));
  });
}

} /* extern "C" */
