#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <dyadsense.h>
#include <json.hpp>

#include "core/config.hpp"
#include "core/io.hpp"
#include "core/rng.hpp"
#include "core/wav.hpp"
#include "dsp/mfcc.hpp"
#include "proximity/proximity.hpp"
#include "trigger/trigger.hpp"
#include "vad/svm.hpp"

namespace {

struct Config {
  ds_config* h = nullptr;
  Config() { REQUIRE(ds_config_create(&h) == DS_OK); }
  ~Config() { ds_config_free(h); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { ds_string_free(s); }
};

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

// row-major blobs around (+2,+2) and (-2,-2)
void make_blob_data(std::vector<double>& x, std::vector<int>& y, int n) {
  ds::Rng rng(5);
  x.clear();
  y.clear();
  for (int i = 0; i < n; ++i) {
    double c = (i % 2 == 0) ? 2.0 : -2.0;
    x.push_back(c + rng.gaussian() * 0.4);
    x.push_back(c + rng.gaussian() * 0.4);
    y.push_back(i % 2 == 0 ? 1 : -1);
  }
}

}  // namespace

TEST_CASE("version, errors, and log level plumbing") {
  REQUIRE(ds_version() != nullptr);
  CHECK(std::string(ds_version()) == "0.1.0");
  REQUIRE(ds_last_error() != nullptr);

  CHECK(ds_set_log_level("debug") == DS_OK);
  CHECK(ds_set_log_level("warn") == DS_OK);
  CHECK(ds_set_log_level("loud") == DS_ERR_CONFIG);
  CHECK(std::string(ds_last_error()).find("loud") != std::string::npos);
  CHECK(ds_set_log_level(nullptr) == DS_ERR_INVALID_ARGUMENT);

  ds_string_free(nullptr);  // must be a no-op
}

TEST_CASE("config lifecycle across the boundary") {
  Config cfg;

  OwnedString hash;
  REQUIRE(ds_config_hash(cfg.h, &hash.s) == DS_OK);
  CHECK(std::string(hash.s) == ds::cfg::config_hash(ds::cfg::default_config()));

  CHECK(ds_config_set(cfg.h, "sim", "density", "0.5") == DS_OK);
  OwnedString hash2;
  REQUIRE(ds_config_hash(cfg.h, &hash2.s) == DS_OK);
  CHECK(std::string(hash2.s) != std::string(hash.s));

  CHECK(ds_config_set(cfg.h, "sim", "nosuch", "1") == DS_ERR_CONFIG);
  CHECK(std::string(ds_last_error()).find("nosuch") != std::string::npos);
  CHECK(ds_config_set(cfg.h, nullptr, "k", "1") == DS_ERR_INVALID_ARGUMENT);
  CHECK(ds_config_create(nullptr) == DS_ERR_INVALID_ARGUMENT);
  CHECK(ds_config_hash(nullptr, &hash2.s) == DS_ERR_INVALID_ARGUMENT);

  TempFile ini("capi_config.ini");
  ds::io::write_file(ini.path, "[audio]\nsample_rate = 8000\n");
  ds_config* loaded = nullptr;
  REQUIRE(ds_config_load(ini.path.c_str(), &loaded) == DS_OK);
  CHECK(ds_config_set(loaded, "audio", "sample_rate", "8000") == DS_OK);
  ds_config_free(loaded);

  ds_config* missing = nullptr;
  CHECK(ds_config_load("does_not_exist.ini", &missing) == DS_ERR_IO);
  ds::io::write_file(ini.path, "[audio]\nbogus = 1\n");
  CHECK(ds_config_load(ini.path.c_str(), &missing) == DS_ERR_CONFIG);
}

TEST_CASE("mfcc stream matches the in-process batch pipeline") {
  Config cfg;
  ds_mfcc_stream* stream = nullptr;
  REQUIRE(ds_mfcc_stream_create(cfg.h, &stream) == DS_OK);

  ds::Rng rng(31);
  std::vector<double> samples(16000);
  for (auto& s : samples) s = rng.uniform(-0.3, 0.3);

  ds::dsp::AudioBuffer audio;
  audio.sample_rate = 16000;
  audio.samples = samples;
  auto expected = ds::dsp::batch_features(audio, ds::dsp::MfccConfig{});

  std::vector<ds::dsp::FeatureVector> got;
  size_t off = 0;
  const size_t chunk = 700;
  while (off < samples.size()) {
    size_t n = std::min(chunk, samples.size() - off);
    REQUIRE(ds_mfcc_stream_push(stream, samples.data() + off, n) == DS_OK);
    off += n;
    while (true) {
      double values[13];
      int64_t frame_index = -1;
      double timestamp = 0.0, log_energy = 0.0;
      int has_frame = 0;
      REQUIRE(ds_mfcc_stream_pop(stream, values, 13, &frame_index, &timestamp,
                                 &log_energy, &has_frame) == DS_OK);
      if (!has_frame) break;
      ds::dsp::FeatureVector fv;
      fv.values.assign(values, values + 13);
      fv.frame_index = frame_index;
      fv.timestamp = timestamp;
      fv.log_energy = log_energy;
      got.push_back(std::move(fv));
    }
  }

  REQUIRE(got.size() == expected.size());
  for (size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].values == expected[i].values);
    CHECK(got[i].frame_index == expected[i].frame_index);
    CHECK(got[i].timestamp == expected[i].timestamp);
    CHECK(got[i].log_energy == expected[i].log_energy);
  }

  // undersized output buffer is refused before any write
  REQUIRE(ds_mfcc_stream_push(stream, samples.data(), 400) == DS_OK);
  double tiny[4];
  int has_frame = 0;
  CHECK(ds_mfcc_stream_pop(stream, tiny, 4, nullptr, nullptr, nullptr,
                           &has_frame) == DS_ERR_CONFIG);

  CHECK(ds_mfcc_stream_push(nullptr, samples.data(), 1) ==
        DS_ERR_INVALID_ARGUMENT);
  ds_mfcc_stream_free(stream);
}

TEST_CASE("svm training and scoring agree with the core implementation") {
  std::vector<double> x;
  std::vector<int> y;
  make_blob_data(x, y, 60);

  ds_svm_model* model = nullptr;
  REQUIRE(ds_svm_train(x.data(), 60, 2, y.data(), 1e-3, 10, 7, &model) ==
          DS_OK);
  size_t dim = 0;
  REQUIRE(ds_svm_dim(model, &dim) == DS_OK);
  CHECK(dim == 2);

  // same data, options, and seed through the C++ trainer
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 60; ++i)
    rows.push_back({x[static_cast<size_t>(2 * i)],
                    x[static_cast<size_t>(2 * i + 1)]});
  ds::vad::SvmTrainOptions opts;
  opts.lambda = 1e-3;
  opts.epochs = 10;
  opts.seed = 7;
  auto core = ds::vad::train_linear_svm(rows, y, opts);

  double probe[2] = {1.7, 2.2};
  double score = 0.0;
  REQUIRE(ds_svm_score(model, probe, 2, &score) == DS_OK);
  CHECK(score == ds::vad::decision_score(core, {probe[0], probe[1]}));
  CHECK(score > 0.0);

  TempFile f("capi_svm.json");
  REQUIRE(ds_svm_save(model, f.path.c_str()) == DS_OK);
  ds_svm_model* loaded = nullptr;
  REQUIRE(ds_svm_load(f.path.c_str(), &loaded) == DS_OK);
  double score2 = 0.0;
  REQUIRE(ds_svm_score(loaded, probe, 2, &score2) == DS_OK);
  CHECK(score2 == score);

  double bad = 0.0;
  CHECK(ds_svm_score(model, probe, 1, &bad) == DS_ERR_MODEL);
  CHECK(ds_svm_train(x.data(), 0, 2, y.data(), 1e-3, 10, 7, &loaded) ==
        DS_ERR_TRAINING);
  CHECK(ds_svm_train(nullptr, 60, 2, y.data(), 1e-3, 10, 7, &loaded) ==
        DS_ERR_INVALID_ARGUMENT);
  ds_svm_model* nope = nullptr;
  CHECK(ds_svm_load("does_not_exist_model.json", &nope) == DS_ERR_IO);

  ds_svm_free(model);
  ds_svm_free(loaded);
}

TEST_CASE("proximity tracker mirrors the core transition stream") {
  Config cfg;
  ds_proximity* prox = nullptr;
  REQUIRE(ds_proximity_create(cfg.h, &prox) == DS_OK);
  ds::prox::ProximityTracker core{ds::prox::ProximityConfig{}};

  ds::Rng rng(12);
  double t = 0.0;
  for (int i = 0; i < 400; ++i) {
    bool near_phase = (i / 60) % 2 == 1;
    double rssi = (near_phase ? -55.0 : -85.0) + rng.gaussian() * 3.0;
    // occasional gaps exercise the staleness path
    t += (i % 37 == 36) ? 15.0 : 1.0;

    double trans_t[2];
    int trans_phase[2];
    size_t count = 99;
    REQUIRE(ds_proximity_update(prox, t, rssi, trans_t, trans_phase, 2,
                                &count) == DS_OK);
    auto expected = core.update(t, rssi);
    REQUIRE(count == expected.size());
    for (size_t k = 0; k < count; ++k) {
      CHECK(trans_t[k] == expected[k].t);
      CHECK(trans_phase[k] ==
            (expected[k].to == ds::prox::Phase::near
                 ? DS_PHASE_NEAR
                 : expected[k].to == ds::prox::Phase::far ? DS_PHASE_FAR
                                                          : DS_PHASE_UNKNOWN));
    }

    int phase = -1;
    REQUIRE(ds_proximity_phase(prox, &phase) == DS_OK);
    int core_phase = core.phase() == ds::prox::Phase::near
                         ? DS_PHASE_NEAR
                         : core.phase() == ds::prox::Phase::far
                               ? DS_PHASE_FAR
                               : DS_PHASE_UNKNOWN;
    CHECK(phase == core_phase);
  }

  // poll parity after a long quiet stretch
  double pt = 0.0;
  int pp = -1;
  size_t pc = 9;
  REQUIRE(ds_proximity_poll(prox, t + 30.0, &pt, &pp, &pc) == DS_OK);
  auto core_poll = core.poll(t + 30.0);
  REQUIRE(pc == (core_poll ? 1u : 0u));
  if (core_poll) {
    CHECK(pt == core_poll->t);
    CHECK(pp == DS_PHASE_UNKNOWN);
  }

  // time running backwards is a stream error
  double tt[2];
  int ph[2];
  size_t n = 0;
  CHECK(ds_proximity_update(prox, t - 100.0, -60.0, tt, ph, 2, &n) ==
        DS_ERR_STREAM);
  CHECK(ds_proximity_update(nullptr, 0, 0, tt, ph, 2, &n) ==
        DS_ERR_INVALID_ARGUMENT);
  ds_proximity_free(prox);
}

TEST_CASE("trigger machine emits the same actions as the core fsm") {
  Config cfg;
  REQUIRE(ds_config_set(cfg.h, "trigger", "slots", "0:100,100:200") == DS_OK);
  REQUIRE(ds_config_set(cfg.h, "trigger", "recording_duration", "30") ==
          DS_OK);
  REQUIRE(ds_config_set(cfg.h, "trigger", "min_gap", "30") == DS_OK);

  ds::trig::TriggerConfig tc;
  tc.slots = {{0.0, 100.0}, {100.0, 200.0}};
  tc.recording_duration = 30.0;
  tc.min_gap = 30.0;
  ds::trig::TriggerStateMachine core(tc);

  ds_trigger* fsm = nullptr;
  REQUIRE(ds_trigger_create(cfg.h, &fsm) == DS_OK);

  auto both_prox = [&](double t, int phase, ds::prox::Phase p) {
    REQUIRE(ds_trigger_on_proximity(fsm, t, phase) == DS_OK);
    core.on_proximity(t, p);
  };
  auto both_speech = [&](double t, bool active) {
    REQUIRE(ds_trigger_on_speech(fsm, t, active ? 1 : 0) == DS_OK);
    core.on_speech(t, active);
  };
  auto both_tick = [&](double t) {
    REQUIRE(ds_trigger_on_tick(fsm, t) == DS_OK);
    core.on_tick(t);
  };

  both_prox(1.0, DS_PHASE_NEAR, ds::prox::Phase::near);
  both_speech(2.0, true);
  for (int t = 3; t <= 60; ++t) both_tick(t);
  both_speech(61.0, false);
  REQUIRE(ds_trigger_suspend(fsm, 70.0) == DS_OK);
  core.suspend(70.0);
  CHECK(ds_trigger_on_tick(fsm, 71.0) == DS_ERR_STREAM);  // suspended
  REQUIRE(ds_trigger_resume(fsm, 90.0) == DS_OK);
  core.resume(90.0);
  for (int t = 91; t <= 200; ++t) both_tick(t);

  OwnedString actions;
  REQUIRE(ds_trigger_actions_jsonl(fsm, &actions.s) == DS_OK);
  CHECK(std::string(actions.s) == ds::trig::actions_to_jsonl(core.actions()));
  // the scripted run produced at least one recording
  CHECK(std::string(actions.s).find("start_recording") != std::string::npos);

  CHECK(ds_trigger_on_proximity(fsm, 500.0, 9) == DS_ERR_CONFIG);
  CHECK(ds_trigger_on_tick(nullptr, 0.0) == DS_ERR_INVALID_ARGUMENT);
  ds_trigger_free(fsm);
}

TEST_CASE("expected slot count under uptime intervals") {
  Config cfg;  // default day: four 900 s slots
  int expected = -1;

  double s0[] = {0.0};
  double e0[] = {3600.0};
  REQUIRE(ds_trigger_expected_count(cfg.h, s0, e0, 1, &expected) == DS_OK);
  CHECK(expected == 4);

  double e1[] = {1800.0};
  REQUIRE(ds_trigger_expected_count(cfg.h, s0, e1, 1, &expected) == DS_OK);
  CHECK(expected == 2);

  // touching intervals merge
  double s2[] = {0.0, 900.0};
  double e2[] = {900.0, 1900.0};
  REQUIRE(ds_trigger_expected_count(cfg.h, s2, e2, 2, &expected) == DS_OK);
  CHECK(expected == 2);

  REQUIRE(ds_trigger_expected_count(cfg.h, nullptr, nullptr, 0, &expected) ==
          DS_OK);
  CHECK(expected == 0);
  CHECK(ds_trigger_expected_count(cfg.h, nullptr, e0, 1, &expected) ==
        DS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("vad file pipeline: corpus, train, run, eval") {
  Config cfg;
  TempFile train_csv("capi_train.csv");
  TempFile eval_csv("capi_eval.csv");
  TempFile model_file("capi_vad_model.json");
  TempFile wav_file("capi_audio.wav");
  TempFile seg_file("capi_segments.csv");

  REQUIRE(ds_synth_vad_corpus(cfg.h, 8.0, 101, train_csv.path.c_str()) ==
          DS_OK);
  REQUIRE(ds_synth_vad_corpus(cfg.h, 8.0, 102, eval_csv.path.c_str()) ==
          DS_OK);
  auto table = ds::io::read_labeled_csv(train_csv.path);
  CHECK(table.feature_names.size() == 14);
  CHECK(table.x.size() == 792);

  REQUIRE(ds_vad_train_file(cfg.h, train_csv.path.c_str(), 7,
                            model_file.path.c_str()) == DS_OK);
  ds_svm_model* model = nullptr;
  REQUIRE(ds_svm_load(model_file.path.c_str(), &model) == DS_OK);
  size_t dim = 0;
  REQUIRE(ds_svm_dim(model, &dim) == DS_OK);
  CHECK(dim == 14);
  ds_svm_free(model);

  OwnedString report;
  REQUIRE(ds_vad_eval_file(cfg.h, train_csv.path.c_str(),
                           eval_csv.path.c_str(), model_file.path.c_str(),
                           &report.s) == DS_OK);
  auto j = nlohmann::json::parse(report.s);
  CHECK(j["num_eval_rows"].get<size_t>() == 792);
  CHECK(j["model_balanced_accuracy"].get<double>() > 0.8);
  CHECK(j.contains("baseline_balanced_accuracy"));
  CHECK(j.contains("baseline_threshold"));

  // silence in, zero segments out
  ds::wav::write_pcm16_mono(wav_file.path, std::vector<double>(16000, 0.0),
                            16000);
  REQUIRE(ds_vad_run_file(cfg.h, wav_file.path.c_str(),
                          model_file.path.c_str(),
                          seg_file.path.c_str()) == DS_OK);
  CHECK(ds::io::read_file(seg_file.path) == "start,end\n");

  // a wav whose rate disagrees with the config is rejected up front
  ds::wav::write_pcm16_mono(wav_file.path, std::vector<double>(8000, 0.0),
                            8000);
  CHECK(ds_vad_run_file(cfg.h, wav_file.path.c_str(), model_file.path.c_str(),
                        seg_file.path.c_str()) == DS_ERR_CONFIG);
  CHECK(std::string(ds_last_error()).find("8000") != std::string::npos);

  CHECK(ds_vad_train_file(cfg.h, "does_not_exist.csv", 7,
                          model_file.path.c_str()) == DS_ERR_IO);
}

TEST_CASE("mfcc file output in csv and jsonl forms") {
  Config cfg;
  TempFile wav_file("capi_mfcc.wav");
  TempFile out_csv("capi_mfcc.csv");
  TempFile out_jsonl("capi_mfcc.jsonl");

  ds::Rng rng(8);
  std::vector<double> samples(16000);
  for (auto& s : samples) s = rng.uniform(-0.1, 0.1);
  ds::wav::write_pcm16_mono(wav_file.path, samples, 16000);

  REQUIRE(ds_mfcc_file(cfg.h, wav_file.path.c_str(), out_csv.path.c_str(),
                       0) == DS_OK);
  auto csv = ds::io::read_csv(out_csv.path);
  CHECK(csv.header.size() == 2 + 13);
  CHECK(csv.header[0] == "frame_index");
  CHECK(csv.header[1] == "timestamp");
  CHECK(csv.rows.size() == 98);

  REQUIRE(ds_mfcc_file(cfg.h, wav_file.path.c_str(), out_jsonl.path.c_str(),
                       1) == DS_OK);
  auto text = ds::io::read_file(out_jsonl.path);
  size_t lines = 0, pos = 0;
  while ((pos = text.find('\n', pos)) != std::string::npos) {
    ++lines;
    ++pos;
  }
  CHECK(lines == 98);
  auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
  CHECK(first["frame_index"].get<int>() == 0);
  CHECK(first["values"].size() == 13);
}

TEST_CASE("trigger replay file matches a directly driven machine") {
  Config cfg;
  REQUIRE(ds_config_set(cfg.h, "trigger", "slots", "0:50") == DS_OK);
  REQUIRE(ds_config_set(cfg.h, "trigger", "recording_duration", "10") ==
          DS_OK);
  REQUIRE(ds_config_set(cfg.h, "trigger", "min_gap", "10") == DS_OK);

  std::string events =
      "{\"t\":0.0,\"event\":\"proximity\",\"phase\":\"near\"}\n"
      "{\"t\":1.0,\"event\":\"speech\",\"active\":true}\n"
      "{\"t\":10.0,\"event\":\"tick\"}\n"
      "{\"t\":30.0,\"event\":\"tick\"}\n"
      "{\"t\":60.0,\"event\":\"tick\"}\n";
  TempFile f("capi_events.jsonl");
  ds::io::write_file(f.path, events);

  OwnedString actions;
  REQUIRE(ds_trigger_replay_file(cfg.h, f.path.c_str(), &actions.s) == DS_OK);

  ds::trig::TriggerConfig tc;
  tc.slots = {{0.0, 50.0}};
  tc.recording_duration = 10.0;
  tc.min_gap = 10.0;
  ds::trig::TriggerStateMachine fsm(tc);
  for (const auto& ev : ds::trig::parse_fsm_events(events, f.path))
    ds::trig::apply_event(fsm, ev);
  CHECK(std::string(actions.s) == ds::trig::actions_to_jsonl(fsm.actions()));

  ds::io::write_file(f.path, "{\"t\":0.0}\n");
  OwnedString bad;
  CHECK(ds_trigger_replay_file(cfg.h, f.path.c_str(), &bad.s) ==
        DS_ERR_PARSE);
  CHECK(std::string(ds_last_error()).find(":1") != std::string::npos);
}

TEST_CASE("emotion file flow trains and evaluates") {
  Config cfg;
  TempFile feats("capi_emotion_features.csv");
  TempFile labels("capi_emotion_labels.csv");
  TempFile model_file("capi_emotion_model.json");

  REQUIRE(ds_synth_emotion_data(cfg.h, 12, 55, feats.path.c_str(),
                                labels.path.c_str()) == DS_OK);
  REQUIRE(ds_emotion_train_file(cfg.h, feats.path.c_str(),
                                labels.path.c_str(), "valence", "svm", 7,
                                model_file.path.c_str()) == DS_OK);

  OwnedString report;
  REQUIRE(ds_emotion_eval_file(cfg.h, feats.path.c_str(),
                               labels.path.c_str(), model_file.path.c_str(),
                               0, &report.s) == DS_OK);
  auto j = nlohmann::json::parse(report.s);
  CHECK(j["axis"].get<std::string>() == "valence");
  CHECK(j["num_sessions"].get<int>() == 12);
  CHECK(j["imputed_sessions"].get<int>() == 0);
  CHECK(j["balanced_accuracy"].get<double>() >= 0.85);

  CHECK(ds_emotion_train_file(cfg.h, feats.path.c_str(), labels.path.c_str(),
                              "mood", "svm", 7,
                              model_file.path.c_str()) == DS_ERR_CONFIG);
  CHECK(ds_emotion_train_file(cfg.h, feats.path.c_str(), labels.path.c_str(),
                              "valence", "knn", 7,
                              model_file.path.c_str()) == DS_ERR_CONFIG);
}

TEST_CASE("feature extraction file op handles absent modalities") {
  Config cfg;
  TempFile hr("capi_hr.jsonl");
  TempFile out("capi_features.csv");

  std::string hr_text;
  for (int t = 0; t < 30; ++t)
    hr_text += "{\"t\":" + std::to_string(t) + ",\"bpm\":" +
               std::to_string(70 + t % 5) + "}\n";
  ds::io::write_file(hr.path, hr_text);

  REQUIRE(ds_extract_features_file(cfg.h, "sess1", hr.path.c_str(), nullptr,
                                   nullptr, nullptr,
                                   out.path.c_str()) == DS_OK);
  auto csv = ds::io::read_csv(out.path);
  REQUIRE(csv.rows.size() == 1);
  CHECK(csv.header[0] == "session_id");
  CHECK(csv.header.size() == 1 + 76);
  CHECK(csv.rows[0][0] == "sess1");

  // hr features are numbers, movement and acoustic columns are absent
  bool saw_hr_value = false, saw_mov_na = false;
  for (size_t i = 1; i < csv.header.size(); ++i) {
    if (csv.header[i] == "hr_mean") saw_hr_value = csv.rows[0][i] != "NA";
    if (csv.header[i] == "mov_accel_mag_mean") saw_mov_na = csv.rows[0][i] == "NA";
  }
  CHECK(saw_hr_value);
  CHECK(saw_mov_na);

  CHECK(ds_extract_features_file(cfg.h, nullptr, nullptr, nullptr, nullptr,
                                 nullptr, out.path.c_str()) ==
        DS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("battery runs through the c boundary and renders") {
  Config cfg;
  REQUIRE(ds_config_set(cfg.h, "sim", "duration", "120") == DS_OK);
  REQUIRE(ds_config_set(cfg.h, "sim", "noise_jitter_db", "0") == DS_OK);
  REQUIRE(ds_config_set(cfg.h, "sim", "snr_min_db", "10") == DS_OK);
  REQUIRE(ds_config_set(cfg.h, "sim", "snr_max_db", "10") == DS_OK);
  REQUIRE(ds_config_set(cfg.h, "trigger", "slots", "0:60,60:120") == DS_OK);
  REQUIRE(ds_config_set(cfg.h, "trigger", "recording_duration", "30") ==
          DS_OK);
  REQUIRE(ds_config_set(cfg.h, "trigger", "min_gap", "30") == DS_OK);

  TempFile corpus("capi_battery_corpus.csv");
  TempFile model_file("capi_battery_model.json");
  REQUIRE(ds_synth_vad_corpus(cfg.h, 8.0, 11, corpus.path.c_str()) == DS_OK);
  REQUIRE(ds_vad_train_file(cfg.h, corpus.path.c_str(), 7,
                            model_file.path.c_str()) == DS_OK);

  OwnedString report;
  REQUIRE(ds_sim_run_battery(cfg.h, model_file.path.c_str(), 1, 42, nullptr,
                             &report.s) == DS_OK);
  auto j = nlohmann::json::parse(report.s);
  CHECK(j["num_scenarios"].get<int>() == 1);
  CHECK(j["scenarios"].size() == 1);

  OwnedString text;
  REQUIRE(ds_sim_report_render(report.s, 0, &text.s) == DS_OK);
  CHECK(std::string(text.s).find("battery: 1 scenario(s)") !=
        std::string::npos);
  OwnedString csv;
  REQUIRE(ds_sim_report_render(report.s, 1, &csv.s) == DS_OK);
  CHECK(std::string(csv.s).rfind("seed,", 0) == 0);

  OwnedString nope;
  CHECK(ds_sim_report_render("{broken", 0, &nope.s) == DS_ERR_PARSE);
}
