#include "sim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"
#include "dsp/mfcc.hpp"
#include "proximity/proximity.hpp"

namespace ds::sim {
namespace {

using nlohmann::json;

constexpr double pi = std::numbers::pi_v<double>;
constexpr uint64_t golden = 0x9E3779B97F4A7C15ULL;

// Independent hash streams derived from one scenario seed.
uint64_t sub_seed(uint64_t seed, uint64_t tag) {
  return splitmix64(seed ^ (golden * (tag + 1)));
}

// Harmonic weights of the voiced tone and the RMS of the unit-amplitude
// stack including the flutter envelope, so snr_db is a true power ratio
// against the nominal noise floor.
constexpr double h1 = 1.0, h2 = 0.5, h3 = 0.33;
const double voiced_rms =
    std::sqrt((h1 * h1 + h2 * h2 + h3 * h3) / 2.0 * (1.0 + 0.25 * 0.25 / 2.0));

void validate_sim(const cfg::SimParams& p) {
  if (p.duration <= 0.0) throw ConfigError("duration must be positive");
  if (p.density < 0.0 || p.density >= 1.0)
    throw ConfigError("density must be in [0, 1)");
  if (p.rssi_rate <= 0.0) throw ConfigError("rssi_rate must be positive");
  if (p.imu_rate <= 0.0) throw ConfigError("imu_rate must be positive");
  if (p.segment_min <= 0.0 || p.segment_max < p.segment_min)
    throw ConfigError("segment length range is invalid");
  if (p.noise_rms <= 0.0) throw ConfigError("noise_rms must be positive");
  if (p.snr_max_db < p.snr_min_db) throw ConfigError("snr range is invalid");
  if (p.emotion_duration < 12.0)
    throw ConfigError("emotion_duration must be at least 12 seconds");
}

std::string fmt3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

AudioSynth::AudioSynth(const cfg::SimParams& params, int sample_rate,
                       uint64_t seed, std::vector<SpeechSpec> speech)
    : params_(params),
      sample_rate_(sample_rate),
      noise_seed_(sub_seed(seed, 0)),
      gain_seed_(sub_seed(seed, 1)),
      speech_(std::move(speech)) {
  if (sample_rate_ <= 0) throw ConfigError("sample rate must be positive");
  if (params_.noise_rms <= 0.0) throw ConfigError("noise_rms must be positive");
  for (size_t i = 0; i < speech_.size(); ++i) {
    if (speech_[i].end <= speech_[i].start)
      throw ConfigError("speech window end must exceed start");
    if (speech_[i].f0 <= 0.0) throw ConfigError("speech f0 must be positive");
    if (i > 0 && speech_[i].start < speech_[i - 1].end)
      throw ConfigError("speech windows must be ordered and disjoint");
  }
}

std::vector<double> AudioSynth::render_second(int64_t s) const {
  if (s < 0) throw ConfigError("second index must be non-negative");
  const int sr = sample_rate_;
  std::vector<double> out(static_cast<size_t>(sr));

  // Per-second level jitter on the noise floor; uniform noise with unit
  // variance before scaling.
  double ug = unit_from_bits(
      splitmix64(gain_seed_ + golden * static_cast<uint64_t>(s + 1)));
  double gain_db = (2.0 * ug - 1.0) * params_.noise_jitter_db;
  double amp =
      params_.noise_rms * std::pow(10.0, gain_db / 20.0) * std::sqrt(3.0);
  const int64_t i0 = s * sr;
  for (int n = 0; n < sr; ++n) {
    double u = unit_from_bits(
        splitmix64(noise_seed_ + golden * static_cast<uint64_t>(i0 + n + 1)));
    out[static_cast<size_t>(n)] = amp * (2.0 * u - 1.0);
  }

  const double t_lo = static_cast<double>(s);
  const double t_hi = static_cast<double>(s + 1);
  for (const auto& spec : speech_) {
    if (spec.end <= t_lo) continue;
    if (spec.start >= t_hi) break;
    // Sample n is voiced iff spec.start <= (i0 + n) / sr < spec.end.
    int64_t first = std::max<int64_t>(
        i0, static_cast<int64_t>(std::ceil(spec.start * sr - 1e-9)));
    int64_t last = std::min<int64_t>(
        i0 + sr, static_cast<int64_t>(std::ceil(spec.end * sr - 1e-9)));
    if (first >= last) continue;

    double a = params_.noise_rms * std::pow(10.0, spec.snr_db / 20.0) /
               voiced_rms;
    // Three harmonics plus a 4 Hz flutter envelope. Oscillators re-anchor
    // at the first voiced sample of this second, so values never depend on
    // which seconds were rendered before.
    const double freqs[4] = {spec.f0, 2.0 * spec.f0, 3.0 * spec.f0, 4.0};
    double c[4], sn[4], dc[4], dsn[4];
    double tau0 = static_cast<double>(first) / sr - spec.start;
    for (int k = 0; k < 4; ++k) {
      double ph = 2.0 * pi * std::fmod(freqs[k] * tau0, 1.0);
      c[k] = std::cos(ph);
      sn[k] = std::sin(ph);
      double step = 2.0 * pi * freqs[k] / sr;
      dc[k] = std::cos(step);
      dsn[k] = std::sin(step);
    }
    for (int64_t i = first; i < last; ++i) {
      double env = 1.0 + 0.25 * sn[3];
      out[static_cast<size_t>(i - i0)] +=
          a * env * (h1 * sn[0] + h2 * sn[1] + h3 * sn[2]);
      for (int k = 0; k < 4; ++k) {
        double nc = c[k] * dc[k] - sn[k] * dsn[k];
        sn[k] = sn[k] * dc[k] + c[k] * dsn[k];
        c[k] = nc;
      }
    }
  }
  return out;
}

std::vector<double> AudioSynth::render_range(int64_t s0, int64_t s1) const {
  if (s0 < 0 || s1 < s0) throw ConfigError("invalid second range");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(s1 - s0) * static_cast<size_t>(sample_rate_));
  for (int64_t s = s0; s < s1; ++s) {
    auto sec = render_second(s);
    out.insert(out.end(), sec.begin(), sec.end());
  }
  return out;
}

Scenario generate_scenario(const cfg::SimParams& p, uint64_t seed) {
  validate_sim(p);
  Scenario sc;
  sc.seed = seed;
  sc.params = p;

  // Conversation placement: draw lengths until the density budget is met
  // (last one trimmed to land exactly), then split the idle remainder into
  // randomly weighted gaps around them.
  Rng rng(sub_seed(seed, 2));
  const double budget = p.density * p.duration;
  std::vector<double> lens;
  double total = 0.0;
  while (total + 1e-9 < budget) {
    double len = rng.uniform(p.segment_min, p.segment_max);
    if (total + len > budget) len = budget - total;
    lens.push_back(len);
    total += len;
  }
  const double idle = p.duration - total;
  std::vector<double> w(lens.size() + 1);
  double wsum = 0.0;
  for (auto& wi : w) {
    wi = rng.uniform(0.5, 1.5);
    wsum += wi;
  }
  double t = 0.0;
  for (size_t i = 0; i < lens.size(); ++i) {
    t += idle * w[i] / wsum;
    SpeechSpec spec;
    spec.start = t;
    spec.end = t + lens[i];
    spec.f0 = rng.uniform(120.0, 280.0);
    spec.snr_db = rng.uniform(p.snr_min_db, p.snr_max_db);
    sc.speech.push_back(spec);
    t = spec.end;
  }

  // RSSI tracks togetherness with gaussian measurement noise.
  Rng rrng(sub_seed(seed, 3));
  size_t si = 0;
  const double rssi_dt = 1.0 / p.rssi_rate;
  const auto n_rssi = static_cast<int64_t>(std::llround(p.duration * p.rssi_rate));
  for (int64_t i = 0; i < n_rssi; ++i) {
    double ts = static_cast<double>(i) * rssi_dt;
    if (ts >= p.duration) break;
    while (si < sc.speech.size() && sc.speech[si].end <= ts) ++si;
    bool together = si < sc.speech.size() && sc.speech[si].start <= ts;
    double mean = together ? p.near_mean_dbm : p.far_mean_dbm;
    sc.rssi.push_back({ts, mean + rrng.gaussian() * p.rssi_noise_sd});
  }

  // Heart rate at 1 Hz, slightly elevated during interaction.
  Rng hrng(sub_seed(seed, 4));
  si = 0;
  const auto n_hr = static_cast<int64_t>(std::llround(p.duration));
  for (int64_t i = 0; i < n_hr; ++i) {
    double ts = static_cast<double>(i);
    if (ts >= p.duration) break;
    while (si < sc.speech.size() && sc.speech[si].end <= ts) ++si;
    bool together = si < sc.speech.size() && sc.speech[si].start <= ts;
    sc.hr.t.push_back(ts);
    sc.hr.bpm.push_back(p.hr_base + (together ? 4.0 : 0.0) +
                        hrng.gaussian() * p.hr_sd);
  }

  // Wrist motion: gravity on z plus a slow sway, larger while interacting.
  Rng irng(sub_seed(seed, 5));
  si = 0;
  const auto n_imu = static_cast<int64_t>(std::llround(p.duration * p.imu_rate));
  for (int64_t i = 0; i < n_imu; ++i) {
    double ts = static_cast<double>(i) / p.imu_rate;
    if (ts >= p.duration) break;
    while (si < sc.speech.size() && sc.speech[si].end <= ts) ++si;
    bool together = si < sc.speech.size() && sc.speech[si].start <= ts;
    double amp = together ? 0.10 : 0.04;
    double gamp = together ? 0.5 : 0.2;
    double ph = 2.0 * pi * 1.3 * ts;
    feat::ImuSample smp;
    smp.t = ts;
    smp.ax = amp * std::sin(ph) + irng.gaussian() * 0.02;
    smp.ay = amp * std::sin(ph + 2.1) + irng.gaussian() * 0.02;
    smp.az = 1.0 + amp * std::sin(ph + 4.2) + irng.gaussian() * 0.02;
    smp.gx = gamp * std::sin(ph + 0.7) + irng.gaussian() * 0.05;
    smp.gy = gamp * std::sin(ph + 2.8) + irng.gaussian() * 0.05;
    smp.gz = gamp * std::sin(ph + 4.9) + irng.gaussian() * 0.05;
    sc.imu.samples.push_back(smp);
  }
  return sc;
}

double speech_overlap(const std::vector<SpeechSpec>& speech, double t0,
                      double t1) {
  double total = 0.0;
  for (const auto& s : speech) {
    double lo = std::max(t0, s.start);
    double hi = std::min(t1, s.end);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

ScenarioResult run_simulation(const Scenario& sc, const cfg::ToolkitConfig& cfg,
                              const vad::LinearSvmModel& model,
                              std::vector<std::pair<double, double>> uptime) {
  validate_sim(sc.params);
  const double duration = sc.params.duration;
  if (uptime.empty()) uptime.push_back({0.0, duration});
  std::sort(uptime.begin(), uptime.end());
  std::vector<std::pair<double, double>> spans;
  for (const auto& iv : uptime) {
    if (iv.second < iv.first)
      throw ConfigError("uptime interval end precedes start");
    if (!spans.empty() && iv.first <= spans.back().second)
      spans.back().second = std::max(spans.back().second, iv.second);
    else
      spans.push_back(iv);
  }
  auto second_up = [&](int64_t s) {
    for (const auto& sp : spans)
      if (sp.first <= static_cast<double>(s) &&
          static_cast<double>(s + 1) <= sp.second)
        return true;
    return false;
  };

  trig::TriggerStateMachine fsm(cfg.trigger);
  prox::ProximityTracker tracker(cfg.proximity);
  const double hop_seconds =
      static_cast<double>(cfg.mfcc.hop_length) / cfg.sample_rate;
  dsp::MfccStream stream(cfg.mfcc, cfg.sample_rate);
  vad::StreamingSmoother smoother(cfg.hysteresis, hop_seconds);
  AudioSynth synth(sc.params, cfg.sample_rate, sc.seed, sc.speech);

  // Everything observed within one second is fed to the trigger machine in
  // timestamp order; rank breaks ties (proximity, then speech, then tick).
  struct Ev {
    double t;
    int rank;
    prox::Phase phase;
    bool active;
  };

  std::vector<vad::SpeechSegment> detected;
  double audio_base = 0.0;  // scenario time of the current stream's origin
  bool speech_state = false;
  size_t rssi_idx = 0;

  auto flush_audio = [&](double /*t*/) {
    for (auto seg : smoother.finish()) {
      seg.start += audio_base;
      seg.end += audio_base;
      detected.push_back(seg);
    }
  };

  const auto num_seconds = static_cast<int64_t>(std::ceil(duration - 1e-9));
  bool device_up = second_up(0);
  if (!device_up) fsm.suspend(0.0);

  std::vector<Ev> evs;
  dsp::FeatureVector fv;
  for (int64_t s = 0; s < num_seconds; ++s) {
    bool up = second_up(s);
    if (up && !device_up) {
      fsm.resume(static_cast<double>(s));
      tracker = prox::ProximityTracker(cfg.proximity);
      stream = dsp::MfccStream(cfg.mfcc, cfg.sample_rate);
      smoother = vad::StreamingSmoother(cfg.hysteresis, hop_seconds);
      audio_base = static_cast<double>(s);
      speech_state = false;
      device_up = true;
    } else if (!up && device_up) {
      flush_audio(static_cast<double>(s));
      fsm.suspend(static_cast<double>(s));
      speech_state = false;
      device_up = false;
    }
    if (!up) {
      // Samples that fall in downtime are never delivered.
      while (rssi_idx < sc.rssi.size() &&
             sc.rssi[rssi_idx].t < static_cast<double>(s + 1))
        ++rssi_idx;
      continue;
    }

    evs.clear();
    while (rssi_idx < sc.rssi.size() &&
           sc.rssi[rssi_idx].t < static_cast<double>(s + 1)) {
      const auto& smp = sc.rssi[rssi_idx];
      for (const auto& tr : tracker.update(smp.t, smp.dbm))
        evs.push_back({tr.t, 0, tr.to, false});
      ++rssi_idx;
    }
    evs.push_back({static_cast<double>(s), 2, prox::Phase::unknown, false});

    stream.push(synth.render_second(s));
    while (stream.pop(fv)) {
      auto feats = vad::model_features(fv, model.weights.size());
      double score = vad::decision_score(model, feats);
      vad::VadDecision d{fv.frame_index, score, vad::classify(score)};
      if (auto edge = smoother.push(d)) {
        evs.push_back({audio_base + edge->t, 1, prox::Phase::unknown,
                       edge->active});
        speech_state = edge->active;
      }
    }

    std::stable_sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
      if (a.t != b.t) return a.t < b.t;
      return a.rank < b.rank;
    });
    for (const auto& e : evs) {
      if (e.rank == 0)
        fsm.on_proximity(e.t, e.phase);
      else if (e.rank == 1)
        fsm.on_speech(e.t, e.active);
      else
        fsm.on_tick(e.t);
    }
  }

  if (device_up) {
    flush_audio(duration);
    if (speech_state) fsm.on_speech(duration, false);
    // Keep ticking until recordings (and any deferred slot starts chained
    // onto their stops) have drained.
    const double limit =
        duration + (static_cast<double>(cfg.trigger.slots.size()) + 2.0) *
                       (cfg.trigger.recording_duration + 1.0);
    double t = duration;
    while (true) {
      if (auto tr = tracker.poll(t)) fsm.on_proximity(tr->t, tr->to);
      fsm.on_tick(t);
      if (!fsm.recording_active()) break;
      t += 1.0;
      if (t > limit) throw StreamError("replay failed to drain recordings");
    }
  }

  ScenarioResult r;
  r.seed = sc.seed;
  r.duration = duration;
  r.detected_segments = detected;
  r.triggers = fsm.triggers();
  r.sessions = fsm.sessions();
  r.actions = fsm.actions();
  for (const auto& seg : detected)
    r.detected_speech_seconds += seg.end - seg.start;
  r.true_speech_seconds = speech_overlap(sc.speech, 0.0, duration);

  for (const auto& tr : r.triggers) {
    if (tr.kind == trig::TriggerKind::algorithm)
      ++r.algorithm_triggers;
    else
      ++r.scheduled_triggers;
  }
  auto expected = trig::expected_slots(cfg.trigger, spans);
  r.expected_slots = static_cast<int>(expected.size());
  for (const auto& tr : r.triggers)
    if (std::binary_search(expected.begin(), expected.end(), tr.slot_id))
      ++r.triggers_in_expected_slots;
  r.coverage = trig::coverage(r.triggers_in_expected_slots, r.expected_slots);

  for (const auto& sess : r.sessions) {
    bool hit = speech_overlap(sc.speech, sess.t_start, sess.t_end) >=
               contains_overlap_seconds - 1e-9;
    if (sess.kind == trig::TriggerKind::algorithm) {
      ++r.algorithm_sessions;
      if (hit) ++r.algorithm_hits;
    } else {
      ++r.scheduled_sessions;
      if (hit) ++r.scheduled_hits;
    }
  }
  if (r.algorithm_sessions > 0)
    r.precision_algorithm =
        static_cast<double>(r.algorithm_hits) / r.algorithm_sessions;
  if (r.scheduled_sessions > 0)
    r.precision_scheduled =
        static_cast<double>(r.scheduled_hits) / r.scheduled_sessions;
  return r;
}

BatteryReport run_battery(const cfg::ToolkitConfig& cfg,
                          const vad::LinearSvmModel& model, int num_scenarios,
                          uint64_t base_seed) {
  if (num_scenarios <= 0)
    throw ConfigError("battery needs at least one scenario");
  BatteryReport rep;
  rep.base_seed = base_seed;
  rep.num_scenarios = num_scenarios;
  double cov = 0.0;
  for (int i = 0; i < num_scenarios; ++i) {
    Scenario sc = generate_scenario(cfg.sim, base_seed + static_cast<uint64_t>(i));
    ScenarioResult r = run_simulation(sc, cfg, model);
    rep.algorithm_sessions += r.algorithm_sessions;
    rep.scheduled_sessions += r.scheduled_sessions;
    rep.algorithm_hits += r.algorithm_hits;
    rep.scheduled_hits += r.scheduled_hits;
    cov += r.coverage;
    rep.scenarios.push_back(std::move(r));
  }
  rep.mean_coverage = cov / num_scenarios;
  if (rep.algorithm_sessions > 0)
    rep.precision_algorithm =
        static_cast<double>(rep.algorithm_hits) / rep.algorithm_sessions;
  if (rep.scheduled_sessions > 0)
    rep.precision_scheduled =
        static_cast<double>(rep.scheduled_hits) / rep.scheduled_sessions;
  return rep;
}

namespace {

json scenario_to_json(const ScenarioResult& r) {
  json j;
  j["seed"] = r.seed;
  j["duration"] = r.duration;
  j["algorithm_triggers"] = r.algorithm_triggers;
  j["scheduled_triggers"] = r.scheduled_triggers;
  j["algorithm_sessions"] = r.algorithm_sessions;
  j["scheduled_sessions"] = r.scheduled_sessions;
  j["algorithm_hits"] = r.algorithm_hits;
  j["scheduled_hits"] = r.scheduled_hits;
  if (r.precision_algorithm) j["precision_algorithm"] = *r.precision_algorithm;
  if (r.precision_scheduled) j["precision_scheduled"] = *r.precision_scheduled;
  j["expected_slots"] = r.expected_slots;
  j["triggers_in_expected_slots"] = r.triggers_in_expected_slots;
  j["coverage"] = r.coverage;
  j["true_speech_seconds"] = r.true_speech_seconds;
  j["detected_speech_seconds"] = r.detected_speech_seconds;
  return j;
}

const json& require(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end())
    throw ParseError(std::string("missing field \"") + field + "\"");
  return *it;
}

ScenarioResult scenario_from_json(const json& j) {
  ScenarioResult r;
  r.seed = require(j, "seed").get<uint64_t>();
  r.duration = require(j, "duration").get<double>();
  r.algorithm_triggers = require(j, "algorithm_triggers").get<int>();
  r.scheduled_triggers = require(j, "scheduled_triggers").get<int>();
  r.algorithm_sessions = require(j, "algorithm_sessions").get<int>();
  r.scheduled_sessions = require(j, "scheduled_sessions").get<int>();
  r.algorithm_hits = require(j, "algorithm_hits").get<int>();
  r.scheduled_hits = require(j, "scheduled_hits").get<int>();
  if (j.contains("precision_algorithm"))
    r.precision_algorithm = j["precision_algorithm"].get<double>();
  if (j.contains("precision_scheduled"))
    r.precision_scheduled = j["precision_scheduled"].get<double>();
  r.expected_slots = require(j, "expected_slots").get<int>();
  r.triggers_in_expected_slots =
      require(j, "triggers_in_expected_slots").get<int>();
  r.coverage = require(j, "coverage").get<double>();
  r.true_speech_seconds = require(j, "true_speech_seconds").get<double>();
  r.detected_speech_seconds =
      require(j, "detected_speech_seconds").get<double>();
  return r;
}

}  // namespace

std::string battery_to_json(const BatteryReport& rep) {
  json j;
  j["base_seed"] = rep.base_seed;
  j["num_scenarios"] = rep.num_scenarios;
  json agg;
  agg["algorithm_sessions"] = rep.algorithm_sessions;
  agg["scheduled_sessions"] = rep.scheduled_sessions;
  agg["algorithm_hits"] = rep.algorithm_hits;
  agg["scheduled_hits"] = rep.scheduled_hits;
  if (rep.precision_algorithm)
    agg["precision_algorithm"] = *rep.precision_algorithm;
  if (rep.precision_scheduled)
    agg["precision_scheduled"] = *rep.precision_scheduled;
  agg["mean_coverage"] = rep.mean_coverage;
  j["aggregate"] = agg;
  json rows = json::array();
  for (const auto& r : rep.scenarios) rows.push_back(scenario_to_json(r));
  j["scenarios"] = rows;
  return j.dump(2) + "\n";
}

BatteryReport battery_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("battery report: ") + e.what());
  }
  try {
    BatteryReport rep;
    rep.base_seed = require(j, "base_seed").get<uint64_t>();
    rep.num_scenarios = require(j, "num_scenarios").get<int>();
    const json& agg = require(j, "aggregate");
    rep.algorithm_sessions = require(agg, "algorithm_sessions").get<int>();
    rep.scheduled_sessions = require(agg, "scheduled_sessions").get<int>();
    rep.algorithm_hits = require(agg, "algorithm_hits").get<int>();
    rep.scheduled_hits = require(agg, "scheduled_hits").get<int>();
    if (agg.contains("precision_algorithm"))
      rep.precision_algorithm = agg["precision_algorithm"].get<double>();
    if (agg.contains("precision_scheduled"))
      rep.precision_scheduled = agg["precision_scheduled"].get<double>();
    rep.mean_coverage = require(agg, "mean_coverage").get<double>();
    for (const auto& row : require(j, "scenarios"))
      rep.scenarios.push_back(scenario_from_json(row));
    return rep;
  } catch (const json::exception& e) {
    throw ParseError(std::string("battery report: ") + e.what());
  }
}

std::string battery_render_text(const BatteryReport& rep) {
  std::string out;
  out += "battery: " + std::to_string(rep.num_scenarios) +
         " scenario(s), base seed " + std::to_string(rep.base_seed) + "\n";
  out += "algorithm sessions: " + std::to_string(rep.algorithm_sessions) +
         " (hits " + std::to_string(rep.algorithm_hits) + ", precision " +
         (rep.precision_algorithm ? fmt3(*rep.precision_algorithm) : "n/a") +
         ")\n";
  out += "scheduled sessions: " + std::to_string(rep.scheduled_sessions) +
         " (hits " + std::to_string(rep.scheduled_hits) + ", precision " +
         (rep.precision_scheduled ? fmt3(*rep.precision_scheduled) : "n/a") +
         ")\n";
  out += "mean coverage: " + fmt3(rep.mean_coverage) + "\n";
  return out;
}

std::string battery_render_csv(const BatteryReport& rep) {
  std::string out =
      "seed,duration,algorithm_triggers,scheduled_triggers,"
      "algorithm_sessions,scheduled_sessions,algorithm_hits,scheduled_hits,"
      "precision_algorithm,precision_scheduled,expected_slots,"
      "triggers_in_expected_slots,coverage,true_speech_seconds,"
      "detected_speech_seconds\n";
  for (const auto& r : rep.scenarios) {
    out += std::to_string(r.seed) + ',' + io::format_double(r.duration) + ',';
    out += std::to_string(r.algorithm_triggers) + ',';
    out += std::to_string(r.scheduled_triggers) + ',';
    out += std::to_string(r.algorithm_sessions) + ',';
    out += std::to_string(r.scheduled_sessions) + ',';
    out += std::to_string(r.algorithm_hits) + ',';
    out += std::to_string(r.scheduled_hits) + ',';
    out += (r.precision_algorithm ? io::format_double(*r.precision_algorithm)
                                  : std::string()) +
           ',';
    out += (r.precision_scheduled ? io::format_double(*r.precision_scheduled)
                                  : std::string()) +
           ',';
    out += std::to_string(r.expected_slots) + ',';
    out += std::to_string(r.triggers_in_expected_slots) + ',';
    out += io::format_double(r.coverage) + ',';
    out += io::format_double(r.true_speech_seconds) + ',';
    out += io::format_double(r.detected_speech_seconds) + '\n';
  }
  return out;
}

void dump_scenario(const std::string& dir, const Scenario& sc,
                   const ScenarioResult& res) {
  std::filesystem::create_directories(dir);
  auto path = [&](const char* name) { return dir + "/" + name; };

  std::string rssi;
  for (const auto& s : sc.rssi) {
    json j;
    j["t"] = s.t;
    j["rssi"] = s.dbm;
    rssi += j.dump() + "\n";
  }
  io::write_file(path("rssi.jsonl"), rssi);

  std::string hr;
  for (size_t i = 0; i < sc.hr.t.size(); ++i) {
    json j;
    j["t"] = sc.hr.t[i];
    j["bpm"] = sc.hr.bpm[i];
    hr += j.dump() + "\n";
  }
  io::write_file(path("hr.jsonl"), hr);

  std::string imu;
  for (const auto& s : sc.imu.samples) {
    json j;
    j["t"] = s.t;
    j["ax"] = s.ax;
    j["ay"] = s.ay;
    j["az"] = s.az;
    j["gx"] = s.gx;
    j["gy"] = s.gy;
    j["gz"] = s.gz;
    imu += j.dump() + "\n";
  }
  io::write_file(path("imu.jsonl"), imu);

  std::string truth;
  for (const auto& s : sc.speech) {
    json j;
    j["start"] = s.start;
    j["end"] = s.end;
    j["f0"] = s.f0;
    j["snr_db"] = s.snr_db;
    truth += j.dump() + "\n";
  }
  io::write_file(path("speech.jsonl"), truth);

  std::string segs;
  for (const auto& s : res.detected_segments) {
    json j;
    j["start"] = s.start;
    j["end"] = s.end;
    segs += j.dump() + "\n";
  }
  io::write_file(path("detected_segments.jsonl"), segs);

  io::write_file(path("actions.jsonl"), trig::actions_to_jsonl(res.actions));
}

io::LabeledTable make_vad_corpus(const cfg::ToolkitConfig& cfg, double duration,
                                 uint64_t seed) {
  if (duration < 4.0)
    throw ConfigError(
        "corpus duration must cover at least one voiced and one noise region");
  Rng rng(sub_seed(seed, 6));
  // Regions of 2 s alternate voiced / noise-only starting voiced.
  std::vector<SpeechSpec> specs;
  for (double t0 = 0.0; t0 < duration - 1e-9; t0 += 4.0) {
    SpeechSpec s;
    s.start = t0;
    s.end = std::min(t0 + 2.0, duration);
    s.f0 = rng.uniform(120.0, 280.0);
    s.snr_db = rng.uniform(cfg.sim.snr_min_db, cfg.sim.snr_max_db);
    specs.push_back(s);
  }
  AudioSynth synth(cfg.sim, cfg.sample_rate, seed, specs);
  const auto seconds = static_cast<int64_t>(std::ceil(duration - 1e-9));
  dsp::AudioBuffer audio;
  audio.sample_rate = cfg.sample_rate;
  audio.samples = synth.render_range(0, seconds);
  auto want = static_cast<size_t>(std::llround(duration * cfg.sample_rate));
  if (audio.samples.size() > want) audio.samples.resize(want);
  auto frames = dsp::batch_features(audio, cfg.mfcc);

  io::LabeledTable t;
  for (int k = 0; k < cfg.mfcc.num_coefficients; ++k)
    t.feature_names.push_back("c" + std::to_string(k));
  t.feature_names.push_back("log_energy");
  const double sr = cfg.sample_rate;
  for (const auto& fv : frames) {
    double first = fv.timestamp;
    double last = (static_cast<double>(fv.frame_index) * cfg.mfcc.hop_length +
                   cfg.mfcc.frame_length - 1) /
                  sr;
    auto r0 = static_cast<int64_t>(std::floor(first / 2.0 + 1e-12));
    auto r1 = static_cast<int64_t>(std::floor(last / 2.0 + 1e-12));
    if (r0 != r1) continue;  // straddles a region boundary: no clean label
    std::vector<double> row = fv.values;
    row.push_back(fv.log_energy);
    t.x.push_back(std::move(row));
    t.y.push_back(r0 % 2 == 0 ? 1 : -1);
  }
  return t;
}

VadEvalResult evaluate_vad(const vad::LinearSvmModel& model,
                           const io::LabeledTable& train,
                           const io::LabeledTable& eval) {
  auto find_col = [](const io::LabeledTable& t) {
    for (size_t i = 0; i < t.feature_names.size(); ++i)
      if (t.feature_names[i] == "log_energy") return static_cast<ptrdiff_t>(i);
    return static_cast<ptrdiff_t>(-1);
  };
  ptrdiff_t etr = find_col(train);
  ptrdiff_t eev = find_col(eval);
  if (etr < 0 || eev < 0)
    throw ConfigError("energy baseline needs a log_energy column");
  if (train.x.empty() || eval.x.empty())
    throw ConfigError("evaluation needs non-empty train and eval tables");

  std::vector<double> train_e;
  train_e.reserve(train.x.size());
  for (const auto& row : train.x)
    train_e.push_back(row[static_cast<size_t>(etr)]);
  auto base = vad::best_energy_baseline(train_e, train.y);

  const size_t dim = model.weights.size();
  std::vector<int> pred, base_pred;
  pred.reserve(eval.x.size());
  base_pred.reserve(eval.x.size());
  for (const auto& row : eval.x) {
    std::vector<double> f;
    if (row.size() == dim) {
      f = row;
    } else if (row.size() == dim + 1) {
      // Model trained without the energy column.
      f.reserve(dim);
      for (size_t i = 0; i < row.size(); ++i)
        if (static_cast<ptrdiff_t>(i) != eev) f.push_back(row[i]);
    } else {
      throw ModelError("model dimension " + std::to_string(dim) +
                       " does not match table with " +
                       std::to_string(row.size()) + " features");
    }
    pred.push_back(vad::classify(vad::decision_score(model, f)));
    base_pred.push_back(row[static_cast<size_t>(eev)] > base.threshold ? 1
                                                                       : -1);
  }

  VadEvalResult r;
  r.model_balanced_accuracy = balanced_accuracy(pred, eval.y);
  r.baseline_balanced_accuracy = balanced_accuracy(base_pred, eval.y);
  r.baseline_threshold = base.threshold;
  r.num_eval_rows = eval.x.size();
  return r;
}

EmotionDataset make_emotion_sessions(const cfg::ToolkitConfig& cfg,
                                     int num_sessions, uint64_t seed) {
  if (num_sessions <= 0)
    throw ConfigError("need at least one emotion session");
  validate_sim(cfg.sim);
  EmotionDataset out;
  const double dur = cfg.sim.emotion_duration;
  // Speech occupies two windows at fixed fractions of the session.
  const double w0s = dur / 12.0, w0e = dur * 5.0 / 12.0;
  const double w1s = dur * 7.0 / 12.0, w1e = dur * 11.0 / 12.0;

  for (int i = 0; i < num_sessions; ++i) {
    int combo = i % 4;
    int valence = combo < 2 ? 1 : -1;
    int arousal = combo % 2 == 0 ? 1 : -1;
    uint64_t sseed = sub_seed(seed, 100 + static_cast<uint64_t>(i));
    Rng rng(sseed);

    // Valence moves the voiced fundamental; arousal moves heart rate and
    // motion energy.
    double f0 = valence > 0
                    ? std::clamp(210.0 + rng.gaussian() * 15.0, 185.0, 280.0)
                    : std::clamp(145.0 + rng.gaussian() * 15.0, 100.0, 180.0);
    std::vector<SpeechSpec> specs = {
        {w0s, w0e, f0, rng.uniform(5.0, 10.0)},
        {w1s, w1e, f0, rng.uniform(5.0, 10.0)},
    };
    AudioSynth synth(cfg.sim, cfg.sample_rate, sseed, specs);
    dsp::AudioBuffer audio;
    audio.sample_rate = cfg.sample_rate;
    audio.samples =
        synth.render_range(0, static_cast<int64_t>(std::ceil(dur - 1e-9)));

    feat::SessionInputs in;
    feat::HrSeries hr;
    double base = cfg.sim.hr_base + (arousal > 0 ? 12.0 : 0.0);
    for (int tsec = 0; tsec < static_cast<int>(dur); ++tsec) {
      hr.t.push_back(tsec);
      hr.bpm.push_back(base + rng.gaussian() * cfg.sim.hr_sd);
    }
    in.hr = std::move(hr);

    feat::ImuSeries imu;
    double amp = arousal > 0 ? 0.12 : 0.05;
    double gamp = arousal > 0 ? 0.8 : 0.3;
    const auto n_imu = static_cast<int64_t>(std::llround(dur * cfg.sim.imu_rate));
    for (int64_t k = 0; k < n_imu; ++k) {
      double ts = static_cast<double>(k) / cfg.sim.imu_rate;
      if (ts >= dur) break;
      double ph = 2.0 * pi * 1.3 * ts;
      feat::ImuSample smp;
      smp.t = ts;
      smp.ax = amp * std::sin(ph) + rng.gaussian() * 0.02;
      smp.ay = amp * std::sin(ph + 2.1) + rng.gaussian() * 0.02;
      smp.az = 1.0 + amp * std::sin(ph + 4.2) + rng.gaussian() * 0.02;
      smp.gx = gamp * std::sin(ph + 0.7) + rng.gaussian() * 0.05;
      smp.gy = gamp * std::sin(ph + 2.8) + rng.gaussian() * 0.05;
      smp.gz = gamp * std::sin(ph + 4.9) + rng.gaussian() * 0.05;
      imu.samples.push_back(smp);
    }
    in.imu = std::move(imu);

    in.mfcc_frames = dsp::batch_features(audio, cfg.mfcc);
    in.segments = {{w0s, w0e}, {w1s, w1e}};

    std::string id = "s" + std::to_string(i);
    out.features.push_back(
        feat::extract_features(id, in, cfg.mfcc.num_coefficients));
    out.labels.push_back({id, valence, arousal});
  }
  return out;
}

io::LabeledTable make_xor_dataset(int n, uint64_t seed) {
  if (n <= 0) throw ConfigError("dataset size must be positive");
  Rng rng(sub_seed(seed, 7));
  io::LabeledTable t;
  t.feature_names = {"x0", "x1"};
  for (int i = 0; i < n; ++i) {
    // Cycle corners so classes stay balanced; imbalance hands a linear
    // separator free accuracy and defeats the point of the fixture.
    int q = i % 4;
    double cx = (q & 1) ? 1.0 : -1.0;
    double cy = (q & 2) ? 1.0 : -1.0;
    t.x.push_back({cx + rng.gaussian() * 0.15, cy + rng.gaussian() * 0.15});
    t.y.push_back(cx * cy > 0.0 ? -1 : 1);
  }
  return t;
}

}  // namespace ds::sim
