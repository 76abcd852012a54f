#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/config.hpp"
#include "core/io.hpp"
#include "features/emotion.hpp"
#include "features/features.hpp"
#include "trigger/trigger.hpp"
#include "vad/svm.hpp"
#include "vad/vad.hpp"

namespace ds::sim {

// Ground-truth conversation window with the voiced-signal parameters used
// to synthesize it.
struct SpeechSpec {
  double start = 0.0;
  double end = 0.0;
  double f0 = 200.0;    // fundamental, Hz
  double snr_db = 5.0;  // voiced power over the nominal noise floor
};

struct RssiSample {
  double t = 0.0;
  double dbm = 0.0;
};

// Deterministic audio source: noise plus a three-harmonic voiced tone with
// a slow amplitude flutter inside each speech window. Sample values depend
// only on (seed, second index, offset), never on render order, so any
// subset of seconds can be produced independently and bit-identically.
class AudioSynth {
 public:
  AudioSynth(const cfg::SimParams& params, int sample_rate, uint64_t seed,
             std::vector<SpeechSpec> speech);

  int sample_rate() const { return sample_rate_; }
  // Samples covering [s, s+1) seconds, s >= 0.
  std::vector<double> render_second(int64_t s) const;
  // Seconds [s0, s1) concatenated.
  std::vector<double> render_range(int64_t s0, int64_t s1) const;

 private:
  cfg::SimParams params_;
  int sample_rate_;
  uint64_t noise_seed_ = 0;
  uint64_t gain_seed_ = 0;
  std::vector<SpeechSpec> speech_;
};

struct Scenario {
  uint64_t seed = 0;
  cfg::SimParams params;
  std::vector<SpeechSpec> speech;  // ground truth, non-overlapping, ordered
  std::vector<RssiSample> rssi;    // 1 sample per 1/rssi_rate seconds
  feat::HrSeries hr;
  feat::ImuSeries imu;
};

// Conversation windows are placed to cover exactly density * duration
// seconds (lengths uniform in [segment_min, segment_max], last one trimmed),
// separated by randomly weighted gaps. RSSI sits near near_mean_dbm inside
// conversations and far_mean_dbm outside.
Scenario generate_scenario(const cfg::SimParams& params, uint64_t seed);

// Seconds of [t0, t1) overlapped by ground-truth speech windows.
double speech_overlap(const std::vector<SpeechSpec>& speech, double t0,
                      double t1);

// A completed recording "contains conversation" when it overlaps ground
// truth by at least this many seconds.
constexpr double contains_overlap_seconds = 5.0;

struct ScenarioResult {
  uint64_t seed = 0;
  double duration = 0.0;
  int algorithm_triggers = 0;
  int scheduled_triggers = 0;
  int algorithm_sessions = 0;  // completed recordings by kind
  int scheduled_sessions = 0;
  int algorithm_hits = 0;  // completed recordings containing conversation
  int scheduled_hits = 0;
  std::optional<double> precision_algorithm;  // absent with no sessions
  std::optional<double> precision_scheduled;
  int expected_slots = 0;
  int triggers_in_expected_slots = 0;
  double coverage = 1.0;
  double true_speech_seconds = 0.0;
  double detected_speech_seconds = 0.0;
  // Not serialized into battery reports; kept for trace dumps and tests.
  std::vector<vad::SpeechSegment> detected_segments;
  std::vector<trig::TriggerRecord> triggers;
  std::vector<trig::SessionRecord> sessions;
  std::vector<trig::Action> actions;
};

// Replays a scenario second by second through the full pipeline: RSSI ->
// proximity phases, audio -> features -> classifier -> smoothed speech
// edges, everything feeding the trigger machine in timestamp order. uptime
// intervals (closed, in seconds) model device on-periods; the machine is
// suspended across gaps and only whole seconds inside an interval are
// processed. An empty list means the device is up for the whole scenario.
ScenarioResult run_simulation(
    const Scenario& scenario, const cfg::ToolkitConfig& cfg,
    const vad::LinearSvmModel& model,
    std::vector<std::pair<double, double>> uptime = {});

struct BatteryReport {
  uint64_t base_seed = 0;
  int num_scenarios = 0;
  int algorithm_sessions = 0;
  int scheduled_sessions = 0;
  int algorithm_hits = 0;
  int scheduled_hits = 0;
  std::optional<double> precision_algorithm;  // pooled hits / sessions
  std::optional<double> precision_scheduled;
  double mean_coverage = 1.0;
  std::vector<ScenarioResult> scenarios;
};

// Scenario i uses seed base_seed + i with full uptime.
BatteryReport run_battery(const cfg::ToolkitConfig& cfg,
                          const vad::LinearSvmModel& model, int num_scenarios,
                          uint64_t base_seed);

// Battery JSON keeps per-scenario scalars only (traces are dumped
// separately); keys are sorted and doubles round-trip, so equal reports
// serialize byte-identically.
std::string battery_to_json(const BatteryReport& report);
BatteryReport battery_from_json(const std::string& text);
std::string battery_render_text(const BatteryReport& report);
std::string battery_render_csv(const BatteryReport& report);

// Writes scenario traces and replay outputs as JSONL files into dir:
// rssi, hr, imu, speech ground truth, detected segments, trigger actions.
// Raw audio is not written; it is regenerable from the seed.
void dump_scenario(const std::string& dir, const Scenario& scenario,
                   const ScenarioResult& result);

// Labeled frame corpus for classifier training: audio alternates 2 s voiced
// and 2 s noise-only regions; frames fully inside a region are labeled
// (+1 voiced, -1 noise), frames straddling a boundary are skipped.
// Columns: c0..cK, log_energy, label.
io::LabeledTable make_vad_corpus(const cfg::ToolkitConfig& cfg,
                                 double duration, uint64_t seed);

struct VadEvalResult {
  double model_balanced_accuracy = 0.0;
  double baseline_balanced_accuracy = 0.0;
  double baseline_threshold = 0.0;
  size_t num_eval_rows = 0;
};

// Scores the model on eval rows and compares against the best energy
// threshold fit on the train rows (both tables need a log_energy column).
// The model may use all feature columns or all but log_energy.
VadEvalResult evaluate_vad(const vad::LinearSvmModel& model,
                           const io::LabeledTable& train,
                           const io::LabeledTable& eval);

struct EmotionDataset {
  std::vector<feat::FeatureSet> features;
  std::vector<feat::SessionLabels> labels;
};

// Short labeled sessions cycling through the four valence/arousal
// combinations. Arousal moves heart rate and motion energy; valence moves
// the voiced fundamental. Acoustic features are gated by the ground-truth
// speech windows.
EmotionDataset make_emotion_sessions(const cfg::ToolkitConfig& cfg,
                                     int num_sessions, uint64_t seed);

// Two-cluster-per-class XOR layout: points near (+-1, +-1) with sd 0.15;
// label +1 when the signs differ. Linearly inseparable by construction.
io::LabeledTable make_xor_dataset(int n, uint64_t seed);

}  // namespace ds::sim
