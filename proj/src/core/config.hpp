#pragma once

#include <cstdint>
#include <string>

#include "dsp/mfcc.hpp"
#include "features/forest.hpp"
#include "proximity/proximity.hpp"
#include "trigger/trigger.hpp"
#include "vad/svm.hpp"
#include "vad/vad.hpp"

namespace ds::cfg {

struct SimParams {
  double duration = 3600.0;       // scenario length, seconds
  double density = 0.3;           // target interaction fraction
  double rssi_rate = 1.0;         // samples per second
  double near_mean_dbm = -55.0;
  double far_mean_dbm = -85.0;
  double rssi_noise_sd = 4.0;
  double noise_rms = 0.02;        // white-noise floor, full-scale units
  double noise_jitter_db = 6.0;   // per-second level jitter, +/- dB
  double snr_min_db = 0.0;        // per-segment speech SNR range
  double snr_max_db = 10.0;
  double segment_min = 60.0;      // interaction segment length range
  double segment_max = 240.0;
  double hr_base = 72.0;
  double hr_sd = 2.0;
  double imu_rate = 16.0;
  double emotion_duration = 60.0;  // emotion session length, seconds
};

struct ToolkitConfig {
  int sample_rate = 16000;
  dsp::MfccConfig mfcc;
  vad::SvmTrainOptions svm;  // lambda/epochs; seed is supplied per call
  vad::HysteresisConfig hysteresis;
  prox::ProximityConfig proximity;
  trig::TriggerConfig trigger;  // defaults to 4 contiguous 900 s slots
  forest::ForestTrainOptions forest;
  SimParams sim;
};

ToolkitConfig default_config();

// INI-style text: [section] headers, key=value lines, # or ; comments.
// Unknown sections or keys are ConfigErrors. Slot lists use
// "start:deadline,start:deadline,...".
ToolkitConfig parse_config(const std::string& text, const std::string& context);
ToolkitConfig load_config(const std::string& path);
void apply_override(ToolkitConfig& cfg, const std::string& section,
                    const std::string& key, const std::string& value);

// Canonical serialization (fixed section/key order); equal configs produce
// byte-identical text.
std::string serialize_config(const ToolkitConfig& cfg);

uint64_t fnv1a64(const std::string& data);

// 16-hex-digit FNV-1a of the canonical serialization.
std::string config_hash(const ToolkitConfig& cfg);

}  // namespace ds::cfg
