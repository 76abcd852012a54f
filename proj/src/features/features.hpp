#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsp/mfcc.hpp"
#include "vad/vad.hpp"

namespace ds::feat {

struct HrSeries {
  std::vector<double> t;    // increasing
  std::vector<double> bpm;  // raw; cleaning keeps bpm in (20, 250)
};

struct ImuSample {
  double t = 0.0;
  double ax = 0.0, ay = 0.0, az = 0.0;
  double gx = 0.0, gy = 0.0, gz = 0.0;
};

struct ImuSeries {
  std::vector<ImuSample> samples;  // timestamps increasing
};

// {hr_mean, hr_sd, hr_min, hr_max, hr_slope}; sd is the population sd and
// slope the least-squares linear fit over time. Samples outside (20, 250)
// bpm are dropped first; fewer than 2 surviving samples is a ConfigError.
std::vector<std::string> physio_feature_names();
std::vector<double> physio_features(const HrSeries& hr);

// Per-axis mean/sd for the 6 IMU axes, magnitude mean/sd for accel and
// gyro, and the zero-crossing rate of each mean-detrended magnitude
// (sign-change fraction over consecutive samples). Needs >= 2 samples.
std::vector<std::string> movement_feature_names();
std::vector<double> movement_features(const ImuSeries& imu);

// Linear-interpolation percentile of unsorted values, q in [0, 100].
double percentile(std::vector<double> values, double q);

// Per-coefficient {mean, sd, p10, p90} over frames whose start time lies in
// a speech segment, plus speech_ratio = speech frames / total frames.
// With no speech frames the functionals are absent and speech_ratio is 0.
std::vector<std::string> acoustic_feature_names(int num_coefficients);

struct AcousticResult {
  std::vector<double> values;  // functionals then speech_ratio
  bool functionals_present = false;
};

AcousticResult acoustic_features(const std::vector<dsp::FeatureVector>& frames,
                                 const std::vector<vad::SpeechSegment>& segments);

// Indices of the most positive, most negative, and final entries; ties
// resolve to the earliest index.
struct PeakEnd {
  size_t peak_pos = 0;
  size_t peak_neg = 0;
  size_t end = 0;
};

PeakEnd peak_end_select(const std::vector<double>& segment_scores);

// Named features with per-feature presence; absent modalities stay marked
// absent (serialized as NA), never silently zeroed.
struct FeatureSet {
  std::string session_id;
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<bool> present;

  std::optional<double> get(const std::string& name) const;
};

struct SessionInputs {
  std::optional<HrSeries> hr;
  std::optional<ImuSeries> imu;
  std::optional<std::vector<dsp::FeatureVector>> mfcc_frames;
  std::vector<vad::SpeechSegment> segments;  // speech gating for acoustics
};

// Fixed schema: physio, movement, acoustic(num_coefficients). A modality is
// absent when its input is missing or has too few valid samples.
FeatureSet extract_features(const std::string& session_id,
                            const SessionInputs& inputs,
                            int num_coefficients);

// CSV with header session_id,<feature names...>; absent values are "NA".
std::string feature_sets_to_csv(const std::vector<FeatureSet>& sets);
std::vector<FeatureSet> feature_sets_from_csv(const std::string& text,
                                              const std::string& context);

}  // namespace ds::feat
