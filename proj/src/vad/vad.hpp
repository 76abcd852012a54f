#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dsp/mfcc.hpp"
#include "vad/svm.hpp"

namespace ds::vad {

struct VadDecision {
  int64_t frame_index = 0;
  double score = 0.0;
  int label = -1;  // +1 speech, -1 non-speech; label == +1 iff score > 0
};

struct HysteresisConfig {
  int enter_frames = 3;   // consecutive speech frames to open a segment
  int exit_frames = 5;    // consecutive non-speech frames to close it
  double min_segment = 0.3;  // seconds; shorter segments are discarded
};

void validate(const HysteresisConfig& cfg);

struct SpeechSegment {
  double start = 0.0;
  double end = 0.0;  // exclusive; end > start
};

// Hysteresis automaton over frame decisions. A segment starts at the first
// of enter_frames consecutive speech frames and ends at the first of
// exit_frames consecutive non-speech frames; a segment still open at stream
// end closes one hop after the last frame. Segments shorter than
// min_segment are dropped. Decisions must be in frame order.
std::vector<SpeechSegment> smooth(const std::vector<VadDecision>& decisions,
                                  const HysteresisConfig& cfg,
                                  double hop_seconds);

// Incremental version of smooth() with identical final segments. Also
// surfaces raw enter/exit edges stamped at the confirming frame's time,
// suitable as monotone event input for downstream consumers (min_segment
// cannot apply to edges since an open segment's length is unknown).
class StreamingSmoother {
 public:
  struct Edge {
    double t = 0.0;
    bool active = false;
  };

  StreamingSmoother(const HysteresisConfig& cfg, double hop_seconds);

  std::optional<Edge> push(const VadDecision& d);
  // Closes any open segment and returns the filtered segment list.
  std::vector<SpeechSegment> finish();

 private:
  HysteresisConfig cfg_;
  double hop_;
  bool in_speech_ = false;
  int consec_speech_ = 0;
  int consec_nonspeech_ = 0;
  int64_t segment_start_frame_ = 0;
  int64_t last_frame_ = -1;
  bool finished_ = false;
  std::vector<SpeechSegment> segments_;
};

// Log-energy of a raw (unwindowed) frame: ln(max(sum x^2, floor)).
double frame_log_energy(const double* x, size_t n, double floor);

// speech iff log-energy > threshold.
std::vector<int> energy_labels(const std::vector<double>& log_energies,
                               double threshold);

struct EnergyBaselineResult {
  double threshold = 0.0;
  double balanced_accuracy = 0.0;
};

// Exhaustive single-threshold sweep (midpoints of sorted unique energies
// plus both extremes); returns the best achievable balanced accuracy.
EnergyBaselineResult best_energy_baseline(
    const std::vector<double>& log_energies, const std::vector<int>& labels);

// Feature vector for a model of dimension dim: the MFCC values, or the MFCC
// values with log_energy appended when dim == values.size() + 1.
std::vector<double> model_features(const dsp::FeatureVector& fv, size_t dim);

}  // namespace ds::vad
