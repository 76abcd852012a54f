#include "vad/vad.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace ds::vad {

void validate(const HysteresisConfig& cfg) {
  if (cfg.enter_frames < 1 || cfg.exit_frames < 1)
    throw ConfigError("enter_frames and exit_frames must be >= 1");
  if (cfg.min_segment < 0) throw ConfigError("min_segment must be >= 0");
}

std::vector<SpeechSegment> smooth(const std::vector<VadDecision>& decisions,
                                  const HysteresisConfig& cfg,
                                  double hop_seconds) {
  validate(cfg);
  if (hop_seconds <= 0) throw ConfigError("hop_seconds must be positive");
  StreamingSmoother smoother(cfg, hop_seconds);
  for (const auto& d : decisions) smoother.push(d);
  return smoother.finish();
}

StreamingSmoother::StreamingSmoother(const HysteresisConfig& cfg,
                                     double hop_seconds)
    : cfg_(cfg), hop_(hop_seconds) {
  validate(cfg);
  if (hop_seconds <= 0) throw ConfigError("hop_seconds must be positive");
}

std::optional<StreamingSmoother::Edge> StreamingSmoother::push(
    const VadDecision& d) {
  if (finished_) throw StreamError("push after finish");
  if (d.frame_index <= last_frame_)
    throw StreamError("decisions must arrive in increasing frame order");
  last_frame_ = d.frame_index;

  if (!in_speech_) {
    if (d.label == 1) {
      ++consec_speech_;
      if (consec_speech_ >= cfg_.enter_frames) {
        in_speech_ = true;
        segment_start_frame_ = d.frame_index - cfg_.enter_frames + 1;
        consec_speech_ = 0;
        consec_nonspeech_ = 0;
        return Edge{static_cast<double>(d.frame_index) * hop_, true};
      }
    } else {
      consec_speech_ = 0;
    }
  } else {
    if (d.label != 1) {
      ++consec_nonspeech_;
      if (consec_nonspeech_ >= cfg_.exit_frames) {
        in_speech_ = false;
        int64_t end_frame = d.frame_index - cfg_.exit_frames + 1;
        segments_.push_back(
            {static_cast<double>(segment_start_frame_) * hop_,
             static_cast<double>(end_frame) * hop_});
        consec_speech_ = 0;
        consec_nonspeech_ = 0;
        return Edge{static_cast<double>(d.frame_index) * hop_, false};
      }
    } else {
      consec_nonspeech_ = 0;
    }
  }
  return std::nullopt;
}

std::vector<SpeechSegment> StreamingSmoother::finish() {
  if (!finished_) {
    finished_ = true;
    if (in_speech_) {
      in_speech_ = false;
      segments_.push_back({static_cast<double>(segment_start_frame_) * hop_,
                           static_cast<double>(last_frame_ + 1) * hop_});
    }
    std::vector<SpeechSegment> kept;
    kept.reserve(segments_.size());
    for (const auto& s : segments_)
      if (s.end - s.start >= cfg_.min_segment - 1e-9) kept.push_back(s);
    segments_ = std::move(kept);
  }
  return segments_;
}

double frame_log_energy(const double* x, size_t n, double floor) {
  double energy = 0.0;
  for (size_t i = 0; i < n; ++i) energy += x[i] * x[i];
  return std::log(std::max(energy, floor));
}

std::vector<int> energy_labels(const std::vector<double>& log_energies,
                               double threshold) {
  std::vector<int> labels(log_energies.size());
  for (size_t i = 0; i < log_energies.size(); ++i)
    labels[i] = log_energies[i] > threshold ? 1 : -1;
  return labels;
}

EnergyBaselineResult best_energy_baseline(
    const std::vector<double>& log_energies, const std::vector<int>& labels) {
  if (log_energies.empty() || log_energies.size() != labels.size())
    throw ConfigError("energies and labels must be non-empty and equal length");
  size_t pos_total = 0, neg_total = 0;
  for (int y : labels) {
    if (y == 1)
      ++pos_total;
    else
      ++neg_total;
  }
  if (pos_total == 0 || neg_total == 0)
    throw ConfigError("baseline sweep needs both classes");

  std::vector<size_t> order(log_energies.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return log_energies[a] < log_energies[b];
  });

  // Threshold below every value: everything labeled speech.
  size_t tp = pos_total, tn = 0;
  auto bal = [&] {
    return 0.5 * (static_cast<double>(tp) / static_cast<double>(pos_total) +
                  static_cast<double>(tn) / static_cast<double>(neg_total));
  };
  EnergyBaselineResult best{log_energies[order[0]] - 1.0, bal()};

  size_t i = 0;
  while (i < order.size()) {
    double v = log_energies[order[i]];
    // Raise the threshold to v: all samples with energy <= v flip to
    // non-speech.
    while (i < order.size() && log_energies[order[i]] == v) {
      if (labels[order[i]] == 1)
        --tp;
      else
        ++tn;
      ++i;
    }
    double candidate = bal();
    if (candidate > best.balanced_accuracy) {
      double next = i < order.size() ? log_energies[order[i]] : v + 2.0;
      best = {0.5 * (v + next), candidate};
    }
  }
  return best;
}

std::vector<double> model_features(const dsp::FeatureVector& fv, size_t dim) {
  if (dim == fv.values.size()) return fv.values;
  if (dim == fv.values.size() + 1) {
    std::vector<double> x = fv.values;
    x.push_back(fv.log_energy);
    return x;
  }
  throw ModelError("model dimension " + std::to_string(dim) +
                   " does not match feature dimension " +
                   std::to_string(fv.values.size()) + " (or +1 with energy)");
}

}  // namespace ds::vad
