#pragma once

#include <optional>
#include <vector>

namespace ds::prox {

enum class Phase { unknown, near, far };

const char* phase_name(Phase p);

struct ProximityConfig {
  double threshold_dbm = -70.0;
  double ewma_alpha = 0.3;   // in (0, 1]
  int enter_dwell = 3;       // consecutive near candidates to commit near
  int exit_dwell = 5;        // consecutive far candidates to commit far
  double stale_timeout = 10.0;  // seconds without samples before unknown
};

void validate(const ProximityConfig& cfg);

struct Transition {
  double t = 0.0;
  Phase to = Phase::unknown;
};

// Debounced near/far detector over an RSSI stream. Smoothing is an EWMA in
// the dBm domain (first sample initializes it). The candidate phase is near
// iff smoothed >= threshold; a phase change commits only after the dwell
// count of consecutive agreeing candidates (enter_dwell toward near,
// exit_dwell toward far, either from unknown). A gap longer than
// stale_timeout forces unknown, stamped at last_update + stale_timeout, and
// resets smoothing and dwell state. Single writer per instance.
class ProximityTracker {
 public:
  explicit ProximityTracker(const ProximityConfig& cfg);

  // Feeds one sample; timestamps must be non-decreasing (else StreamError).
  // Returns up to two transitions: a staleness-induced unknown followed by
  // a commit from the new sample.
  std::vector<Transition> update(double t, double rssi);

  // Staleness check without a sample (e.g. on a clock tick).
  std::optional<Transition> poll(double t);

  Phase phase() const { return phase_; }
  std::optional<double> smoothed() const { return smoothed_; }

 private:
  std::optional<Transition> apply_staleness(double t);

  ProximityConfig cfg_;
  Phase phase_ = Phase::unknown;
  std::optional<double> smoothed_;
  std::optional<double> last_update_;
  Phase streak_target_ = Phase::unknown;
  int streak_count_ = 0;
};

}  // namespace ds::prox
