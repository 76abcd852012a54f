#include "proximity/proximity.hpp"

#include "core/errors.hpp"

namespace ds::prox {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::near:
      return "near";
    case Phase::far:
      return "far";
    default:
      return "unknown";
  }
}

void validate(const ProximityConfig& cfg) {
  if (cfg.ewma_alpha <= 0.0 || cfg.ewma_alpha > 1.0)
    throw ConfigError("ewma_alpha must be in (0, 1]");
  if (cfg.enter_dwell < 1 || cfg.exit_dwell < 1)
    throw ConfigError("dwell counts must be >= 1");
  if (cfg.stale_timeout <= 0.0)
    throw ConfigError("stale_timeout must be positive");
}

ProximityTracker::ProximityTracker(const ProximityConfig& cfg) : cfg_(cfg) {
  validate(cfg);
}

std::optional<Transition> ProximityTracker::apply_staleness(double t) {
  if (!last_update_ || t - *last_update_ <= cfg_.stale_timeout)
    return std::nullopt;
  // Resets smoothing and dwell state but not the clock: timestamps must
  // stay non-decreasing across a staleness gap too.
  double stale_at = *last_update_ + cfg_.stale_timeout;
  smoothed_.reset();
  streak_target_ = Phase::unknown;
  streak_count_ = 0;
  if (phase_ == Phase::unknown) return std::nullopt;
  phase_ = Phase::unknown;
  return Transition{stale_at, Phase::unknown};
}

std::vector<Transition> ProximityTracker::update(double t, double rssi) {
  if (last_update_ && t < *last_update_)
    throw StreamError("RSSI timestamps must be non-decreasing");
  std::vector<Transition> out;
  if (auto stale = apply_staleness(t)) out.push_back(*stale);

  smoothed_ = smoothed_ ? cfg_.ewma_alpha * rssi +
                              (1.0 - cfg_.ewma_alpha) * *smoothed_
                        : rssi;
  last_update_ = t;

  Phase candidate =
      *smoothed_ >= cfg_.threshold_dbm ? Phase::near : Phase::far;
  if (candidate == phase_) {
    streak_target_ = Phase::unknown;
    streak_count_ = 0;
    return out;
  }
  if (streak_target_ == candidate) {
    ++streak_count_;
  } else {
    streak_target_ = candidate;
    streak_count_ = 1;
  }
  int required = candidate == Phase::near ? cfg_.enter_dwell : cfg_.exit_dwell;
  if (streak_count_ >= required) {
    phase_ = candidate;
    streak_target_ = Phase::unknown;
    streak_count_ = 0;
    out.push_back(Transition{t, candidate});
  }
  return out;
}

std::optional<Transition> ProximityTracker::poll(double t) {
  if (last_update_ && t < *last_update_)
    throw StreamError("poll time precedes last sample");
  return apply_staleness(t);
}

}  // namespace ds::prox
