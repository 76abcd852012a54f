#include "trigger/trigger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"
#include "json.hpp"

namespace ds::trig {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;
}  // namespace

void validate(const TriggerConfig& cfg) {
  if (cfg.recording_duration <= 0)
    throw ConfigError("recording_duration must be positive");
  if (cfg.min_gap < cfg.recording_duration)
    throw ConfigError("min_gap must be >= recording_duration");
  if (cfg.speech_confirm <= 0)
    throw ConfigError("speech_confirm must be positive");
  if (cfg.confirm_window < cfg.speech_confirm)
    throw ConfigError("confirm_window must be >= speech_confirm");
  for (size_t i = 0; i < cfg.slots.size(); ++i) {
    const auto& s = cfg.slots[i];
    if (s.start < 0 || s.deadline <= s.start)
      throw ConfigError("slot " + std::to_string(i) +
                        " must satisfy 0 <= start < deadline");
    if (i > 0 && s.start < cfg.slots[i - 1].deadline)
      throw ConfigError("slots must be ordered and non-overlapping");
  }
  if (cfg.max_per_day != -1 && cfg.max_per_day < 1)
    throw ConfigError("max_per_day must be >= 1 (or -1 for slot count)");
}

int resolved_max_per_day(const TriggerConfig& cfg) {
  return cfg.max_per_day == -1 ? static_cast<int>(cfg.slots.size())
                               : cfg.max_per_day;
}

const char* trigger_kind_name(TriggerKind k) {
  return k == TriggerKind::algorithm ? "algorithm" : "scheduled";
}

TriggerStateMachine::TriggerStateMachine(const TriggerConfig& cfg)
    : cfg_(cfg), max_per_day_(resolved_max_per_day(cfg)) {
  validate(cfg);
  slot_state_.assign(cfg_.slots.size(), SlotState::open);
}

void TriggerStateMachine::require_running(double t) const {
  if (suspended_) throw StreamError("event while suspended");
  if (started_ && t < now_)
    throw StreamError("event timestamps must be non-decreasing");
}

void TriggerStateMachine::start_recording(double t, TriggerKind kind,
                                          int slot_id) {
  active_ = ActiveRecording{t, t + cfg_.recording_duration, kind, slot_id};
  slot_state_[static_cast<size_t>(slot_id)] = SlotState::triggered;
  last_start_ = t;
  ++start_count_;
  triggers_.push_back({kind, t, slot_id});
  actions_.push_back({Action::Type::start_recording, t, kind, slot_id, -1});
  actions_.push_back({Action::Type::trigger_logged, t, kind, slot_id, -1});
}

void TriggerStateMachine::stop_recording() {
  const auto rec = *active_;
  active_.reset();
  int session_id = static_cast<int>(sessions_.size());
  sessions_.push_back({rec.kind, rec.slot_id, rec.t_start, rec.t_end, true});
  actions_.push_back({Action::Type::stop_recording, rec.t_end, rec.kind,
                      rec.slot_id, session_id});
  actions_.push_back({Action::Type::emit_prompt, rec.t_end, rec.kind,
                      rec.slot_id, session_id});
  if (!pending_scheduled_.empty()) {
    int slot = pending_scheduled_.front();
    pending_scheduled_.pop_front();
    start_recording(rec.t_end, TriggerKind::scheduled, slot);
  }
}

void TriggerStateMachine::process_deadline(int slot_id) {
  auto idx = static_cast<size_t>(slot_id);
  if (slot_state_[idx] != SlotState::open) return;
  if (active_) {
    // The fallback still owns the slot; it starts once the recorder frees up.
    slot_state_[idx] = SlotState::pending;
    pending_scheduled_.push_back(slot_id);
  } else {
    start_recording(cfg_.slots[idx].deadline, TriggerKind::scheduled, slot_id);
  }
}

void TriggerStateMachine::advance_to(double t) {
  while (true) {
    double stop_t = active_ ? active_->t_end : kInf;
    double deadline_t = next_deadline_ < cfg_.slots.size()
                            ? cfg_.slots[next_deadline_].deadline
                            : kInf;
    double next = std::min(stop_t, deadline_t);
    if (next > t) break;
    if (stop_t <= deadline_t) {
      stop_recording();
    } else {
      process_deadline(static_cast<int>(next_deadline_++));
    }
  }
}

int TriggerStateMachine::slot_index_at(double t) const {
  for (size_t i = 0; i < cfg_.slots.size(); ++i)
    if (t >= cfg_.slots[i].start && t < cfg_.slots[i].deadline)
      return static_cast<int>(i);
  return -1;
}

double TriggerStateMachine::speech_in_window(double t) {
  double lo = t - cfg_.confirm_window;
  while (!speech_closed_.empty() && speech_closed_.front().second <= lo)
    speech_closed_.pop_front();
  double total = 0.0;
  for (const auto& [a, b] : speech_closed_)
    total += std::max(0.0, std::min(b, t) - std::max(a, lo));
  if (speech_open_since_)
    total += std::max(0.0, t - std::max(*speech_open_since_, lo));
  return total;
}

void TriggerStateMachine::maybe_algorithm_trigger(double t) {
  if (active_ || phase_ != prox::Phase::near) return;
  if (start_count_ >= max_per_day_) return;
  if (last_start_ && t - *last_start_ < cfg_.min_gap - kEps) return;
  int slot = slot_index_at(t);
  if (slot < 0 || slot_state_[static_cast<size_t>(slot)] != SlotState::open)
    return;
  if (speech_in_window(t) < cfg_.speech_confirm - kEps) return;
  start_recording(t, TriggerKind::algorithm, slot);
}

void TriggerStateMachine::on_proximity(double t, prox::Phase phase) {
  require_running(t);
  advance_to(t);
  now_ = t;
  started_ = true;
  phase_ = phase;
  maybe_algorithm_trigger(t);
}

void TriggerStateMachine::on_speech(double t, bool active) {
  require_running(t);
  advance_to(t);
  now_ = t;
  started_ = true;
  if (active) {
    if (!speech_open_since_) speech_open_since_ = t;
  } else if (speech_open_since_) {
    if (t > *speech_open_since_)
      speech_closed_.emplace_back(*speech_open_since_, t);
    speech_open_since_.reset();
  }
  maybe_algorithm_trigger(t);
}

void TriggerStateMachine::on_tick(double t) {
  require_running(t);
  advance_to(t);
  now_ = t;
  started_ = true;
  maybe_algorithm_trigger(t);
}

void TriggerStateMachine::suspend(double t) {
  require_running(t);
  advance_to(t);
  now_ = t;
  started_ = true;
  suspended_ = true;
  if (active_) {
    actions_.push_back({Action::Type::abort_recording, t, active_->kind,
                        active_->slot_id, -1});
    active_.reset();
  }
  if (speech_open_since_) {
    if (t > *speech_open_since_)
      speech_closed_.emplace_back(*speech_open_since_, t);
    speech_open_since_.reset();
  }
}

void TriggerStateMachine::resume(double t) {
  if (!suspended_) throw StreamError("resume without suspend");
  if (t < now_) throw StreamError("resume before suspend time");
  suspended_ = false;
  now_ = t;
  // Deadlines that passed while down never fire.
  while (next_deadline_ < cfg_.slots.size() &&
         cfg_.slots[next_deadline_].deadline < t) {
    auto idx = next_deadline_++;
    if (slot_state_[idx] == SlotState::open)
      slot_state_[idx] = SlotState::missed;
  }
  speech_closed_.clear();
  speech_open_since_.reset();
  phase_ = prox::Phase::unknown;
  // A fallback owed from before the gap starts now.
  if (!pending_scheduled_.empty() && !active_) {
    int slot = pending_scheduled_.front();
    pending_scheduled_.pop_front();
    start_recording(t, TriggerKind::scheduled, slot);
  }
}

std::vector<int> expected_slots(
    const TriggerConfig& cfg,
    const std::vector<std::pair<double, double>>& uptime) {
  validate(cfg);
  std::vector<std::pair<double, double>> merged = uptime;
  std::sort(merged.begin(), merged.end());
  std::vector<std::pair<double, double>> spans;
  for (const auto& iv : merged) {
    if (iv.second < iv.first)
      throw ConfigError("uptime interval end precedes start");
    if (!spans.empty() && iv.first <= spans.back().second)
      spans.back().second = std::max(spans.back().second, iv.second);
    else
      spans.push_back(iv);
  }
  std::vector<int> out;
  for (size_t i = 0; i < cfg.slots.size(); ++i)
    for (const auto& span : spans)
      if (span.first <= cfg.slots[i].start &&
          cfg.slots[i].deadline <= span.second) {
        out.push_back(static_cast<int>(i));
        break;
      }
  return out;
}

int expected_count(const TriggerConfig& cfg,
                   const std::vector<std::pair<double, double>>& uptime) {
  return static_cast<int>(expected_slots(cfg, uptime).size());
}

double coverage(int triggers_within_uptime, int expected) {
  if (expected < 0 || triggers_within_uptime < 0)
    throw ConfigError("coverage counts must be non-negative");
  if (expected == 0) return 1.0;
  return static_cast<double>(triggers_within_uptime) /
         static_cast<double>(expected);
}

std::vector<FsmEvent> parse_fsm_events(const std::string& jsonl,
                                       const std::string& context) {
  std::vector<FsmEvent> events;
  std::istringstream in(jsonl);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string where = context + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("t") || !j["t"].is_number() ||
        !j.contains("event") || !j["event"].is_string())
      throw ParseError(where + ": need object with \"t\" and \"event\"");
    FsmEvent ev;
    ev.t = j["t"].get<double>();
    std::string kind = j["event"].get<std::string>();
    if (kind == "proximity") {
      ev.kind = FsmEvent::Kind::proximity;
      if (!j.contains("phase") || !j["phase"].is_string())
        throw ParseError(where + ": proximity event needs \"phase\"");
      std::string phase = j["phase"].get<std::string>();
      if (phase == "near")
        ev.phase = prox::Phase::near;
      else if (phase == "far")
        ev.phase = prox::Phase::far;
      else if (phase == "unknown")
        ev.phase = prox::Phase::unknown;
      else
        throw ParseError(where + ": unknown phase \"" + phase + "\"");
    } else if (kind == "speech") {
      ev.kind = FsmEvent::Kind::speech;
      if (!j.contains("active") || !j["active"].is_boolean())
        throw ParseError(where + ": speech event needs boolean \"active\"");
      ev.active = j["active"].get<bool>();
    } else if (kind == "tick") {
      ev.kind = FsmEvent::Kind::tick;
    } else if (kind == "suspend") {
      ev.kind = FsmEvent::Kind::suspend;
    } else if (kind == "resume") {
      ev.kind = FsmEvent::Kind::resume;
    } else {
      throw ParseError(where + ": unknown event \"" + kind + "\"");
    }
    events.push_back(ev);
  }
  return events;
}

void apply_event(TriggerStateMachine& fsm, const FsmEvent& ev) {
  switch (ev.kind) {
    case FsmEvent::Kind::proximity:
      fsm.on_proximity(ev.t, ev.phase);
      break;
    case FsmEvent::Kind::speech:
      fsm.on_speech(ev.t, ev.active);
      break;
    case FsmEvent::Kind::tick:
      fsm.on_tick(ev.t);
      break;
    case FsmEvent::Kind::suspend:
      fsm.suspend(ev.t);
      break;
    case FsmEvent::Kind::resume:
      fsm.resume(ev.t);
      break;
  }
}

std::string actions_to_jsonl(const std::vector<Action>& actions) {
  std::string out;
  for (const auto& a : actions) {
    nlohmann::json j;
    j["t"] = a.t;
    switch (a.type) {
      case Action::Type::start_recording:
        j["action"] = "start_recording";
        break;
      case Action::Type::stop_recording:
        j["action"] = "stop_recording";
        break;
      case Action::Type::emit_prompt:
        j["action"] = "emit_prompt";
        break;
      case Action::Type::trigger_logged:
        j["action"] = "trigger_logged";
        break;
      case Action::Type::abort_recording:
        j["action"] = "abort_recording";
        break;
    }
    j["trigger"] = trigger_kind_name(a.trigger_kind);
    if (a.slot_id >= 0) j["slot"] = a.slot_id;
    if (a.session_id >= 0) j["session"] = a.session_id;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace ds::trig
