#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "proximity/proximity.hpp"

namespace ds::trig {

struct SlotWindow {
  double start = 0.0;
  double deadline = 0.0;  // end of window; scheduled fallback fires here
};

struct TriggerConfig {
  double recording_duration = 300.0;
  double min_gap = 3600.0;  // between recording starts; >= recording_duration
  std::vector<SlotWindow> slots;  // non-overlapping, ordered
  int max_per_day = -1;           // -1 resolves to slots.size()
  double speech_confirm = 5.0;    // cumulative speech seconds required
  double confirm_window = 30.0;   // sliding window the speech is counted in
};

void validate(const TriggerConfig& cfg);
int resolved_max_per_day(const TriggerConfig& cfg);

enum class TriggerKind { algorithm, scheduled };
const char* trigger_kind_name(TriggerKind k);

struct Action {
  enum class Type {
    start_recording,
    stop_recording,
    emit_prompt,
    trigger_logged,
    abort_recording
  };
  Type type;
  double t = 0.0;
  TriggerKind trigger_kind = TriggerKind::algorithm;
  int slot_id = -1;
  int session_id = -1;
};

struct TriggerRecord {
  TriggerKind kind;
  double t_start = 0.0;
  int slot_id = -1;
};

struct SessionRecord {
  TriggerKind kind;
  int slot_id = -1;
  double t_start = 0.0;
  double t_end = 0.0;  // exactly t_start + recording_duration
  bool prompt_emitted = false;
};

// Deterministic event-driven trigger machine. Time advances only through
// event timestamps; internal deadlines (recording stop, slot deadlines) are
// processed in order, stamped at their exact times, before each event.
//
// Algorithm rule: near AND cumulative speech within confirm_window >=
// speech_confirm AND no active recording AND inside an untriggered slot AND
// min_gap from the last start AND under max_per_day. Scheduled rule: an
// untriggered slot fires at its deadline regardless of proximity/speech,
// bypassing min_gap and max_per_day; if a recording is active at the
// deadline the start is deferred to the moment it stops (sessions never
// overlap).
//
// suspend/resume model app downtime: suspend aborts any active recording
// (no session, no prompt); slot deadlines passed while suspended are missed
// and never fire.
class TriggerStateMachine {
 public:
  explicit TriggerStateMachine(const TriggerConfig& cfg);

  void on_proximity(double t, prox::Phase phase);
  void on_speech(double t, bool active);
  void on_tick(double t);
  void suspend(double t);
  void resume(double t);

  bool recording_active() const { return active_.has_value(); }
  bool suspended() const { return suspended_; }
  const std::vector<Action>& actions() const { return actions_; }
  const std::vector<TriggerRecord>& triggers() const { return triggers_; }
  const std::vector<SessionRecord>& sessions() const { return sessions_; }

 private:
  enum class SlotState { open, triggered, pending, missed };

  void require_running(double t) const;
  void advance_to(double t);
  void process_deadline(int slot_id);
  void start_recording(double t, TriggerKind kind, int slot_id);
  void stop_recording();
  void maybe_algorithm_trigger(double t);
  int slot_index_at(double t) const;
  double speech_in_window(double t);

  TriggerConfig cfg_;
  int max_per_day_;
  double now_ = 0.0;
  bool started_ = false;
  bool suspended_ = false;

  prox::Phase phase_ = prox::Phase::unknown;
  std::deque<std::pair<double, double>> speech_closed_;
  std::optional<double> speech_open_since_;

  struct ActiveRecording {
    double t_start;
    double t_end;
    TriggerKind kind;
    int slot_id;
  };
  std::optional<ActiveRecording> active_;
  std::deque<int> pending_scheduled_;
  std::vector<SlotState> slot_state_;
  size_t next_deadline_ = 0;
  std::optional<double> last_start_;
  int start_count_ = 0;

  std::vector<Action> actions_;
  std::vector<TriggerRecord> triggers_;
  std::vector<SessionRecord> sessions_;
};

// Slot indices whose closed window [start, deadline] lies inside the merged
// uptime intervals; expected_count is the size of that set.
std::vector<int> expected_slots(
    const TriggerConfig& cfg,
    const std::vector<std::pair<double, double>>& uptime);
int expected_count(const TriggerConfig& cfg,
                   const std::vector<std::pair<double, double>>& uptime);

// triggers_within_uptime / expected; defined as 1.0 when expected == 0.
double coverage(int triggers_within_uptime, int expected);

// JSONL forms used by replay tooling: events as
// {"t":..,"event":"proximity"|"speech"|"tick"|"suspend"|"resume", ...}
// and actions as {"t":..,"action":..., ...}.
struct FsmEvent {
  enum class Kind { proximity, speech, tick, suspend, resume };
  Kind kind = Kind::tick;
  double t = 0.0;
  prox::Phase phase = prox::Phase::unknown;  // proximity payload
  bool active = false;                       // speech payload
};

std::vector<FsmEvent> parse_fsm_events(const std::string& jsonl,
                                       const std::string& context);
void apply_event(TriggerStateMachine& fsm, const FsmEvent& ev);
std::string actions_to_jsonl(const std::vector<Action>& actions);

}  // namespace ds::trig
