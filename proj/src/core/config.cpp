#include "core/config.hpp"

#include <cstdio>
#include <sstream>

#include "core/errors.hpp"
#include "core/io.hpp"

namespace ds::cfg {
namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& v, const std::string& where) {
  try {
    size_t pos = 0;
    int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(where + ": invalid integer \"" + v + "\"");
  }
}

double parse_num(const std::string& v, const std::string& where) {
  try {
    return io::parse_double(v);
  } catch (const ParseError&) {
    throw ConfigError(where + ": invalid number \"" + v + "\"");
  }
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(where + ": invalid boolean \"" + v + "\"");
}

std::vector<trig::SlotWindow> parse_slots(const std::string& v,
                                          const std::string& where) {
  std::vector<trig::SlotWindow> slots;
  if (trim(v).empty()) return slots;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError(where + ": slot \"" + item +
                        "\" must be start:deadline");
    slots.push_back({parse_num(trim(item.substr(0, colon)), where),
                     parse_num(trim(item.substr(colon + 1)), where)});
  }
  return slots;
}

std::string slots_to_string(const std::vector<trig::SlotWindow>& slots) {
  std::string out;
  for (size_t i = 0; i < slots.size(); ++i) {
    if (i) out += ',';
    out += io::format_double(slots[i].start);
    out += ':';
    out += io::format_double(slots[i].deadline);
  }
  return out;
}

}  // namespace

ToolkitConfig default_config() {
  ToolkitConfig cfg;
  cfg.trigger.slots = {{0, 900}, {900, 1800}, {1800, 2700}, {2700, 3600}};
  return cfg;
}

void apply_override(ToolkitConfig& cfg, const std::string& section,
                    const std::string& key, const std::string& value) {
  std::string where = "[" + section + "] " + key;
  if (section == "audio") {
    if (key == "sample_rate")
      cfg.sample_rate = parse_int(value, where);
    else
      throw ConfigError(where + ": unknown key");
  } else if (section == "mfcc") {
    auto& m = cfg.mfcc;
    if (key == "frame_length")
      m.frame_length = parse_int(value, where);
    else if (key == "hop_length")
      m.hop_length = parse_int(value, where);
    else if (key == "num_mel_filters")
      m.num_mel_filters = parse_int(value, where);
    else if (key == "num_coefficients")
      m.num_coefficients = parse_int(value, where);
    else if (key == "fmin")
      m.fmin = parse_num(value, where);
    else if (key == "fmax")
      m.fmax = parse_num(value, where);
    else if (key == "log_floor")
      m.log_floor = parse_num(value, where);
    else
      throw ConfigError(where + ": unknown key");
  } else if (section == "vad") {
    if (key == "lambda")
      cfg.svm.lambda = parse_num(value, where);
    else if (key == "epochs")
      cfg.svm.epochs = parse_int(value, where);
    else if (key == "enter_frames")
      cfg.hysteresis.enter_frames = parse_int(value, where);
    else if (key == "exit_frames")
      cfg.hysteresis.exit_frames = parse_int(value, where);
    else if (key == "min_segment")
      cfg.hysteresis.min_segment = parse_num(value, where);
    else
      throw ConfigError(where + ": unknown key");
  } else if (section == "proximity") {
    auto& p = cfg.proximity;
    if (key == "threshold_dbm")
      p.threshold_dbm = parse_num(value, where);
    else if (key == "ewma_alpha")
      p.ewma_alpha = parse_num(value, where);
    else if (key == "enter_dwell")
      p.enter_dwell = parse_int(value, where);
    else if (key == "exit_dwell")
      p.exit_dwell = parse_int(value, where);
    else if (key == "stale_timeout")
      p.stale_timeout = parse_num(value, where);
    else
      throw ConfigError(where + ": unknown key");
  } else if (section == "trigger") {
    auto& t = cfg.trigger;
    if (key == "recording_duration")
      t.recording_duration = parse_num(value, where);
    else if (key == "min_gap")
      t.min_gap = parse_num(value, where);
    else if (key == "slots")
      t.slots = parse_slots(value, where);
    else if (key == "max_per_day")
      t.max_per_day = parse_int(value, where);
    else if (key == "speech_confirm")
      t.speech_confirm = parse_num(value, where);
    else if (key == "confirm_window")
      t.confirm_window = parse_num(value, where);
    else
      throw ConfigError(where + ": unknown key");
  } else if (section == "forest") {
    auto& f = cfg.forest;
    if (key == "num_trees")
      f.num_trees = parse_int(value, where);
    else if (key == "max_depth")
      f.max_depth = parse_int(value, where);
    else if (key == "min_leaf")
      f.min_leaf = parse_int(value, where);
    else if (key == "feature_subsample")
      f.feature_subsample = parse_int(value, where);
    else if (key == "bootstrap")
      f.bootstrap = parse_bool(value, where);
    else
      throw ConfigError(where + ": unknown key");
  } else if (section == "sim") {
    auto& s = cfg.sim;
    if (key == "duration")
      s.duration = parse_num(value, where);
    else if (key == "density")
      s.density = parse_num(value, where);
    else if (key == "rssi_rate")
      s.rssi_rate = parse_num(value, where);
    else if (key == "near_mean_dbm")
      s.near_mean_dbm = parse_num(value, where);
    else if (key == "far_mean_dbm")
      s.far_mean_dbm = parse_num(value, where);
    else if (key == "rssi_noise_sd")
      s.rssi_noise_sd = parse_num(value, where);
    else if (key == "noise_rms")
      s.noise_rms = parse_num(value, where);
    else if (key == "noise_jitter_db")
      s.noise_jitter_db = parse_num(value, where);
    else if (key == "snr_min_db")
      s.snr_min_db = parse_num(value, where);
    else if (key == "snr_max_db")
      s.snr_max_db = parse_num(value, where);
    else if (key == "segment_min")
      s.segment_min = parse_num(value, where);
    else if (key == "segment_max")
      s.segment_max = parse_num(value, where);
    else if (key == "hr_base")
      s.hr_base = parse_num(value, where);
    else if (key == "hr_sd")
      s.hr_sd = parse_num(value, where);
    else if (key == "imu_rate")
      s.imu_rate = parse_num(value, where);
    else if (key == "emotion_duration")
      s.emotion_duration = parse_num(value, where);
    else
      throw ConfigError(where + ": unknown key");
  } else {
    throw ConfigError("unknown config section [" + section + "]");
  }
}

ToolkitConfig parse_config(const std::string& text,
                           const std::string& context) {
  ToolkitConfig cfg = default_config();
  std::istringstream in(text);
  std::string line, section;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = context + ":" + std::to_string(lineno);
    size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key=value");
    if (section.empty())
      throw ConfigError(where + ": key before any [section]");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    try {
      apply_override(cfg, section, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

ToolkitConfig load_config(const std::string& path) {
  return parse_config(io::read_file(path), path);
}

std::string serialize_config(const ToolkitConfig& cfg) {
  std::string out;
  auto kv = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  auto num = [](double v) { return io::format_double(v); };

  out += "[audio]\n";
  kv("sample_rate", std::to_string(cfg.sample_rate));
  out += "\n[mfcc]\n";
  kv("frame_length", std::to_string(cfg.mfcc.frame_length));
  kv("hop_length", std::to_string(cfg.mfcc.hop_length));
  kv("num_mel_filters", std::to_string(cfg.mfcc.num_mel_filters));
  kv("num_coefficients", std::to_string(cfg.mfcc.num_coefficients));
  kv("fmin", num(cfg.mfcc.fmin));
  kv("fmax", num(cfg.mfcc.fmax));
  kv("log_floor", num(cfg.mfcc.log_floor));
  out += "\n[vad]\n";
  kv("lambda", num(cfg.svm.lambda));
  kv("epochs", std::to_string(cfg.svm.epochs));
  kv("enter_frames", std::to_string(cfg.hysteresis.enter_frames));
  kv("exit_frames", std::to_string(cfg.hysteresis.exit_frames));
  kv("min_segment", num(cfg.hysteresis.min_segment));
  out += "\n[proximity]\n";
  kv("threshold_dbm", num(cfg.proximity.threshold_dbm));
  kv("ewma_alpha", num(cfg.proximity.ewma_alpha));
  kv("enter_dwell", std::to_string(cfg.proximity.enter_dwell));
  kv("exit_dwell", std::to_string(cfg.proximity.exit_dwell));
  kv("stale_timeout", num(cfg.proximity.stale_timeout));
  out += "\n[trigger]\n";
  kv("recording_duration", num(cfg.trigger.recording_duration));
  kv("min_gap", num(cfg.trigger.min_gap));
  kv("slots", slots_to_string(cfg.trigger.slots));
  kv("max_per_day", std::to_string(cfg.trigger.max_per_day));
  kv("speech_confirm", num(cfg.trigger.speech_confirm));
  kv("confirm_window", num(cfg.trigger.confirm_window));
  out += "\n[forest]\n";
  kv("num_trees", std::to_string(cfg.forest.num_trees));
  kv("max_depth", std::to_string(cfg.forest.max_depth));
  kv("min_leaf", std::to_string(cfg.forest.min_leaf));
  kv("feature_subsample", std::to_string(cfg.forest.feature_subsample));
  kv("bootstrap", cfg.forest.bootstrap ? "true" : "false");
  out += "\n[sim]\n";
  kv("duration", num(cfg.sim.duration));
  kv("density", num(cfg.sim.density));
  kv("rssi_rate", num(cfg.sim.rssi_rate));
  kv("near_mean_dbm", num(cfg.sim.near_mean_dbm));
  kv("far_mean_dbm", num(cfg.sim.far_mean_dbm));
  kv("rssi_noise_sd", num(cfg.sim.rssi_noise_sd));
  kv("noise_rms", num(cfg.sim.noise_rms));
  kv("noise_jitter_db", num(cfg.sim.noise_jitter_db));
  kv("snr_min_db", num(cfg.sim.snr_min_db));
  kv("snr_max_db", num(cfg.sim.snr_max_db));
  kv("segment_min", num(cfg.sim.segment_min));
  kv("segment_max", num(cfg.sim.segment_max));
  kv("hr_base", num(cfg.sim.hr_base));
  kv("hr_sd", num(cfg.sim.hr_sd));
  kv("imu_rate", num(cfg.sim.imu_rate));
  kv("emotion_duration", num(cfg.sim.emotion_duration));
  return out;
}

uint64_t fnv1a64(const std::string& data) {
  uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string config_hash(const ToolkitConfig& cfg) {
  uint64_t h = fnv1a64(serialize_config(cfg));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ds::cfg
