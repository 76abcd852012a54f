#include "features/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/io.hpp"

namespace ds::feat {
namespace {

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double population_sd(const std::vector<double>& v, double mean) {
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

// Sign-change fraction over consecutive samples of the detrended series;
// exact zeros do not count as crossings.
double zero_crossing_rate(const std::vector<double>& v) {
  double mean = mean_of(v);
  size_t crossings = 0;
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    double a = v[i] - mean, b = v[i + 1] - mean;
    if (a * b < 0.0) ++crossings;
  }
  return static_cast<double>(crossings) / static_cast<double>(v.size() - 1);
}

}  // namespace

std::vector<std::string> physio_feature_names() {
  return {"hr_mean", "hr_sd", "hr_min", "hr_max", "hr_slope"};
}

std::vector<double> physio_features(const HrSeries& hr) {
  if (hr.t.size() != hr.bpm.size())
    throw ConfigError("HR timestamps and values must align");
  std::vector<double> t, y;
  for (size_t i = 0; i < hr.bpm.size(); ++i) {
    if (hr.bpm[i] > 20.0 && hr.bpm[i] < 250.0) {
      if (!t.empty() && hr.t[i] <= t.back())
        throw ConfigError("HR timestamps must be increasing");
      t.push_back(hr.t[i]);
      y.push_back(hr.bpm[i]);
    }
  }
  if (y.size() < 2)
    throw ConfigError("physio features need at least 2 valid HR samples");

  double my = mean_of(y);
  double mt = mean_of(t);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - mt) * (y[i] - my);
    den += (t[i] - mt) * (t[i] - mt);
  }
  double slope = den > 0.0 ? num / den : 0.0;
  return {my, population_sd(y, my), *std::min_element(y.begin(), y.end()),
          *std::max_element(y.begin(), y.end()), slope};
}

std::vector<std::string> movement_feature_names() {
  std::vector<std::string> names;
  const char* axes[] = {"accel_x", "accel_y", "accel_z",
                        "gyro_x",  "gyro_y",  "gyro_z"};
  for (const char* axis : axes) {
    names.push_back(std::string("mov_") + axis + "_mean");
    names.push_back(std::string("mov_") + axis + "_sd");
  }
  for (const char* mag : {"accel_mag", "gyro_mag"}) {
    names.push_back(std::string("mov_") + mag + "_mean");
    names.push_back(std::string("mov_") + mag + "_sd");
  }
  names.push_back("mov_accel_zcr");
  names.push_back("mov_gyro_zcr");
  return names;
}

std::vector<double> movement_features(const ImuSeries& imu) {
  size_t n = imu.samples.size();
  if (n < 2) throw ConfigError("movement features need at least 2 samples");
  std::vector<std::vector<double>> axes(6);
  std::vector<double> accel_mag(n), gyro_mag(n);
  for (auto& a : axes) a.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& s = imu.samples[i];
    if (i > 0 && s.t <= imu.samples[i - 1].t)
      throw ConfigError("IMU timestamps must be increasing");
    axes[0][i] = s.ax;
    axes[1][i] = s.ay;
    axes[2][i] = s.az;
    axes[3][i] = s.gx;
    axes[4][i] = s.gy;
    axes[5][i] = s.gz;
    accel_mag[i] = std::sqrt(s.ax * s.ax + s.ay * s.ay + s.az * s.az);
    gyro_mag[i] = std::sqrt(s.gx * s.gx + s.gy * s.gy + s.gz * s.gz);
  }
  std::vector<double> out;
  out.reserve(18);
  for (const auto& axis : axes) {
    double m = mean_of(axis);
    out.push_back(m);
    out.push_back(population_sd(axis, m));
  }
  for (const auto& mag : {accel_mag, gyro_mag}) {
    double m = mean_of(mag);
    out.push_back(m);
    out.push_back(population_sd(mag, m));
  }
  out.push_back(zero_crossing_rate(accel_mag));
  out.push_back(zero_crossing_rate(gyro_mag));
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw ConfigError("percentile of empty set");
  if (q < 0.0 || q > 100.0) throw ConfigError("percentile q must be in [0, 100]");
  std::sort(values.begin(), values.end());
  double rank = q / 100.0 * static_cast<double>(values.size() - 1);
  auto lower = static_cast<size_t>(rank);
  double frac = rank - static_cast<double>(lower);
  if (lower + 1 >= values.size()) return values.back();
  return values[lower] * (1.0 - frac) + values[lower + 1] * frac;
}

std::vector<std::string> acoustic_feature_names(int num_coefficients) {
  std::vector<std::string> names;
  for (int k = 0; k < num_coefficients; ++k) {
    std::string base = "ac_c" + std::to_string(k);
    names.push_back(base + "_mean");
    names.push_back(base + "_sd");
    names.push_back(base + "_p10");
    names.push_back(base + "_p90");
  }
  names.push_back("ac_speech_ratio");
  return names;
}

AcousticResult acoustic_features(const std::vector<dsp::FeatureVector>& frames,
                                 const std::vector<vad::SpeechSegment>& segments) {
  if (frames.empty()) throw ConfigError("acoustic features need frames");
  size_t k = frames[0].values.size();
  auto in_speech = [&](double t) {
    for (const auto& s : segments)
      if (t >= s.start && t < s.end) return true;
    return false;
  };
  std::vector<const dsp::FeatureVector*> speech;
  for (const auto& f : frames) {
    if (f.values.size() != k)
      throw ConfigError("inconsistent coefficient counts across frames");
    if (in_speech(f.timestamp)) speech.push_back(&f);
  }

  AcousticResult res;
  res.functionals_present = !speech.empty();
  res.values.assign(4 * k + 1, 0.0);
  if (res.functionals_present) {
    std::vector<double> coeff(speech.size());
    for (size_t c = 0; c < k; ++c) {
      for (size_t i = 0; i < speech.size(); ++i)
        coeff[i] = speech[i]->values[c];
      double m = mean_of(coeff);
      res.values[4 * c] = m;
      res.values[4 * c + 1] = population_sd(coeff, m);
      res.values[4 * c + 2] = percentile(coeff, 10.0);
      res.values[4 * c + 3] = percentile(coeff, 90.0);
    }
  }
  res.values[4 * k] = static_cast<double>(speech.size()) /
                      static_cast<double>(frames.size());
  return res;
}

PeakEnd peak_end_select(const std::vector<double>& segment_scores) {
  if (segment_scores.empty())
    throw ConfigError("peak-end selection needs at least one segment");
  PeakEnd out;
  for (size_t i = 1; i < segment_scores.size(); ++i) {
    if (segment_scores[i] > segment_scores[out.peak_pos]) out.peak_pos = i;
    if (segment_scores[i] < segment_scores[out.peak_neg]) out.peak_neg = i;
  }
  out.end = segment_scores.size() - 1;
  return out;
}

std::optional<double> FeatureSet::get(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name)
      return present[i] ? std::optional<double>(values[i]) : std::nullopt;
  return std::nullopt;
}

FeatureSet extract_features(const std::string& session_id,
                            const SessionInputs& inputs,
                            int num_coefficients) {
  FeatureSet set;
  set.session_id = session_id;

  auto add_group = [&](const std::vector<std::string>& names,
                       const std::vector<double>* values,
                       const std::vector<bool>* mask) {
    for (size_t i = 0; i < names.size(); ++i) {
      set.names.push_back(names[i]);
      bool ok = values && (!mask || (*mask)[i]);
      set.values.push_back(ok ? (*values)[i] : 0.0);
      set.present.push_back(ok);
    }
  };

  std::vector<double> physio;
  bool physio_ok = false;
  if (inputs.hr) {
    size_t valid = 0;
    for (double bpm : inputs.hr->bpm)
      if (bpm > 20.0 && bpm < 250.0) ++valid;
    if (valid >= 2) {
      physio = physio_features(*inputs.hr);
      physio_ok = true;
    }
  }
  add_group(physio_feature_names(), physio_ok ? &physio : nullptr, nullptr);

  std::vector<double> movement;
  bool movement_ok = false;
  if (inputs.imu && inputs.imu->samples.size() >= 2) {
    movement = movement_features(*inputs.imu);
    movement_ok = true;
  }
  add_group(movement_feature_names(), movement_ok ? &movement : nullptr,
            nullptr);

  auto ac_names = acoustic_feature_names(num_coefficients);
  if (inputs.mfcc_frames && !inputs.mfcc_frames->empty()) {
    if (!inputs.mfcc_frames->front().values.empty() &&
        inputs.mfcc_frames->front().values.size() !=
            static_cast<size_t>(num_coefficients))
      throw ConfigError("frame coefficient count does not match schema");
    auto ac = acoustic_features(*inputs.mfcc_frames, inputs.segments);
    std::vector<bool> mask(ac.values.size(), ac.functionals_present);
    mask.back() = true;  // speech_ratio is defined whenever frames exist
    add_group(ac_names, &ac.values, &mask);
  } else {
    add_group(ac_names, nullptr, nullptr);
  }
  return set;
}

std::string feature_sets_to_csv(const std::vector<FeatureSet>& sets) {
  if (sets.empty()) throw ConfigError("no feature sets to serialize");
  std::string out = "session_id";
  for (const auto& name : sets[0].names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (const auto& set : sets) {
    if (set.names != sets[0].names)
      throw ConfigError("feature sets have inconsistent schemas");
    out += set.session_id;
    for (size_t i = 0; i < set.values.size(); ++i) {
      out += ',';
      out += set.present[i] ? io::format_double(set.values[i]) : "NA";
    }
    out += '\n';
  }
  return out;
}

std::vector<FeatureSet> feature_sets_from_csv(const std::string& text,
                                              const std::string& context) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(context + ": empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = io::split_csv_line(line);
  if (header.size() < 2 || header[0] != "session_id")
    throw ParseError(context + ": header must start with session_id");
  std::vector<std::string> names(header.begin() + 1, header.end());

  std::vector<FeatureSet> sets;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = io::split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError(context + ":" + std::to_string(lineno) +
                       ": wrong field count");
    FeatureSet set;
    set.session_id = fields[0];
    set.names = names;
    for (size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "NA") {
        set.values.push_back(0.0);
        set.present.push_back(false);
      } else {
        try {
          set.values.push_back(io::parse_double(fields[i]));
        } catch (const ParseError& e) {
          throw ParseError(context + ":" + std::to_string(lineno) + ": " +
                           e.what());
        }
        set.present.push_back(true);
      }
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

}  // namespace ds::feat
