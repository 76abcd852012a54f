#include "dsp/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace ds::dsp {

void validate(const MfccConfig& cfg) {
  if (cfg.frame_length <= 0)
    throw ConfigError("frame_length must be positive");
  if (cfg.hop_length <= 0 || cfg.hop_length > cfg.frame_length)
    throw ConfigError("hop_length must satisfy 0 < hop_length <= frame_length");
  if (cfg.num_mel_filters <= 0)
    throw ConfigError("num_mel_filters must be positive");
  if (cfg.num_coefficients <= 0 ||
      cfg.num_coefficients > cfg.num_mel_filters)
    throw ConfigError("num_coefficients must be in [1, num_mel_filters]");
  if (cfg.fmin < 0 || cfg.fmin >= cfg.fmax)
    throw ConfigError("need 0 <= fmin < fmax");
  if (cfg.log_floor <= 0) throw ConfigError("log_floor must be positive");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> hamming_window(int length) {
  std::vector<double> w(static_cast<size_t>(length));
  if (length == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int n = 0; n < length; ++n)
    w[static_cast<size_t>(n)] =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (length - 1));
  return w;
}

std::vector<double> power_spectrum(const std::vector<double>& x,
                                   size_t fft_size) {
  if (x.size() > fft_size)
    throw ConfigError("signal longer than FFT size");
  Radix2Fft fft(fft_size);
  std::vector<std::complex<double>> buf(fft_size);
  for (size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
  fft.transform(buf);
  std::vector<double> power(fft_size / 2 + 1);
  for (size_t b = 0; b < power.size(); ++b) power[b] = std::norm(buf[b]);
  return power;
}

MelFilterbank::MelFilterbank(const MfccConfig& cfg, int sample_rate,
                             int fft_size) {
  validate(cfg);
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  double nyquist = sample_rate / 2.0;
  if (cfg.fmax > nyquist)
    throw ConfigError("fmax " + std::to_string(cfg.fmax) +
                      " exceeds Nyquist " + std::to_string(nyquist));

  num_bins_ = static_cast<size_t>(fft_size) / 2 + 1;
  int m = cfg.num_mel_filters;
  double mel_lo = hz_to_mel(cfg.fmin);
  double mel_hi = hz_to_mel(cfg.fmax);
  std::vector<double> edges_hz(static_cast<size_t>(m) + 2);
  for (int i = 0; i < m + 2; ++i)
    edges_hz[static_cast<size_t>(i)] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (m + 1));

  centers_hz_.assign(edges_hz.begin() + 1, edges_hz.end() - 1);
  double bin_hz = static_cast<double>(sample_rate) / fft_size;

  rows_.reserve(static_cast<size_t>(m));
  for (int f = 0; f < m; ++f) {
    double left = edges_hz[static_cast<size_t>(f)];
    double center = edges_hz[static_cast<size_t>(f) + 1];
    double right = edges_hz[static_cast<size_t>(f) + 2];
    Row row{num_bins_, {}};
    for (size_t b = 0; b < num_bins_; ++b) {
      double freq = b * bin_hz;
      double w = 0.0;
      if (freq > left && freq < right) {
        w = freq <= center ? (freq - left) / (center - left)
                           : (right - freq) / (right - center);
      }
      if (w > 0.0) {
        if (row.weights.empty()) row.first_bin = b;
        row.weights.push_back(w);
      } else if (!row.weights.empty()) {
        break;  // past the band; triangular rows have one contiguous run
      }
    }
    if (row.weights.empty())
      throw ConfigError("mel filter " + std::to_string(f) +
                        " covers no FFT bin; reduce num_mel_filters or widen "
                        "the frequency range");
    rows_.push_back(std::move(row));
  }
}

double MelFilterbank::weight(size_t filter, size_t bin) const {
  const Row& row = rows_.at(filter);
  if (bin < row.first_bin || bin >= row.first_bin + row.weights.size())
    return 0.0;
  return row.weights[bin - row.first_bin];
}

void MelFilterbank::apply(const double* power, double* mel) const {
  for (size_t f = 0; f < rows_.size(); ++f) {
    const Row& row = rows_[f];
    double acc = 0.0;
    for (size_t i = 0; i < row.weights.size(); ++i)
      acc += row.weights[i] * power[row.first_bin + i];
    mel[f] = acc;
  }
}

std::vector<size_t> frame_offsets(size_t num_samples, const MfccConfig& cfg) {
  validate(cfg);
  std::vector<size_t> offsets;
  auto frame = static_cast<size_t>(cfg.frame_length);
  auto hop = static_cast<size_t>(cfg.hop_length);
  if (num_samples < frame) return offsets;
  size_t count = (num_samples - frame) / hop + 1;
  offsets.reserve(count);
  for (size_t k = 0; k < count; ++k) offsets.push_back(k * hop);
  return offsets;
}

namespace {

// Orthonormal DCT-II, row-major num_coefficients x num_filters.
std::vector<double> dct_matrix(int num_coefficients, int num_filters) {
  std::vector<double> m(static_cast<size_t>(num_coefficients) *
                        static_cast<size_t>(num_filters));
  double norm0 = std::sqrt(1.0 / num_filters);
  double norm = std::sqrt(2.0 / num_filters);
  for (int k = 0; k < num_coefficients; ++k)
    for (int n = 0; n < num_filters; ++n)
      m[static_cast<size_t>(k) * num_filters + n] =
          (k == 0 ? norm0 : norm) *
          std::cos(std::numbers::pi * k * (2 * n + 1) / (2.0 * num_filters));
  return m;
}

}  // namespace

std::vector<double> mfcc(const std::vector<double>& frame,
                         const MelFilterbank& fb, const MfccConfig& cfg) {
  validate(cfg);
  if (frame.size() != static_cast<size_t>(cfg.frame_length))
    throw ConfigError("frame length does not match config");
  auto window = hamming_window(cfg.frame_length);
  std::vector<double> windowed(frame.size());
  for (size_t i = 0; i < frame.size(); ++i) windowed[i] = frame[i] * window[i];

  size_t fft_size = Radix2Fft::next_power_of_two(std::max<size_t>(frame.size(), 2));
  auto power = power_spectrum(windowed, fft_size);
  if (fb.num_bins() != power.size())
    throw ConfigError("filterbank bin count does not match FFT size");

  std::vector<double> mel(fb.num_filters());
  fb.apply(power.data(), mel.data());
  for (double& e : mel) e = std::log(std::max(e, cfg.log_floor));

  auto dct = dct_matrix(cfg.num_coefficients, cfg.num_mel_filters);
  std::vector<double> out(static_cast<size_t>(cfg.num_coefficients));
  for (int k = 0; k < cfg.num_coefficients; ++k) {
    double acc = 0.0;
    for (int n = 0; n < cfg.num_mel_filters; ++n)
      acc += dct[static_cast<size_t>(k) * cfg.num_mel_filters + n] * mel[n];
    out[static_cast<size_t>(k)] = acc;
  }
  return out;
}

MfccStream::MfccStream(const MfccConfig& cfg, int sample_rate)
    : cfg_((validate(cfg), cfg)),
      sample_rate_(sample_rate),
      fft_(Radix2Fft::next_power_of_two(
          std::max<size_t>(static_cast<size_t>(cfg.frame_length), 2))),
      fb_(cfg, sample_rate, static_cast<int>(fft_.size())),
      window_(hamming_window(cfg.frame_length)),
      dct_(dct_matrix(cfg.num_coefficients, cfg.num_mel_filters)),
      fft_in_(fft_.size()),
      power_(fft_.size() / 2 + 1),
      mel_(static_cast<size_t>(cfg.num_mel_filters)) {
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
}

void MfccStream::push(const double* samples, size_t n) {
  if (n == 0) return;
  buf_.insert(buf_.end(), samples, samples + n);
  extract_ready();
  compact();
}

void MfccStream::push(const std::vector<double>& samples) {
  push(samples.data(), samples.size());
}

bool MfccStream::pop(FeatureVector& out) {
  if (next_out_ >= ready_.size()) return false;
  out = std::move(ready_[next_out_++]);
  if (next_out_ == ready_.size()) {
    ready_.clear();
    next_out_ = 0;
  }
  return true;
}

void MfccStream::extract_ready() {
  auto frame = static_cast<size_t>(cfg_.frame_length);
  auto hop = static_cast<size_t>(cfg_.hop_length);
  while (true) {
    size_t start = static_cast<size_t>(next_frame_) * hop;
    if (start + frame > base_ + buf_.size()) break;
    const double* x = buf_.data() + (start - base_);

    double energy = 0.0;
    for (size_t i = 0; i < frame; ++i) energy += x[i] * x[i];

    std::fill(fft_in_.begin(), fft_in_.end(), std::complex<double>(0.0));
    for (size_t i = 0; i < frame; ++i) fft_in_[i] = x[i] * window_[i];
    fft_.transform(fft_in_);
    for (size_t b = 0; b < power_.size(); ++b) power_[b] = std::norm(fft_in_[b]);

    fb_.apply(power_.data(), mel_.data());
    for (double& e : mel_) e = std::log(std::max(e, cfg_.log_floor));

    FeatureVector fv;
    fv.frame_index = next_frame_;
    fv.timestamp = static_cast<double>(start) / sample_rate_;
    fv.log_energy = std::log(std::max(energy, cfg_.log_floor));
    fv.values.resize(static_cast<size_t>(cfg_.num_coefficients));
    auto filters = static_cast<size_t>(cfg_.num_mel_filters);
    for (size_t k = 0; k < fv.values.size(); ++k) {
      double acc = 0.0;
      const double* row = dct_.data() + k * filters;
      for (size_t n = 0; n < filters; ++n) acc += row[n] * mel_[n];
      fv.values[k] = acc;
    }
    ready_.push_back(std::move(fv));
    ++next_frame_;
  }
}

void MfccStream::compact() {
  auto hop = static_cast<size_t>(cfg_.hop_length);
  size_t needed_from = static_cast<size_t>(next_frame_) * hop;
  if (needed_from > base_ &&
      needed_from - base_ > 8 * static_cast<size_t>(cfg_.frame_length)) {
    buf_.erase(buf_.begin(),
               buf_.begin() + static_cast<ptrdiff_t>(needed_from - base_));
    base_ = needed_from;
  }
}

std::vector<FeatureVector> batch_features(const AudioBuffer& audio,
                                          const MfccConfig& cfg) {
  if (audio.samples.empty()) return {};
  MfccStream stream(cfg, audio.sample_rate);
  stream.push(audio.samples);
  std::vector<FeatureVector> out;
  out.reserve(stream.pending());
  FeatureVector fv;
  while (stream.pop(fv)) out.push_back(std::move(fv));
  return out;
}

}  // namespace ds::dsp
