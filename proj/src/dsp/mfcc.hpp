#pragma once

#include <cstdint>
#include <vector>

#include "core/fft.hpp"

namespace ds::dsp {

struct AudioBuffer {
  std::vector<double> samples;  // normalized to [-1, 1]
  int sample_rate = 0;
};

struct MfccConfig {
  int frame_length = 400;
  int hop_length = 160;
  int num_mel_filters = 26;
  int num_coefficients = 13;
  double fmin = 50.0;
  double fmax = 8000.0;
  double log_floor = 1e-10;
};

// Throws ConfigError unless 0 < hop <= frame, coeffs <= filters,
// 0 <= fmin < fmax, log_floor > 0. The fmax <= Nyquist check needs the
// sample rate and happens at filterbank construction.
void validate(const MfccConfig& cfg);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Symmetric Hamming window, w[n] = 0.54 - 0.46*cos(2*pi*n/(L-1)).
std::vector<double> hamming_window(int length);

// |DFT|^2 of x zero-padded to fft_size; returns fft_size/2 + 1 bins.
std::vector<double> power_spectrum(const std::vector<double>& x,
                                   size_t fft_size);

// Triangular filters with centers equally spaced on the mel scale between
// fmin and fmax, interpolated onto the bins of an fft_size-point spectrum.
// Rows are stored banded: weights outside [first_bin, first_bin + width)
// are exactly zero.
class MelFilterbank {
 public:
  MelFilterbank(const MfccConfig& cfg, int sample_rate, int fft_size);

  size_t num_filters() const { return rows_.size(); }
  size_t num_bins() const { return num_bins_; }
  double weight(size_t filter, size_t bin) const;
  const std::vector<double>& center_freqs_hz() const { return centers_hz_; }

  // mel[f] = sum_b weight(f, b) * power[b]; power must have num_bins entries.
  void apply(const double* power, double* mel) const;

 private:
  struct Row {
    size_t first_bin;
    std::vector<double> weights;
  };
  std::vector<Row> rows_;
  std::vector<double> centers_hz_;
  size_t num_bins_;
};

struct FeatureVector {
  std::vector<double> values;  // num_coefficients MFCCs
  int64_t frame_index = 0;
  double timestamp = 0.0;   // seconds from stream start (frame start)
  double log_energy = 0.0;  // ln(max(sum x^2, log_floor)) of the raw frame
};

// Start offsets of the frames covering [k*hop, k*hop + frame_length);
// trailing partial frames are dropped.
std::vector<size_t> frame_offsets(size_t num_samples, const MfccConfig& cfg);

// Full per-frame pipeline: Hamming window, zero-padded power spectrum,
// mel filterbank, ln with log_floor clamp, orthonormal DCT-II truncated to
// num_coefficients.
std::vector<double> mfcc(const std::vector<double>& frame,
                         const MelFilterbank& fb, const MfccConfig& cfg);

// Incremental extractor; emits exactly what batch processing emits on the
// concatenated input, independent of chunking. Single writer per instance.
class MfccStream {
 public:
  MfccStream(const MfccConfig& cfg, int sample_rate);

  void push(const double* samples, size_t n);
  void push(const std::vector<double>& samples);
  size_t pending() const { return ready_.size() - next_out_; }
  bool pop(FeatureVector& out);

  const MfccConfig& config() const { return cfg_; }
  const MelFilterbank& filterbank() const { return fb_; }
  int sample_rate() const { return sample_rate_; }
  size_t fft_size() const { return fft_.size(); }

 private:
  void extract_ready();
  void compact();

  MfccConfig cfg_;
  int sample_rate_;
  Radix2Fft fft_;
  MelFilterbank fb_;
  std::vector<double> window_;
  std::vector<double> dct_;  // num_coefficients x num_mel_filters, row-major

  std::vector<double> buf_;  // samples [base_, base_ + buf_.size())
  size_t base_ = 0;
  int64_t next_frame_ = 0;

  std::vector<std::complex<double>> fft_in_;
  std::vector<double> power_;
  std::vector<double> mel_;

  std::vector<FeatureVector> ready_;
  size_t next_out_ = 0;
};

std::vector<FeatureVector> batch_features(const AudioBuffer& audio,
                                          const MfccConfig& cfg);

}  // namespace ds::dsp
