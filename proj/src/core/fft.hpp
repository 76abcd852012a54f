#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ds::dsp {

// Iterative radix-2 Cooley-Tukey FFT with precomputed bit-reversal indices
// and twiddle factors. Sized once, reused per frame.
class Radix2Fft {
 public:
  // Throws ConfigError unless n is a power of two >= 2.
  explicit Radix2Fft(std::size_t n);

  std::size_t size() const { return n_; }

  // In-place forward transform; data.size() must equal size().
  void transform(std::vector<std::complex<double>>& data) const;

  static bool is_power_of_two(std::size_t n) {
    return n >= 1 && (n & (n - 1)) == 0;
  }

  static std::size_t next_power_of_two(std::size_t n);

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> roots_;  // exp(-2*pi*i*k/n), k in [0, n/2)
};

}  // namespace ds::dsp
