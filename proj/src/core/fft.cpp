#include "core/fft.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace ds::dsp {

std::size_t Radix2Fft::next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Radix2Fft::Radix2Fft(std::size_t n) : n_(n) {
  if (!is_power_of_two(n) || n < 2) {
    throw ConfigError("FFT size must be a power of two >= 2");
  }
  bitrev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }
  roots_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    roots_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void Radix2Fft::transform(std::vector<std::complex<double>>& data) const {
  if (data.size() != n_) {
    throw ConfigError("FFT input length does not match configured size");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t stride = n_ / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> w = roots_[k * stride];
        const std::complex<double> even = data[start + k];
        const std::complex<double> odd = data[start + k + half] * w;
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

}  // namespace ds::dsp
