#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ds::wav {

struct WavData {
  int sample_rate = 0;
  std::vector<double> samples;  // normalized to [-1, 1]
};

// Reads a RIFF/WAVE file holding 16-bit mono PCM (format code 1). Samples
// are normalized by 1/32768. Any other encoding is rejected with a
// ParseError naming the offending field (format code, channel count, bit
// depth). Unknown chunks are skipped.
WavData read_pcm16_mono(const std::string& path);

// Writes 16-bit mono PCM; samples are clamped to [-1, 1] and scaled by 32767.
void write_pcm16_mono(const std::string& path,
                      const std::vector<double>& samples, int sample_rate);

}  // namespace ds::wav
