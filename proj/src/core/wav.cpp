#include "core/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "core/errors.hpp"

namespace ds::wav {
namespace {

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(static_cast<uint16_t>(b[0]) |
                               (static_cast<uint16_t>(b[1]) << 8));
}

void write_u32(std::ostream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

}  // namespace

WavData read_pcm16_mono(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0)
    throw ParseError(path + ": not a RIFF file");
  read_u32(in);  // overall size, unused
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0)
    throw ParseError(path + ": missing WAVE header");

  bool have_fmt = false;
  uint16_t format_code = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  WavData out;

  while (in.read(tag, 4)) {
    uint32_t chunk_size = read_u32(in);
    if (!in) break;
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw ParseError(path + ": fmt chunk too small");
      format_code = read_u16(in);
      channels = read_u16(in);
      sample_rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      in.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw ParseError(path + ": data chunk before fmt");
      if (format_code != 1)
        throw ParseError(path + ": unsupported format code " +
                         std::to_string(format_code) + " (want 1, PCM)");
      if (channels != 1)
        throw ParseError(path + ": unsupported channel count " +
                         std::to_string(channels) + " (want mono)");
      if (bits != 16)
        throw ParseError(path + ": unsupported bit depth " +
                         std::to_string(bits) + " (want 16)");
      size_t n = chunk_size / 2;
      out.samples.resize(n);
      std::vector<char> raw(chunk_size);
      in.read(raw.data(), static_cast<std::streamsize>(chunk_size));
      if (!in) throw ParseError(path + ": truncated data chunk");
      for (size_t i = 0; i < n; ++i) {
        auto lo = static_cast<unsigned char>(raw[2 * i]);
        auto hi = static_cast<unsigned char>(raw[2 * i + 1]);
        auto v = static_cast<int16_t>(static_cast<uint16_t>(lo) |
                                      (static_cast<uint16_t>(hi) << 8));
        out.samples[i] = static_cast<double>(v) / 32768.0;
      }
      out.sample_rate = static_cast<int>(sample_rate);
      return out;
    } else {
      // Chunks are word-aligned; odd sizes carry a pad byte.
      in.ignore(chunk_size + (chunk_size & 1));
    }
  }
  throw ParseError(path + ": no data chunk found");
}

void write_pcm16_mono(const std::string& path,
                      const std::vector<double>& samples, int sample_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");

  auto data_bytes = static_cast<uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(sample_rate));
  write_u32(out, static_cast<uint32_t>(sample_rate) * 2);
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (double s : samples) {
    double clamped = std::clamp(s, -1.0, 1.0);
    auto v = static_cast<int16_t>(std::lrint(clamped * 32767.0));
    write_u16(out, static_cast<uint16_t>(v));
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace ds::wav
