#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/rng.hpp"
#include "core/wav.hpp"

using namespace ds;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

void put_u32(std::string& s, uint32_t v) {
  s += static_cast<char>(v & 0xff);
  s += static_cast<char>((v >> 8) & 0xff);
  s += static_cast<char>((v >> 16) & 0xff);
  s += static_cast<char>((v >> 24) & 0xff);
}

void put_u16(std::string& s, uint16_t v) {
  s += static_cast<char>(v & 0xff);
  s += static_cast<char>((v >> 8) & 0xff);
}

// Minimal RIFF writer with tweakable fmt fields, for negative tests.
std::string synth_wav(uint16_t format_code, uint16_t channels, uint16_t bits,
                      const std::vector<int16_t>& samples,
                      uint32_t rate = 16000) {
  std::string data;
  for (int16_t v : samples) put_u16(data, static_cast<uint16_t>(v));
  std::string s;
  s += "RIFF";
  put_u32(s, 36 + static_cast<uint32_t>(data.size()));
  s += "WAVE";
  s += "fmt ";
  put_u32(s, 16);
  put_u16(s, format_code);
  put_u16(s, channels);
  put_u32(s, rate);
  put_u32(s, rate * 2);
  put_u16(s, 2);
  put_u16(s, bits);
  s += "data";
  put_u32(s, static_cast<uint32_t>(data.size()));
  s += data;
  return s;
}

uint32_t u32_at(const std::string& s, size_t off) {
  return static_cast<uint32_t>(static_cast<unsigned char>(s[off])) |
         (static_cast<uint32_t>(static_cast<unsigned char>(s[off + 1])) << 8) |
         (static_cast<uint32_t>(static_cast<unsigned char>(s[off + 2])) << 16) |
         (static_cast<uint32_t>(static_cast<unsigned char>(s[off + 3])) << 24);
}

uint16_t u16_at(const std::string& s, size_t off) {
  return static_cast<uint16_t>(
      static_cast<unsigned char>(s[off]) |
      (static_cast<unsigned char>(s[off + 1]) << 8));
}

}  // namespace

TEST_CASE("pcm16 wav round trips within one quantization step") {
  TempFile f("wavio_roundtrip.wav");
  std::vector<double> samples;
  for (int n = 0; n < 2000; ++n)
    samples.push_back(0.8 * std::sin(2.0 * 3.14159265358979 * 440.0 * n /
                                     16000.0));
  wav::write_pcm16_mono(f.path, samples, 16000);
  auto back = wav::read_pcm16_mono(f.path);

  CHECK(back.sample_rate == 16000);
  REQUIRE(back.samples.size() == samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    REQUIRE(std::abs(back.samples[i] - samples[i]) < 1e-4);
  }
}

TEST_CASE("the writer emits a canonical riff layout and clamps overdrive") {
  TempFile f("wavio_layout.wav");
  wav::write_pcm16_mono(f.path, {0.0, 1.0, -1.0, 2.0, -2.0}, 8000);
  auto raw = io::read_file(f.path);

  REQUIRE(raw.size() == 44 + 10);
  CHECK(raw.substr(0, 4) == "RIFF");
  CHECK(u32_at(raw, 4) == 36 + 10);
  CHECK(raw.substr(8, 4) == "WAVE");
  CHECK(raw.substr(12, 4) == "fmt ");
  CHECK(u32_at(raw, 16) == 16);
  CHECK(u16_at(raw, 20) == 1);   // PCM
  CHECK(u16_at(raw, 22) == 1);   // mono
  CHECK(u32_at(raw, 24) == 8000);
  CHECK(u16_at(raw, 34) == 16);  // bits
  CHECK(raw.substr(36, 4) == "data");
  CHECK(u32_at(raw, 40) == 10);

  auto sample_at = [&](size_t idx) {
    return static_cast<int16_t>(u16_at(raw, 44 + 2 * idx));
  };
  CHECK(sample_at(0) == 0);
  CHECK(sample_at(1) == 32767);
  CHECK(sample_at(2) == -32767);
  CHECK(sample_at(3) == 32767);   // clamped
  CHECK(sample_at(4) == -32767);  // clamped
}

TEST_CASE("non-pcm encodings are rejected naming the offending field") {
  auto expect = [](const std::string& bytes, const std::string& needle) {
    TempFile f("wavio_reject.wav");
    io::write_file(f.path, bytes);
    try {
      wav::read_pcm16_mono(f.path);
      FAIL("expected ParseError containing: ", needle);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect(synth_wav(3, 1, 16, {0, 0}), "format code 3");
  expect(synth_wav(1, 2, 16, {0, 0}), "channel count 2");
  expect(synth_wav(1, 1, 24, {0, 0}), "bit depth 24");
}

TEST_CASE("structural corruption is rejected") {
  auto expect = [](const std::string& bytes, const std::string& needle) {
    TempFile f("wavio_corrupt.wav");
    io::write_file(f.path, bytes);
    try {
      wav::read_pcm16_mono(f.path);
      FAIL("expected ParseError containing: ", needle);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect("JUNKxxxxxxxxxxxx", "not a RIFF file");
  std::string riff = "RIFF";
  put_u32(riff, 4);
  riff += "AIFF";
  expect(riff, "missing WAVE header");

  // data chunk before any fmt chunk
  std::string no_fmt = "RIFF";
  put_u32(no_fmt, 12);
  no_fmt += "WAVE";
  no_fmt += "data";
  put_u32(no_fmt, 0);
  expect(no_fmt, "data chunk before fmt");

  // declared more data than the file holds
  auto truncated = synth_wav(1, 1, 16, {1, 2, 3});
  truncated[40] = 100;  // inflate the data size field
  expect(truncated, "truncated data chunk");

  // fmt but no data chunk at all
  auto headless = synth_wav(1, 1, 16, {});
  headless.resize(36);
  expect(headless, "no data chunk found");

  CHECK_THROWS_AS(wav::read_pcm16_mono("does_not_exist.wav"), IoError);
}

TEST_CASE("unknown chunks are skipped, including odd-sized ones") {
  // LIST chunk with an odd payload (pad byte follows) inserted before fmt
  std::string s = "RIFF";
  std::string tail;
  tail += "LIST";
  put_u32(tail, 3);
  tail += "abc";
  tail += '\0';  // pad
  auto body = synth_wav(1, 1, 16, {100, -100});
  tail += body.substr(12);  // fmt + data chunks
  put_u32(s, static_cast<uint32_t>(4 + tail.size()));
  s += "WAVE";
  s += tail;

  TempFile f("wavio_chunks.wav");
  io::write_file(f.path, s);
  auto data = wav::read_pcm16_mono(f.path);
  REQUIRE(data.samples.size() == 2);
  CHECK(data.samples[0] == doctest::Approx(100.0 / 32768.0));
  CHECK(data.samples[1] == doctest::Approx(-100.0 / 32768.0));
}

TEST_CASE("format_double emits the shortest round-tripping decimal") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(900.0) == "900");
  CHECK(io::format_double(-2.5) == "-2.5");
  CHECK(io::format_double(0.0) == "0");

  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    double v = (rng.uniform(-1.0, 1.0)) *
               std::pow(10.0, std::floor(rng.uniform(-10.0, 10.0)));
    CHECK(io::parse_double(io::format_double(v)) == v);
  }
  CHECK(io::parse_double(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("parse_double is strict about its input") {
  CHECK(io::parse_double("1.5") == 1.5);
  CHECK(io::parse_double("-3e4") == -30000.0);
  CHECK_THROWS_AS(io::parse_double(""), ParseError);
  CHECK_THROWS_AS(io::parse_double("1.5x"), ParseError);
  CHECK_THROWS_AS(io::parse_double("x1.5"), ParseError);
  CHECK_THROWS_AS(io::parse_double("1.5 "), ParseError);
}

TEST_CASE("csv split keeps empty fields") {
  CHECK(io::split_csv_line("a,b,c") ==
        std::vector<std::string>{"a", "b", "c"});
  CHECK(io::split_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(io::split_csv_line("a,") == std::vector<std::string>{"a", ""});
  CHECK(io::split_csv_line("") == std::vector<std::string>{""});
}

TEST_CASE("labeled csv round trips bit-exactly") {
  io::LabeledTable t;
  t.feature_names = {"f0", "f1"};
  t.x = {{0.1, -2.5}, {1.0 / 3.0, 1e-300}};
  t.y = {1, -1};

  auto text = io::labeled_csv_text(t);
  CHECK(text.rfind("f0,f1,label\n", 0) == 0);
  auto back = io::parse_labeled_csv(text, "mem");
  CHECK(back.feature_names == t.feature_names);
  CHECK(back.x == t.x);
  CHECK(back.y == t.y);

  TempFile f("wavio_table.csv");
  io::write_file(f.path, text);
  auto from_file = io::read_labeled_csv(f.path);
  CHECK(from_file.x == t.x);

  // ragged rows are refused at serialization time
  t.x.push_back({1.0});
  t.y.push_back(1);
  CHECK_THROWS_AS(io::labeled_csv_text(t), ParseError);
}

TEST_CASE("labeled csv rejects malformed input with its position") {
  auto expect = [](const std::string& text, const std::string& needle) {
    try {
      io::parse_labeled_csv(text, "tbl");
      FAIL("expected ParseError containing: ", needle);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect("", "empty input");
  expect("label\n", "at least one feature");
  expect("f0,label\n0.5\n", "tbl:2");
  expect("f0,label\nabc,1\n", "bad number \"abc\"");
  expect("f0,label\n0.5,x\n", "bad integer label");
  expect("f0,label\n0.5,1.5\n", "bad integer label");
  expect("f0,label\n0.5,1\n0.6,2,3\n", "tbl:3");

  // blank interior lines and crlf endings are tolerated
  auto ok = io::parse_labeled_csv("f0,label\r\n0.5,1\r\n\r\n0.25,-1\r\n", "t");
  CHECK(ok.x.size() == 2);
  CHECK(ok.y == std::vector<int>{1, -1});

  CHECK_THROWS_AS(io::read_labeled_csv("does_not_exist_table.csv"), IoError);
}

TEST_CASE("generic csv reader requires uniform arity") {
  TempFile f("wavio_generic.csv");
  io::write_file(f.path, "a,b\n1,2\n3,4\n");
  auto csv = io::read_csv(f.path);
  CHECK(csv.header == std::vector<std::string>{"a", "b"});
  REQUIRE(csv.rows.size() == 2);
  CHECK(csv.rows[1] == std::vector<std::string>{"3", "4"});

  io::write_file(f.path, "a,b\n1\n");
  CHECK_THROWS_AS(io::read_csv(f.path), ParseError);
  io::write_file(f.path, "");
  CHECK_THROWS_AS(io::read_csv(f.path), ParseError);
  CHECK_THROWS_AS(io::read_csv("does_not_exist.csv"), IoError);
}

TEST_CASE("file io round trips binary content") {
  TempFile f("wavio_blob.bin");
  std::string blob = "abc";
  blob += '\0';
  blob += "\xff\x01 def";
  io::write_file(f.path, blob);
  CHECK(io::read_file(f.path) == blob);
  CHECK_THROWS_AS(io::read_file("does_not_exist.bin"), IoError);
}
