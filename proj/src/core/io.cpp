#include "core/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace ds::io {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s.empty()) throw ParseError("empty numeric field");
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("invalid number: '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Csv csv;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  csv.header = split_csv_line(line);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != csv.header.size())
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(csv.header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    csv.rows.push_back(std::move(fields));
  }
  return csv;
}

LabeledTable parse_labeled_csv(const std::string& text,
                               const std::string& context) {
  LabeledTable t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(context + ": empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < 2)
    throw ParseError(context + ": need at least one feature and a label");
  t.feature_names.assign(header.begin(), header.end() - 1);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string where = context + ":" + std::to_string(lineno);
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError(where + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    std::vector<double> row(fields.size() - 1);
    for (size_t i = 0; i + 1 < fields.size(); ++i) {
      try {
        row[i] = parse_double(fields[i]);
      } catch (const ParseError&) {
        throw ParseError(where + ": bad number \"" + fields[i] + "\"");
      }
    }
    const std::string& lab = fields.back();
    int value = 0;
    try {
      size_t pos = 0;
      value = std::stoi(lab, &pos);
      if (pos != lab.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(where + ": bad integer label \"" + lab + "\"");
    }
    t.x.push_back(std::move(row));
    t.y.push_back(value);
  }
  return t;
}

LabeledTable read_labeled_csv(const std::string& path) {
  return parse_labeled_csv(read_file(path), path);
}

std::string labeled_csv_text(const LabeledTable& t) {
  std::string out;
  for (const auto& name : t.feature_names) {
    out += name;
    out += ',';
  }
  out += "label\n";
  for (size_t r = 0; r < t.x.size(); ++r) {
    if (t.x[r].size() != t.feature_names.size())
      throw ParseError("labeled table row arity mismatch");
    for (double v : t.x[r]) {
      out += format_double(v);
      out += ',';
    }
    out += std::to_string(t.y[r]);
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace ds::io
