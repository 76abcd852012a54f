#pragma once

#include <string>
#include <vector>

namespace ds::io {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// Strict double parse; throws ParseError on trailing garbage or empty input.
double parse_double(const std::string& s);

// Plain comma split; fields in our CSVs never contain commas or quotes.
std::vector<std::string> split_csv_line(const std::string& line);

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// First line is the header; every row must have the same arity.
Csv read_csv(const std::string& path);

// Feature rows with a trailing integer label column.
struct LabeledTable {
  std::vector<std::string> feature_names;  // header minus the label column
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};

// CSV whose last column holds an integer label and every other column a
// double. context prefixes parse errors.
LabeledTable parse_labeled_csv(const std::string& text,
                               const std::string& context);
LabeledTable read_labeled_csv(const std::string& path);
std::string labeled_csv_text(const LabeledTable& t);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ds::io
