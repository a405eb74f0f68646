// Copyright 2026 The Quadloco Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// RFC-4180 style CSV reading and writing.

#ifndef QUADLOCO_APP_CSV_HPP_
#define QUADLOCO_APP_CSV_HPP_

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace quadloco::app {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws IoError when absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
  // Column parsed as numbers; "inf", "-inf" and "nan" are accepted.
  std::vector<double> numbers(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::string& path);

std::vector<std::string> split_header(std::string_view line);

std::string csv_field(std::string_view value);
// Shortest text that parses back to exactly `v`; "inf", "-inf", "nan" for
// non-finite values.
std::string format_number(double v);

// Writes the header on construction and flushes each row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  // Header given as one comma-separated line.
  CsvWriter(const std::string& path, std::string_view header);
  void row(const std::vector<std::string>& fields);

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace quadloco::app

#endif  // QUADLOCO_APP_CSV_HPP_
