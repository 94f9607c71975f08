// Copyright 2026 The Authors.
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

// Minimal comma-separated reader/writer used by every file format here.
// Lines beginning with '#' carry `key=value` metadata pairs separated by
// commas; no quoting is supported since no field ever contains a comma.

#ifndef EDGESPONSOR_CSV_HPP_
#define EDGESPONSOR_CSV_HPP_

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesponsor/decimal.hpp"

namespace edgesponsor::csv {

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);

  // Next data row; false at end of file. Blank lines are skipped and
  // metadata lines are folded into metadata().
  bool next();
  const std::vector<std::string>& row() const { return fields_; }
  std::size_t line() const { return line_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  std::optional<std::string> meta(const std::string& key) const;

  // Reads the header row and checks it matches exactly.
  void expect_header(std::span<const std::string_view> columns);
  void expect_header(std::initializer_list<std::string_view> columns) {
    expect_header(std::span<const std::string_view>(columns.begin(), columns.size()));
  }
  void expect_columns(std::size_t n) const;

  [[noreturn]] void fail(const std::string& message) const;

  long long to_int(std::size_t column) const;
  double to_double(std::size_t column) const;
  template <int D>
  Decimal<D> to_decimal(std::size_t column) const {
    try {
      return Decimal<D>::parse(fields_.at(column));
    } catch (const std::exception& e) {
      fail(std::string("bad decimal: ") + e.what());
    }
  }

 private:
  std::string source_;
  std::ifstream in_;
  std::size_t line_ = 0;
  std::vector<std::string> fields_;
  std::map<std::string, std::string> metadata_;
};

// Opens for writing or throws edgesponsor::Error.
std::ofstream open_output(const std::filesystem::path& path);

long long parse_int(std::string_view text);

// Renders a double with a fixed number of decimals; stable across runs.
std::string format_fixed(double value, int decimals = 6);

}  // namespace edgesponsor::csv

#endif  // EDGESPONSOR_CSV_HPP_
