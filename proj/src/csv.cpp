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

#include "edgesponsor/csv.hpp"

#include <charconv>
#include <cstdio>

#include "edgesponsor/errors.hpp"

namespace edgesponsor::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Reader::Reader(const std::filesystem::path& path)
    : source_(path.string()), in_(path) {
  if (!in_) throw Error("cannot open " + source_);
}

bool Reader::next() {
  std::string raw;
  while (std::getline(in_, raw)) {
    ++line_;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      for (const std::string& pair : split(line)) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) continue;
        metadata_[std::string(trim(std::string_view(pair).substr(0, eq)))] =
            std::string(trim(std::string_view(pair).substr(eq + 1)));
      }
      continue;
    }
    fields_ = split(line);
    return true;
  }
  return false;
}

std::optional<std::string> Reader::meta(const std::string& key) const {
  auto it = metadata_.find(key);
  if (it == metadata_.end()) return std::nullopt;
  return it->second;
}

void Reader::expect_header(std::span<const std::string_view> columns) {
  if (!next()) fail("missing header");
  bool ok = fields_.size() == columns.size();
  std::size_t i = 0;
  for (std::string_view c : columns) {
    if (!ok) break;
    ok = fields_[i++] == c;
  }
  if (!ok) {
    std::string want;
    for (std::string_view c : columns) {
      if (!want.empty()) want += ',';
      want += c;
    }
    fail("expected header '" + want + "'");
  }
}

void Reader::expect_columns(std::size_t n) const {
  if (fields_.size() != n) {
    fail("expected " + std::to_string(n) + " columns, got " +
         std::to_string(fields_.size()));
  }
}

void Reader::fail(const std::string& message) const {
  throw ParseError(source_, line_, message);
}

long long Reader::to_int(std::size_t column) const {
  try {
    return parse_int(fields_.at(column));
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

double Reader::to_double(std::size_t column) const {
  const std::string& text = fields_.at(column);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) fail("bad number '" + text + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    fail("bad number '" + text + "'");
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

long long parse_int(std::string_view text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw std::invalid_argument("bad integer '" + std::string(text) + "'");
  }
  return v;
}

std::string format_fixed(double value, int decimals) {
  if (value == 0.0) value = 0.0;  // folds -0.0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

}  // namespace edgesponsor::csv
