/*
 * Copyright 2026 The sysgraph Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Helpers shared by every tab-separated text format in the project
// (traces, manifests, model files, plans).
//
// Quoting rules, stable across versions:
//   * fields are separated by a single TAB (0x09), records by LF (0x0A);
//     a trailing CR before the LF is tolerated on input;
//   * inside a field, backslash escapes: "\\" -> '\', "\t" -> TAB,
//     "\n" -> LF, "\r" -> CR; any other escape is a parse error;
//   * an empty field means "absent".

#ifndef SYSGRAPH_TEXT_FORMAT_H_
#define SYSGRAPH_TEXT_FORMAT_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sysgraph::text {

std::string escape_field(std::string_view raw);

// Returns nullopt on a dangling or unknown escape sequence.
std::optional<std::string> unescape_field(std::string_view escaped);

// Splits on TAB without unescaping.
std::vector<std::string_view> split_fields(std::string_view line);

// Joins already-raw values, escaping each.
std::string join_fields(const std::vector<std::string>& raw_fields);

// Shortest decimal form that parses back to the identical double.
std::string format_shortest(double value);

// 17 significant digits; used where a minimum printed precision is required.
std::string format_precise(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

// Line-oriented reader that skips blank lines, strips CR and tracks line
// numbers for ParseError messages.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source)
      : in_(in), source_(std::move(source)) {}

  bool next(std::string& line);

  // Throws ParseError at the current line.
  [[noreturn]] void fail(const std::string& what) const;

  std::size_t line_number() const { return line_; }
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
};

}  // namespace sysgraph::text

#endif  // SYSGRAPH_TEXT_FORMAT_H_
