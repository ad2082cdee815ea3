//
// Copyright 2026 The rdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "rdp/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace rdp {
namespace {

// Splits CSV text into records of fields.
absl::StatusOr<std::vector<std::vector<std::string>>> SplitCsv(
    std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (field_started || !field.empty() || !row.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        field.clear();
        row.clear();
        field_started = false;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) return absl::InvalidArgumentError("unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

absl::StatusOr<Dataset> Dataset::FromCsvText(std::string_view text,
                                              std::string_view column) {
  absl::StatusOr<std::vector<std::vector<std::string>>> rows = SplitCsv(text);
  if (!rows.ok()) return rows.status();
  if (rows->empty()) return absl::InvalidArgumentError("CSV has no header");
  const std::vector<std::string>& header = rows->front();
  size_t index = header.size();
  for (size_t i = 0; i < header.size(); ++i) {
    if (Trim(header[i]) == column) {
      index = i;
      break;
    }
  }
  if (index == header.size()) {
    return absl::NotFoundError(
        absl::StrCat("column '", std::string(column), "' not in CSV header"));
  }
  std::vector<double> values;
  values.reserve(rows->size() - 1);
  for (size_t r = 1; r < rows->size(); ++r) {
    const std::vector<std::string>& row = (*rows)[r];
    const std::string where =
        absl::StrCat("row ", r + 1, ", column '", std::string(column), "'");
    if (index >= row.size()) {
      return absl::InvalidArgumentError(absl::StrCat(where, ": missing cell"));
    }
    std::string_view cell = Trim(row[index]);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] =
        std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size() ||
        !std::isfinite(v)) {
      return absl::InvalidArgumentError(absl::StrCat(
          where, ": non-numeric cell '", std::string(Trim(row[index])), "'"));
    }
    values.push_back(v);
  }
  return Dataset(std::move(values));
}

absl::StatusOr<Dataset> Dataset::FromCsvFile(const std::string& path,
                                              std::string_view column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromCsvText(buffer.str(), column);
}

}  // namespace rdp
