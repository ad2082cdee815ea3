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

#ifndef RDP_DATASET_H_
#define RDP_DATASET_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace rdp {

// One numeric column of a CSV file with a header row. Read-only after
// loading.
class Dataset {
 public:
  // Quoted fields follow RFC 4180. Every cell of the selected column must
  // parse as a finite number; errors name the row and column.
  static absl::StatusOr<Dataset> FromCsvText(std::string_view text,
                                             std::string_view column);
  static absl::StatusOr<Dataset> FromCsvFile(const std::string& path,
                                             std::string_view column);
  static Dataset FromValues(std::vector<double> values) {
    return Dataset(std::move(values));
  }

  const std::vector<double>& values() const { return values_; }
  size_t size() const { return values_.size(); }

 private:
  explicit Dataset(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

}  // namespace rdp

#endif  // RDP_DATASET_H_
