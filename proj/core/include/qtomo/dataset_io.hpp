// Copyright 2026 The qtomo Authors
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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qtomo/dataset.hpp"

namespace qtomo {

enum class DatasetFormat { kJson, kCsv };

// Format implied by a file extension: .json or .csv (case-insensitive).
DatasetFormat format_for_path(const std::filesystem::path& path);

// {"k": 2, "counts": {"xz": {"++": 12, "+-": 3, ...}, ...}}
// Outcomes missing under a present setting count as 0.
std::string dataset_to_json(const CountsDataset& data);
CountsDataset dataset_from_json(std::string_view text);

// Header "setting,outcome,count", one row per cell. Settings absent from the
// table are absent from the dataset.
std::string dataset_to_csv(const CountsDataset& data);
CountsDataset dataset_from_csv(std::string_view text);

// Loads by extension. Incomplete datasets load fine (check is_complete());
// malformed strings, negative or non-integer counts, duplicate cells and
// inconsistent qubit counts raise ValidationError.
CountsDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const CountsDataset& data, const std::filesystem::path& path);

}  // namespace qtomo
