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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace qtomo {

// Fully resolved parameters of one run as an ordered key = value document.
// Equal configs render to identical text and therefore identical hashes.
class RunConfig {
 public:
  void set(const std::string& key, std::string value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, std::int64_t value);
  void set(const std::string& key, int value) { set(key, static_cast<std::int64_t>(value)); }
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, double value);
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

  bool contains(const std::string& key) const { return entries_.contains(key); }
  // Throws ValidationError for a missing key.
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

  // "key = value" lines sorted by key.
  std::string to_text() const;
  // Parses to_text() output; '#' starts a comment line.
  static RunConfig parse(std::string_view text);

  // 16 hex digits of a 64-bit FNV-1a hash of to_text().
  std::string hash() const;

 private:
  std::map<std::string, std::string> entries_;
};

// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace qtomo
