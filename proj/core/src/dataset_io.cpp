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

#include "qtomo/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtomo/errors.hpp"

namespace qtomo {
namespace {

using Cells = std::map<std::size_t, std::vector<std::int64_t>>;

// Collects cells while enforcing a single qubit count and no duplicates.
class CellCollector {
 public:
  void add(std::string_view setting_text, std::string_view outcome_text, std::int64_t count) {
    const Setting d = Setting::parse(setting_text);
    const Outcome s = Outcome::parse(outcome_text);
    if (!k_) k_ = d.qubits();
    if (d.qubits() != *k_ || s.qubits() != *k_)
      throw ValidationError("inconsistent qubit count at cell " + std::string(setting_text) + "/" +
                            std::string(outcome_text));
    if (count < 0) throw ValidationError("negative count at cell " + d.str() + "/" + s.str());
    auto [it, inserted] = cells_.try_emplace(d.index());
    if (inserted) {
      it->second.assign(static_cast<std::size_t>(pow2(*k_)), 0);
      seen_.try_emplace(d.index());
    }
    if (!seen_[d.index()].insert(s.index()).second)
      throw ValidationError("duplicate cell " + d.str() + "/" + s.str());
    it->second[s.index()] = count;
  }
  void add_setting(std::string_view setting_text) {
    const Setting d = Setting::parse(setting_text);
    if (!k_) k_ = d.qubits();
    if (d.qubits() != *k_) throw ValidationError("inconsistent qubit count at setting " + std::string(setting_text));
    if (cells_.contains(d.index())) throw ValidationError("duplicate setting " + d.str());
    cells_[d.index()].assign(static_cast<std::size_t>(pow2(*k_)), 0);
    seen_.try_emplace(d.index());
  }
  void expect_qubits(int k) {
    if (k_ && *k_ != k) throw ValidationError("declared k does not match setting strings");
    k_ = k;
  }
  CountsDataset finish() {
    if (!k_) throw ValidationError("dataset has no cells and no qubit count");
    CountsDataset data(*k_);
    for (auto& [index, counts] : cells_) data.set_counts(index, std::move(counts));
    return data;
  }

 private:
  std::optional<int> k_;
  Cells cells_;
  std::map<std::size_t, std::set<std::size_t>> seen_;
};

std::int64_t count_from_json(const nlohmann::json& v, const std::string& where) {
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) throw ValidationError("count out of range at " + where);
    return static_cast<std::int64_t>(u);
  }
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x < 0) throw ValidationError("negative count at " + where);
  }
  throw ValidationError("count at " + where + " must be an integer");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

DatasetFormat format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".json") return DatasetFormat::kJson;
  if (ext == ".csv") return DatasetFormat::kCsv;
  throw ValidationError("unknown dataset extension '" + ext + "' (use .json or .csv)");
}

std::string dataset_to_json(const CountsDataset& data) {
  const int k = data.qubits();
  // ordered_json keeps settings and outcomes in canonical index order.
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (std::size_t d = 0; d < data.num_settings(); ++d) {
    if (!data.has_setting(d)) continue;
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    const auto c = data.counts(d);
    for (std::size_t s = 0; s < c.size(); ++s) row[Outcome(k, s).str()] = c[s];
    counts[Setting::from_index(k, d).str()] = std::move(row);
  }
  nlohmann::ordered_json doc;
  doc["k"] = k;
  doc["counts"] = std::move(counts);
  return doc.dump(1) + "\n";
}

CountsDataset dataset_from_json(std::string_view text) {
  // The callback rejects duplicate keys, which the DOM would silently merge.
  std::vector<std::set<std::string>> keys;
  std::string duplicate;
  auto cb = [&](int, nlohmann::json::parse_event_t ev, nlohmann::json& parsed) {
    switch (ev) {
      case nlohmann::json::parse_event_t::object_start:
        keys.emplace_back();
        break;
      case nlohmann::json::parse_event_t::object_end:
        keys.pop_back();
        break;
      case nlohmann::json::parse_event_t::key:
        if (!keys.back().insert(parsed.get<std::string>()).second && duplicate.empty())
          duplicate = parsed.get<std::string>();
        break;
      default:
        break;
    }
    return true;
  };
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end(), cb);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON dataset: ") + e.what());
  }
  if (!duplicate.empty()) throw ValidationError("duplicate key '" + duplicate + "' in JSON dataset");
  if (!doc.is_object() || !doc.contains("counts") || !doc["counts"].is_object())
    throw ValidationError("JSON dataset needs an object with a \"counts\" object");

  CellCollector cells;
  if (doc.contains("k")) {
    if (!doc["k"].is_number_integer()) throw ValidationError("\"k\" must be an integer");
    const int k = doc["k"].get<int>();
    if (k < 1) throw ValidationError("\"k\" must be >= 1");
    cells.expect_qubits(k);
  }
  for (const auto& [setting, row] : doc["counts"].items()) {
    if (!row.is_object()) throw ValidationError("counts of setting '" + setting + "' must be an object");
    cells.add_setting(setting);
    for (const auto& [outcome, value] : row.items())
      cells.add(setting, outcome, count_from_json(value, setting + "/" + outcome));
  }
  return cells.finish();
}

std::string dataset_to_csv(const CountsDataset& data) {
  const int k = data.qubits();
  std::string out = "setting,outcome,count\n";
  for (std::size_t d = 0; d < data.num_settings(); ++d) {
    if (!data.has_setting(d)) continue;
    const std::string ds = Setting::from_index(k, d).str();
    const auto c = data.counts(d);
    for (std::size_t s = 0; s < c.size(); ++s) {
      out += ds;
      out += ',';
      out += Outcome(k, s).str();
      out += ',';
      out += std::to_string(c[s]);
      out += '\n';
    }
  }
  return out;
}

CountsDataset dataset_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  CellCollector cells;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    if (!header) {
      std::string h = row;
      h.erase(std::remove(h.begin(), h.end(), ' '), h.end());
      std::transform(h.begin(), h.end(), h.begin(), [](unsigned char c) { return std::tolower(c); });
      if (h != "setting,outcome,count")
        throw ValidationError("CSV dataset must start with the header setting,outcome,count");
      header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream rs(row);
    std::string f;
    while (std::getline(rs, f, ',')) fields.push_back(trim(f));
    if (row.back() == ',') fields.emplace_back();
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 3) throw ValidationError("expected 3 fields at " + where);
    const std::string& c = fields[2];
    std::int64_t count = 0;
    const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
    if (ec != std::errc() || ptr != c.data() + c.size() || c.empty())
      throw ValidationError("count at " + where + " must be an integer");
    try {
      cells.add(fields[0], fields[1], count);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (!header) throw ValidationError("empty CSV dataset");
  return cells.finish();
}

CountsDataset load_dataset(const std::filesystem::path& path) {
  const DatasetFormat fmt = format_for_path(path);
  const std::string text = read_file(path);
  return fmt == DatasetFormat::kJson ? dataset_from_json(text) : dataset_from_csv(text);
}

void save_dataset(const CountsDataset& data, const std::filesystem::path& path) {
  const DatasetFormat fmt = format_for_path(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << (fmt == DatasetFormat::kJson ? dataset_to_json(data) : dataset_to_csv(data));
  if (!out) throw ValidationError("failed writing " + path.string());
}

}  // namespace qtomo
