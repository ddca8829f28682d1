// Copyright 2026 The accentid authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "accentid/augment/manifest.hpp"

#include <sstream>

#include "accentid/common/error.hpp"
#include "accentid/common/io.hpp"

namespace accentid {

using nlohmann::json;

json row_to_json(const ManifestRow& row) {
  json steps = json::array();
  for (const auto& step : row.augment) {
    steps.push_back(
        {{"kind", step.kind}, {"params", step.params}, {"seed", step.seed}});
  }
  json j = {{"utt_id", row.utt_id},   {"path", row.path},
            {"accent", row.accent},   {"speaker", row.speaker},
            {"origin", row.origin},   {"augment", steps}};
  if (!row.sha256.empty()) j["sha256"] = row.sha256;
  if (!row.labels.empty()) j["labels"] = row.labels;
  return j;
}

ManifestRow row_from_json(const json& j) {
  ManifestRow row;
  row.utt_id = j.at("utt_id").get<std::string>();
  row.path = j.at("path").get<std::string>();
  row.accent = j.at("accent").get<std::string>();
  row.speaker = j.at("speaker").get<std::string>();
  row.origin = j.at("origin").get<std::string>();
  for (const auto& s : j.at("augment")) {
    AugmentStep step;
    step.kind = s.at("kind").get<std::string>();
    step.params = s.at("params");
    step.seed = s.at("seed").get<uint64_t>();
    row.augment.push_back(std::move(step));
  }
  if (j.contains("sha256")) row.sha256 = j["sha256"].get<std::string>();
  if (j.contains("labels")) row.labels = j["labels"].get<std::string>();
  return row;
}

std::string encode_manifest(const Manifest& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row_to_json(row).dump();
    out += '\n';
  }
  return out;
}

Manifest decode_manifest(const std::string& text) {
  Manifest rows;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    ACCENTID_CHECK(!j.is_discarded(), ErrorCode::kFormat,
                   "manifest line " << lineno << " is not valid JSON");
    try {
      rows.push_back(row_from_json(j));
    } catch (const json::exception& e) {
      ACCENTID_CHECK(false, ErrorCode::kFormat,
                     "manifest line " << lineno << ": " << e.what());
    }
  }
  return rows;
}

void write_manifest(const std::string& path, const Manifest& rows) {
  write_file_text(path, encode_manifest(rows));
}

Manifest read_manifest(const std::string& path) {
  return decode_manifest(read_file_bytes(path));
}

}  // namespace accentid
