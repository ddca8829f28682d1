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

#ifndef ACCENTID_AUGMENT_MANIFEST_HPP_
#define ACCENTID_AUGMENT_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace accentid {

// One recorded augmentation applied on the way from the root utterance to
// this row. Params are enough to replay the step exactly, together with the
// seed.
struct AugmentStep {
  std::string kind;  // "tempo" | "noise" | "reverb" | "tts"
  nlohmann::json params;
  uint64_t seed = 0;
};

// One corpus row. `origin` is the utt_id of the root (unaugmented) utterance;
// for base rows origin == utt_id and the augment chain is empty. `sha256`
// hashes the audio file bytes. `labels` optionally points at a frame-label
// file.
struct ManifestRow {
  std::string utt_id;
  std::string path;
  std::string accent;
  std::string speaker;
  std::string origin;
  std::vector<AugmentStep> augment;
  std::string sha256;
  std::string labels;
};

using Manifest = std::vector<ManifestRow>;

nlohmann::json row_to_json(const ManifestRow& row);
ManifestRow row_from_json(const nlohmann::json& j);

std::string encode_manifest(const Manifest& rows);
Manifest decode_manifest(const std::string& text);

void write_manifest(const std::string& path, const Manifest& rows);
Manifest read_manifest(const std::string& path);

}  // namespace accentid

#endif  // ACCENTID_AUGMENT_MANIFEST_HPP_
