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

#include "accentid/augment/perturb.hpp"

#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "accentid/common/error.hpp"
#include "accentid/common/io.hpp"

namespace accentid {

using nlohmann::json;

std::string perturb_role_name(PerturbRole role) {
  switch (role) {
    case PerturbRole::kMusic:
      return "music";
    case PerturbRole::kAmbient:
      return "ambient";
    case PerturbRole::kBabble:
      return "babble";
    case PerturbRole::kRir:
      return "rir";
  }
  return "unknown";
}

const std::vector<Waveform>& PerturbationSet::items(PerturbRole role) const {
  switch (role) {
    case PerturbRole::kMusic:
      return music;
    case PerturbRole::kAmbient:
      return ambient;
    case PerturbRole::kBabble:
      return babble;
    case PerturbRole::kRir:
      return rirs;
  }
  return music;
}

void PerturbationSet::validate() const {
  ACCENTID_CHECK_ARG(!music.empty() && !ambient.empty() && !babble.empty() &&
                         !rirs.empty(),
                     "perturbation set has an empty role");
  for (const auto& rir : rirs) {
    float peak = 0.0f;
    for (float v : rir.samples) peak = std::max(peak, std::abs(v));
    ACCENTID_CHECK_ARG(std::abs(peak - 1.0f) <= 1e-3f,
                       "RIR " << rir.utt_id << " not peak-normalized");
  }
}

namespace {

void save_role(const std::vector<Waveform>& items, const std::string& dir,
               const std::string& role, json& index) {
  json files = json::array();
  for (size_t i = 0; i < items.size(); ++i) {
    std::string rel = role + "/" + std::to_string(i) + ".wav";
    write_wav(items[i], dir + "/" + rel);
    files.push_back(rel);
  }
  index[role] = files;
}

std::vector<Waveform> load_role(const std::string& dir, const json& index,
                                const std::string& role) {
  std::vector<Waveform> items;
  for (const auto& rel : index.at(role)) {
    items.push_back(read_wav(dir + "/" + rel.get<std::string>()));
  }
  return items;
}

}  // namespace

void save_perturbation_set(const PerturbationSet& set, const std::string& dir) {
  set.validate();
  std::filesystem::create_directories(dir);
  json index;
  save_role(set.music, dir, "music", index);
  save_role(set.ambient, dir, "ambient", index);
  save_role(set.babble, dir, "babble", index);
  save_role(set.rirs, dir, "rir", index);
  write_file_text(dir + "/index.json", index.dump(2) + "\n");
}

PerturbationSet load_perturbation_set(const std::string& dir) {
  json index = json::parse(read_file_bytes(dir + "/index.json"));
  PerturbationSet set;
  set.music = load_role(dir, index, "music");
  set.ambient = load_role(dir, index, "ambient");
  set.babble = load_role(dir, index, "babble");
  set.rirs = load_role(dir, index, "rir");
  set.validate();
  return set;
}

}  // namespace accentid
