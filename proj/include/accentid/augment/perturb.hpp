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

#ifndef ACCENTID_AUGMENT_PERTURB_HPP_
#define ACCENTID_AUGMENT_PERTURB_HPP_

#include <string>
#include <vector>

#include "accentid/dsp/waveform.hpp"

namespace accentid {

enum class PerturbRole { kMusic, kAmbient, kBabble, kRir };

std::string perturb_role_name(PerturbRole role);

// Noise and impulse-response material for the conventional augmentation
// stage. RIR items are peak-normalized to |max| = 1.
struct PerturbationSet {
  std::vector<Waveform> music;
  std::vector<Waveform> ambient;
  std::vector<Waveform> babble;
  std::vector<Waveform> rirs;

  const std::vector<Waveform>& items(PerturbRole role) const;
  void validate() const;
};

// Directory layout: <dir>/<role>/<index>.wav plus an index.json manifest.
void save_perturbation_set(const PerturbationSet& set, const std::string& dir);
PerturbationSet load_perturbation_set(const std::string& dir);

}  // namespace accentid

#endif  // ACCENTID_AUGMENT_PERTURB_HPP_
