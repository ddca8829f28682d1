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

#ifndef ACCENTID_AUGMENT_EXPAND_HPP_
#define ACCENTID_AUGMENT_EXPAND_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "accentid/augment/manifest.hpp"
#include "accentid/augment/perturb.hpp"

namespace accentid {

struct ConvAugmentConfig {
  std::vector<double> tempo_factors = {0.8, 0.9, 1.1, 1.2};
  double snr_lo_db = 5.0;
  double snr_hi_db = 20.0;
  unsigned num_threads = 0;  // 0 = hardware concurrency
};

// Conventional augmentation policy. Stage 1 gives every utterance one tempo
// copy at a seeded-uniform factor (x2 rows). Stage 2 gives each of those four
// more copies: music, ambient noise, and babble at a seeded SNR, plus one
// reverberated copy (x5), for x10 total. New audio lands under
// <out_dir>/wav/, provenance (parent id, augment chain, audio hash) is
// recorded per row, and per-row seeds are derived from (seed, utt_id, stage)
// so parallel execution order never changes the result. Rows that already
// carry an augment chain are rejected: expansion does not compose.
Manifest expand_training_manifest(const Manifest& manifest,
                                  const ConvAugmentConfig& cfg,
                                  const PerturbationSet& corpora, uint64_t seed,
                                  const std::string& out_dir);

}  // namespace accentid

#endif  // ACCENTID_AUGMENT_EXPAND_HPP_
