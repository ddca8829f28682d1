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

#ifndef ACCENTID_AUGMENT_AUGMENT_HPP_
#define ACCENTID_AUGMENT_AUGMENT_HPP_

#include <cstdint>

#include "accentid/augment/manifest.hpp"
#include "accentid/augment/perturb.hpp"
#include "accentid/dsp/waveform.hpp"

namespace accentid {

// WSOLA time-scale modification. Output duration is round(len / factor);
// pitch and spectral envelope are preserved because output frames are
// verbatim input segments. Synthesis frames are 30 ms with 50% Hann
// overlap-add and the analysis position search spans +-7.5 ms, maximizing
// normalized cross-correlation against the natural continuation of the
// previous frame. factor == 1.0 returns the input unchanged. The seed is
// recorded in provenance but the algorithm itself is search-based and
// deterministic.
Waveform tempo_perturb(const Waveform& wave, double factor, uint64_t seed);

// Loops/crops `noise` at a seeded random offset to the signal length, then
// scales it so that 10*log10(P_signal / P_noise) == snr_db with P the mean
// square over the whole utterance. The sum is clamped to [-1, 1]. If
// `scaled_noise_out` is non-null it receives the noise component actually
// added, which lets callers re-measure the realized SNR.
Waveform mix_noise_at_snr(const Waveform& wave, const Waveform& noise,
                          double snr_db, uint64_t seed,
                          Waveform* scaled_noise_out = nullptr);

// Full linear convolution with `rir`, truncated to the input length and
// rescaled so the output peak equals the input peak.
Waveform apply_rir(const Waveform& wave, const Waveform& rir);

// Re-applies a recorded augmentation chain to a root utterance. Noise and
// RIR references are resolved against `set`.
Waveform replay_augment_chain(const Waveform& root,
                              const std::vector<AugmentStep>& chain,
                              const PerturbationSet& set);

}  // namespace accentid

#endif  // ACCENTID_AUGMENT_AUGMENT_HPP_
