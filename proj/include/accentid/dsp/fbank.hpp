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

#ifndef ACCENTID_DSP_FBANK_HPP_
#define ACCENTID_DSP_FBANK_HPP_

#include <vector>

#include "accentid/dsp/features.hpp"
#include "accentid/dsp/waveform.hpp"

namespace accentid {

struct FbankConfig {
  double win_ms = 25.0;
  double hop_ms = 10.0;
  int fft_size = 512;
  int n_mels = 40;
  double fmin_hz = 20.0;
  double fmax_hz = 7600.0;
  double log_floor = 1e-10;

  int win_samples(int sample_rate) const;
  int hop_samples(int sample_rate) const;
  void validate(int sample_rate) const;
};

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Center frequencies (Hz) of the n_mels triangular filters, i.e. the interior
// points of the equally spaced mel grid between fmin and fmax.
std::vector<double> mel_center_frequencies(const FbankConfig& cfg);

// Frames with a periodic Hann window, takes |FFT|^2, applies the triangular
// mel filterbank and a floored natural log. T = 1 + floor((N - win) / hop).
FeatureMatrix compute_fbank(const Waveform& wave, const FbankConfig& cfg = {});

int fbank_num_frames(int num_samples, int sample_rate, const FbankConfig& cfg = {});

}  // namespace accentid

#endif  // ACCENTID_DSP_FBANK_HPP_
