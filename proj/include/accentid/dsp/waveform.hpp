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

#ifndef ACCENTID_DSP_WAVEFORM_HPP_
#define ACCENTID_DSP_WAVEFORM_HPP_

#include <string>
#include <vector>

namespace accentid {

// Mono audio in [-1, 1]. The pipeline default rate is 16 kHz but nothing
// below assumes it.
struct Waveform {
  std::string utt_id;
  int sample_rate = 16000;
  std::vector<float> samples;

  int num_samples() const { return static_cast<int>(samples.size()); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Throws kInvalidArgument / kNumeric when the waveform invariants are broken.
void validate_waveform(const Waveform& wave);

// Reads a RIFF/WAVE file. Only PCM16 mono is accepted: other encodings or
// channel counts raise kUnsupported, structural problems raise kFormat.
// Samples are scaled by 1/32768.
Waveform read_wav(const std::string& path);

// Writes PCM16 mono. Samples are clamped to [-1, 1] and rounded
// half-away-from-zero, so +1.0 stores 32767 and -1.0 stores -32768.
void write_wav(const Waveform& wave, const std::string& path);

// In-memory variants used by tests and the corpus generator.
Waveform decode_wav(const std::string& bytes, const std::string& utt_id);
std::string encode_wav(const Waveform& wave);

}  // namespace accentid

#endif  // ACCENTID_DSP_WAVEFORM_HPP_
