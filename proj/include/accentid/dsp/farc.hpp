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

#ifndef ACCENTID_DSP_FARC_HPP_
#define ACCENTID_DSP_FARC_HPP_

#include <string>
#include <unordered_map>
#include <vector>

#include "accentid/dsp/features.hpp"

namespace accentid {

// FARC feature archive. Bit-exact layout, little-endian throughout:
//   magic "FARC1"
//   per record:
//     u32 id_len, id_len bytes of UTF-8 utt_id
//     u32 kind tag   (low bits: FeatureKind; bit 31: normalized flag)
//     u32 T, u32 D
//     T*D f32 row-major values
std::string encode_farc(const std::vector<FeatureMatrix>& records);
std::vector<FeatureMatrix> decode_farc(const std::string& bytes);

void write_farc(const std::string& path, const std::vector<FeatureMatrix>& records);
std::vector<FeatureMatrix> read_farc(const std::string& path);

// utt_id -> index into the record vector; duplicate ids are rejected.
std::unordered_map<std::string, size_t> farc_index(
    const std::vector<FeatureMatrix>& records);

}  // namespace accentid

#endif  // ACCENTID_DSP_FARC_HPP_
