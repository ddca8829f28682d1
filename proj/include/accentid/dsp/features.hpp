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

#ifndef ACCENTID_DSP_FEATURES_HPP_
#define ACCENTID_DSP_FEATURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace accentid {

enum class FeatureKind : uint32_t {
  kFbank = 0,
  kPpg = 1,
  kPpgDelta = 2,
  kEmbedding = 3,
};

std::string feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(const std::string& name);

// T x D frame matrix, row-major. `normalized` records that per-dimension
// mean/variance normalization ran, which suspends the PPG simplex invariant.
struct FeatureMatrix {
  std::string utt_id;
  FeatureKind kind = FeatureKind::kFbank;
  float frame_shift_ms = 10.0f;
  int rows = 0;
  int cols = 0;
  bool normalized = false;
  std::vector<float> data;

  float at(int t, int d) const { return data[static_cast<size_t>(t) * cols + d]; }
  float& at(int t, int d) { return data[static_cast<size_t>(t) * cols + d]; }
  const float* row(int t) const { return data.data() + static_cast<size_t>(t) * cols; }
  float* row(int t) { return data.data() + static_cast<size_t>(t) * cols; }
};

// Checked constructor: enforces the per-kind shape and value invariants
// (finiteness; FBANK/PPG are 40-dim; PPG rows lie on the simplex within 1e-5
// unless normalized; PPG_DELTA is 120-dim).
FeatureMatrix make_feature_matrix(std::string utt_id, FeatureKind kind, int rows,
                                  int cols, std::vector<float> data,
                                  bool normalized = false,
                                  float frame_shift_ms = 10.0f);
void validate_features(const FeatureMatrix& feat);

// Delta regression window `window` with edge replication; stacks
// [static | delta | delta-delta], tripling the dimension.
FeatureMatrix compute_deltas(const FeatureMatrix& feat, int window = 2);

// Per-utterance, per-dimension zero mean / unit variance with a 1e-8
// variance floor. Requires at least two frames.
FeatureMatrix apply_cmvn(const FeatureMatrix& feat);

}  // namespace accentid

#endif  // ACCENTID_DSP_FEATURES_HPP_
