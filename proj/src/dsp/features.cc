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

#include "accentid/dsp/features.hpp"

#include <cmath>

#include "accentid/common/error.hpp"

namespace accentid {

std::string feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kFbank:
      return "fbank";
    case FeatureKind::kPpg:
      return "ppg";
    case FeatureKind::kPpgDelta:
      return "ppg_delta";
    case FeatureKind::kEmbedding:
      return "embedding";
  }
  return "unknown";
}

FeatureKind feature_kind_from_name(const std::string& name) {
  if (name == "fbank") return FeatureKind::kFbank;
  if (name == "ppg") return FeatureKind::kPpg;
  if (name == "ppg_delta") return FeatureKind::kPpgDelta;
  if (name == "embedding") return FeatureKind::kEmbedding;
  ACCENTID_CHECK_ARG(false, "unknown feature kind: " << name);
  return FeatureKind::kFbank;
}

void validate_features(const FeatureMatrix& feat) {
  ACCENTID_CHECK_ARG(feat.rows >= 0 && feat.cols > 0, "bad feature shape");
  ACCENTID_CHECK_ARG(
      feat.data.size() == static_cast<size_t>(feat.rows) * feat.cols,
      "feature data size mismatch");
  for (float v : feat.data) {
    ACCENTID_CHECK(std::isfinite(v), ErrorCode::kNumeric,
                   "non-finite feature value in " << feat.utt_id);
  }
  switch (feat.kind) {
    case FeatureKind::kFbank:
      ACCENTID_CHECK_ARG(feat.cols == 40, "FBANK features must be 40-dim");
      break;
    case FeatureKind::kPpg: {
      ACCENTID_CHECK_ARG(feat.cols == 40, "PPG features must be 40-dim");
      if (!feat.normalized) {
        for (int t = 0; t < feat.rows; ++t) {
          double sum = 0.0;
          for (int d = 0; d < feat.cols; ++d) {
            float v = feat.at(t, d);
            ACCENTID_CHECK_ARG(v >= 0.0f, "negative PPG entry");
            sum += v;
          }
          ACCENTID_CHECK_ARG(std::abs(sum - 1.0) <= 1e-5,
                             "PPG row " << t << " sums to " << sum);
        }
      }
      break;
    }
    case FeatureKind::kPpgDelta:
      ACCENTID_CHECK_ARG(feat.cols == 120, "delta-stacked PPG must be 120-dim");
      break;
    case FeatureKind::kEmbedding:
      break;
  }
}

FeatureMatrix make_feature_matrix(std::string utt_id, FeatureKind kind, int rows,
                                  int cols, std::vector<float> data,
                                  bool normalized, float frame_shift_ms) {
  FeatureMatrix feat;
  feat.utt_id = std::move(utt_id);
  feat.kind = kind;
  feat.rows = rows;
  feat.cols = cols;
  feat.data = std::move(data);
  feat.normalized = normalized;
  feat.frame_shift_ms = frame_shift_ms;
  validate_features(feat);
  return feat;
}

namespace {

// One pass of the symmetric regression delta with edge replication.
void delta_pass(const std::vector<float>& in, int t_dim, int d_dim, int window,
                std::vector<float>& out) {
  double denom = 0.0;
  for (int n = 1; n <= window; ++n) denom += 2.0 * n * n;
  auto clamp_t = [&](int t) { return t < 0 ? 0 : (t >= t_dim ? t_dim - 1 : t); };
  for (int t = 0; t < t_dim; ++t) {
    for (int d = 0; d < d_dim; ++d) {
      double acc = 0.0;
      for (int n = 1; n <= window; ++n) {
        double fwd = in[static_cast<size_t>(clamp_t(t + n)) * d_dim + d];
        double bwd = in[static_cast<size_t>(clamp_t(t - n)) * d_dim + d];
        acc += n * (fwd - bwd);
      }
      out[static_cast<size_t>(t) * d_dim + d] = static_cast<float>(acc / denom);
    }
  }
}

}  // namespace

FeatureMatrix compute_deltas(const FeatureMatrix& feat, int window) {
  ACCENTID_CHECK_ARG(
      feat.kind == FeatureKind::kPpg || feat.kind == FeatureKind::kFbank,
      "compute_deltas expects PPG (or FBANK) input");
  ACCENTID_CHECK_ARG(window >= 1, "delta window must be >= 1");
  ACCENTID_CHECK_ARG(feat.rows >= 1, "compute_deltas needs at least one frame");
  int t_dim = feat.rows, d_dim = feat.cols;
  std::vector<float> d1(feat.data.size()), d2(feat.data.size());
  delta_pass(feat.data, t_dim, d_dim, window, d1);
  delta_pass(d1, t_dim, d_dim, window, d2);
  std::vector<float> stacked(static_cast<size_t>(t_dim) * d_dim * 3);
  for (int t = 0; t < t_dim; ++t) {
    float* dst = stacked.data() + static_cast<size_t>(t) * d_dim * 3;
    const float* src = feat.row(t);
    for (int d = 0; d < d_dim; ++d) dst[d] = src[d];
    for (int d = 0; d < d_dim; ++d) dst[d_dim + d] = d1[static_cast<size_t>(t) * d_dim + d];
    for (int d = 0; d < d_dim; ++d) dst[2 * d_dim + d] = d2[static_cast<size_t>(t) * d_dim + d];
  }
  return make_feature_matrix(feat.utt_id, FeatureKind::kPpgDelta, t_dim,
                             3 * d_dim, std::move(stacked), feat.normalized,
                             feat.frame_shift_ms);
}

FeatureMatrix apply_cmvn(const FeatureMatrix& feat) {
  ACCENTID_CHECK_ARG(feat.rows >= 2, "apply_cmvn needs at least two frames");
  constexpr double kVarFloor = 1e-8;
  FeatureMatrix out = feat;
  out.normalized = true;
  for (int d = 0; d < feat.cols; ++d) {
    double sum = 0.0, sq = 0.0;
    for (int t = 0; t < feat.rows; ++t) {
      double v = feat.at(t, d);
      sum += v;
      sq += v * v;
    }
    double mean = sum / feat.rows;
    double var = sq / feat.rows - mean * mean;
    if (var < kVarFloor) var = kVarFloor;
    double inv_std = 1.0 / std::sqrt(var);
    for (int t = 0; t < feat.rows; ++t) {
      out.at(t, d) = static_cast<float>((feat.at(t, d) - mean) * inv_std);
    }
  }
  validate_features(out);
  return out;
}

}  // namespace accentid
