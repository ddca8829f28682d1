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

#include "accentid/dsp/farc.hpp"

#include "accentid/common/error.hpp"
#include "accentid/common/io.hpp"

namespace accentid {

namespace {
constexpr char kMagic[] = "FARC1";
constexpr uint32_t kNormalizedBit = uint32_t{1} << 31;
}  // namespace

std::string encode_farc(const std::vector<FeatureMatrix>& records) {
  std::string out(kMagic, 5);
  for (const auto& rec : records) {
    validate_features(rec);
    put_u32(out, static_cast<uint32_t>(rec.utt_id.size()));
    out += rec.utt_id;
    uint32_t tag = static_cast<uint32_t>(rec.kind);
    if (rec.normalized) tag |= kNormalizedBit;
    put_u32(out, tag);
    put_u32(out, static_cast<uint32_t>(rec.rows));
    put_u32(out, static_cast<uint32_t>(rec.cols));
    for (float v : rec.data) put_f32(out, v);
  }
  return out;
}

std::vector<FeatureMatrix> decode_farc(const std::string& bytes) {
  ACCENTID_CHECK(bytes.size() >= 5 && bytes.compare(0, 5, kMagic) == 0,
                 ErrorCode::kFormat, "not a FARC1 archive");
  std::vector<FeatureMatrix> records;
  size_t pos = 5;
  while (pos < bytes.size()) {
    uint32_t id_len = get_u32(bytes, pos);
    ACCENTID_CHECK(pos + id_len <= bytes.size(), ErrorCode::kFormat,
                   "truncated utt_id");
    std::string utt_id = bytes.substr(pos, id_len);
    pos += id_len;
    uint32_t tag = get_u32(bytes, pos);
    bool normalized = (tag & kNormalizedBit) != 0;
    uint32_t kind_raw = tag & ~kNormalizedBit;
    ACCENTID_CHECK(kind_raw <= 3, ErrorCode::kFormat,
                   "unknown feature kind tag " << kind_raw);
    uint32_t rows = get_u32(bytes, pos);
    uint32_t cols = get_u32(bytes, pos);
    size_t count = static_cast<size_t>(rows) * cols;
    ACCENTID_CHECK(pos + 4 * count <= bytes.size(), ErrorCode::kFormat,
                   "truncated record data for " << utt_id);
    std::vector<float> data(count);
    for (size_t i = 0; i < count; ++i) data[i] = get_f32(bytes, pos);
    records.push_back(make_feature_matrix(std::move(utt_id),
                                          static_cast<FeatureKind>(kind_raw),
                                          static_cast<int>(rows),
                                          static_cast<int>(cols),
                                          std::move(data), normalized));
  }
  return records;
}

void write_farc(const std::string& path, const std::vector<FeatureMatrix>& records) {
  write_file_bytes(path, encode_farc(records));
}

std::vector<FeatureMatrix> read_farc(const std::string& path) {
  return decode_farc(read_file_bytes(path));
}

std::unordered_map<std::string, size_t> farc_index(
    const std::vector<FeatureMatrix>& records) {
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] = index.emplace(records[i].utt_id, i);
    ACCENTID_CHECK(inserted, ErrorCode::kFormat,
                   "duplicate utt_id in archive: " << records[i].utt_id);
  }
  return index;
}

}  // namespace accentid
