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

#ifndef ACCENTID_COMMON_SHA256_HPP_
#define ACCENTID_COMMON_SHA256_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace accentid {

// Streaming SHA-256 (FIPS 180-4). Used for checkpoint blob integrity,
// artifact provenance, and content-hash caching.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  // Finalizes and returns the lowercase hex digest. The object must not be
  // updated afterwards.
  std::string hex_digest();

 private:
  void process_block(const uint8_t* block);
  uint32_t h_[8];
  uint8_t buffer_[64];
  size_t buffer_len_;
  uint64_t total_len_;
};

std::string sha256_hex(std::string_view data);
std::string sha256_hex(const void* data, size_t len);
std::string sha256_file_hex(const std::string& path);

}  // namespace accentid

#endif  // ACCENTID_COMMON_SHA256_HPP_
