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

#include "accentid/common/io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "accentid/common/error.hpp"

namespace accentid {

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  ACCENTID_CHECK(in.good(), ErrorCode::kIo, "cannot open " << path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  ACCENTID_CHECK(!in.bad(), ErrorCode::kIo, "read failed for " << path);
  return bytes;
}

void write_file_bytes(const std::string& path, std::string_view bytes) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  ACCENTID_CHECK(out.good(), ErrorCode::kIo, "cannot create " << path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  ACCENTID_CHECK(out.good(), ErrorCode::kIo, "write failed for " << path);
}

void write_file_text(const std::string& path, std::string_view text) {
  write_file_bytes(path, text);
}

void put_u32(std::string& out, uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.append(b, 4);
}

void put_u64(std::string& out, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.append(b, 8);
}

void put_f32(std::string& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

uint32_t get_u32(const std::string& in, size_t& pos) {
  ACCENTID_CHECK(pos + 4 <= in.size(), ErrorCode::kFormat, "truncated u32");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= uint32_t(static_cast<uint8_t>(in[pos + i])) << (8 * i);
  }
  pos += 4;
  return v;
}

uint64_t get_u64(const std::string& in, size_t& pos) {
  ACCENTID_CHECK(pos + 8 <= in.size(), ErrorCode::kFormat, "truncated u64");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= uint64_t(static_cast<uint8_t>(in[pos + i])) << (8 * i);
  }
  pos += 8;
  return v;
}

float get_f32(const std::string& in, size_t& pos) {
  uint32_t bits = get_u32(in, pos);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace accentid
