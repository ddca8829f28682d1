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

#ifndef ACCENTID_COMMON_IO_HPP_
#define ACCENTID_COMMON_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace accentid {

std::string read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::string_view bytes);
// Writes lines of text; caller supplies trailing newlines.
void write_file_text(const std::string& path, std::string_view text);

// Little-endian scalar IO. All binary formats in this project are
// little-endian regardless of host order.
void put_u32(std::string& out, uint32_t v);
void put_u64(std::string& out, uint64_t v);
void put_f32(std::string& out, float v);
uint32_t get_u32(const std::string& in, size_t& pos);
uint64_t get_u64(const std::string& in, size_t& pos);
float get_f32(const std::string& in, size_t& pos);

}  // namespace accentid

#endif  // ACCENTID_COMMON_IO_HPP_
