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

#include "accentid/dsp/waveform.hpp"

#include <cmath>
#include <cstdint>

#include "accentid/common/error.hpp"
#include "accentid/common/io.hpp"

namespace accentid {

void validate_waveform(const Waveform& wave) {
  ACCENTID_CHECK_ARG(wave.sample_rate > 0, "sample_rate must be positive");
  ACCENTID_CHECK_ARG(!wave.samples.empty(), "waveform is empty");
  for (float s : wave.samples) {
    ACCENTID_CHECK(std::isfinite(s), ErrorCode::kNumeric,
                   "non-finite sample in " << wave.utt_id);
  }
}

namespace {

constexpr uint16_t kPcmFormat = 1;

int16_t quantize(float v) {
  if (v > 1.0f) v = 1.0f;
  if (v < -1.0f) v = -1.0f;
  double scaled = static_cast<double>(v) * 32768.0;
  double q = (scaled >= 0.0) ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
  if (q > 32767.0) q = 32767.0;
  if (q < -32768.0) q = -32768.0;
  return static_cast<int16_t>(q);
}

}  // namespace

Waveform decode_wav(const std::string& bytes, const std::string& utt_id) {
  ACCENTID_CHECK(bytes.size() >= 12 && bytes.compare(0, 4, "RIFF") == 0 &&
                     bytes.compare(8, 4, "WAVE") == 0,
                 ErrorCode::kFormat, "not a RIFF/WAVE file");
  size_t pos = 12;
  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  Waveform wave;
  wave.utt_id = utt_id;
  bool have_data = false;
  while (pos + 8 <= bytes.size()) {
    std::string chunk_id = bytes.substr(pos, 4);
    pos += 4;
    uint32_t chunk_size = get_u32(bytes, pos);
    ACCENTID_CHECK(pos + chunk_size <= bytes.size(), ErrorCode::kFormat,
                   "truncated chunk " << chunk_id);
    if (chunk_id == "fmt ") {
      ACCENTID_CHECK(chunk_size >= 16, ErrorCode::kFormat, "short fmt chunk");
      size_t p = pos;
      format = static_cast<uint16_t>(get_u32(bytes, p) & 0xffff);
      p = pos + 2;
      channels = static_cast<uint16_t>(get_u32(bytes, p) & 0xffff);
      p = pos + 4;
      rate = get_u32(bytes, p);
      p = pos + 14;
      bits = static_cast<uint16_t>(get_u32(bytes, p) & 0xffff);
      have_fmt = true;
    } else if (chunk_id == "data") {
      ACCENTID_CHECK(have_fmt, ErrorCode::kFormat, "data chunk before fmt");
      ACCENTID_CHECK(format == kPcmFormat && bits == 16, ErrorCode::kUnsupported,
                     "only PCM16 supported (format=" << format << ", bits="
                                                     << bits << ")");
      ACCENTID_CHECK(channels == 1, ErrorCode::kUnsupported,
                     "only mono supported (channels=" << channels << ")");
      ACCENTID_CHECK(chunk_size % 2 == 0, ErrorCode::kFormat,
                     "odd PCM16 data size");
      size_t n = chunk_size / 2;
      wave.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        uint16_t lo = static_cast<uint8_t>(bytes[pos + 2 * i]);
        uint16_t hi = static_cast<uint8_t>(bytes[pos + 2 * i + 1]);
        int16_t s = static_cast<int16_t>(lo | (hi << 8));
        wave.samples[i] = static_cast<float>(s) / 32768.0f;
      }
      have_data = true;
    }
    pos += chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  ACCENTID_CHECK(have_fmt && have_data, ErrorCode::kFormat,
                 "missing fmt or data chunk");
  ACCENTID_CHECK(rate > 0, ErrorCode::kFormat, "zero sample rate");
  wave.sample_rate = static_cast<int>(rate);
  ACCENTID_CHECK_ARG(!wave.samples.empty(), "empty data chunk");
  return wave;
}

Waveform read_wav(const std::string& path) {
  std::string bytes = read_file_bytes(path);
  std::string utt_id = path;
  size_t slash = utt_id.find_last_of('/');
  if (slash != std::string::npos) utt_id = utt_id.substr(slash + 1);
  size_t dot = utt_id.find_last_of('.');
  if (dot != std::string::npos) utt_id = utt_id.substr(0, dot);
  return decode_wav(bytes, utt_id);
}

std::string encode_wav(const Waveform& wave) {
  validate_waveform(wave);
  uint32_t n = static_cast<uint32_t>(wave.samples.size());
  uint32_t data_bytes = 2 * n;
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u32(out, kPcmFormat | (uint32_t{1} << 16));  // format, channels
  put_u32(out, static_cast<uint32_t>(wave.sample_rate));
  put_u32(out, static_cast<uint32_t>(wave.sample_rate) * 2);  // byte rate
  put_u32(out, 2 | (uint32_t{16} << 16));  // block align, bits per sample
  out += "data";
  put_u32(out, data_bytes);
  for (float v : wave.samples) {
    uint16_t bits = static_cast<uint16_t>(quantize(v));
    out.push_back(static_cast<char>(bits & 0xff));
    out.push_back(static_cast<char>(bits >> 8));
  }
  return out;
}

void write_wav(const Waveform& wave, const std::string& path) {
  write_file_bytes(path, encode_wav(wave));
}

}  // namespace accentid
