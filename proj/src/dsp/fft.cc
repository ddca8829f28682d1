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

#include "accentid/dsp/fft.hpp"

#include <cmath>

#include "accentid/common/error.hpp"

namespace accentid {

void fft_inplace(std::vector<std::complex<double>>& x, bool inverse) {
  const size_t n = x.size();
  ACCENTID_CHECK_ARG(n > 0 && (n & (n - 1)) == 0, "FFT size must be 2^k");
  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double angle = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1 : -1);
    std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = x[i + k];
        std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& v : x) v /= static_cast<double>(n);
  }
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> power_spectrum(const std::vector<double>& frame, size_t n) {
  ACCENTID_CHECK_ARG(frame.size() <= n, "frame longer than FFT size");
  std::vector<std::complex<double>> buf(n, {0.0, 0.0});
  for (size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  fft_inplace(buf);
  std::vector<double> power(n / 2 + 1);
  for (size_t k = 0; k <= n / 2; ++k) power[k] = std::norm(buf[k]);
  return power;
}

std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  ACCENTID_CHECK_ARG(!a.empty() && !b.empty(), "convolve: empty input");
  size_t out_len = a.size() + b.size() - 1;
  size_t n = next_pow2(out_len);
  std::vector<std::complex<double>> fa(n, {0.0, 0.0}), fb(n, {0.0, 0.0});
  for (size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  fft_inplace(fa);
  fft_inplace(fb);
  for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft_inplace(fa, /*inverse=*/true);
  std::vector<double> out(out_len);
  for (size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

}  // namespace accentid
