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

#ifndef ACCENTID_DSP_FFT_HPP_
#define ACCENTID_DSP_FFT_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace accentid {

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& x, bool inverse = false);

size_t next_pow2(size_t n);

// Power spectrum |X_k|^2 for k in [0, n/2], zero-padding the input to n.
std::vector<double> power_spectrum(const std::vector<double>& frame, size_t n);

// Linear convolution via FFT overlap of the whole (zero-padded) signals.
// Output length is a.size() + b.size() - 1.
std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b);

}  // namespace accentid

#endif  // ACCENTID_DSP_FFT_HPP_
