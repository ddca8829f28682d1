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

#include "accentid/dsp/fbank.hpp"

#include <cmath>

#include "accentid/common/error.hpp"
#include "accentid/dsp/fft.hpp"

namespace accentid {

int FbankConfig::win_samples(int sample_rate) const {
  return static_cast<int>(std::llround(win_ms * sample_rate / 1000.0));
}

int FbankConfig::hop_samples(int sample_rate) const {
  return static_cast<int>(std::llround(hop_ms * sample_rate / 1000.0));
}

void FbankConfig::validate(int sample_rate) const {
  ACCENTID_CHECK_ARG(sample_rate > 0, "bad sample rate");
  ACCENTID_CHECK_ARG(win_ms > 0 && hop_ms > 0, "window and hop must be > 0");
  ACCENTID_CHECK_ARG(n_mels > 0, "n_mels must be > 0");
  ACCENTID_CHECK_ARG(log_floor > 0, "log_floor must be > 0");
  ACCENTID_CHECK_ARG(fft_size > 0 && (fft_size & (fft_size - 1)) == 0,
                     "fft_size must be a power of two");
  ACCENTID_CHECK_ARG(fft_size >= win_samples(sample_rate),
                     "fft_size smaller than the analysis window");
  ACCENTID_CHECK_ARG(0.0 <= fmin_hz && fmin_hz < fmax_hz &&
                         fmax_hz <= sample_rate / 2.0,
                     "mel band edges outside [0, Nyquist]");
}

double hz_to_mel(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::exp(mel / 1127.0) - 1.0); }

namespace {

// Mel grid points: n_mels + 2 equally spaced values from mel(fmin) to
// mel(fmax). Filter j spans [m_j, m_{j+2}] with its peak at m_{j+1}.
std::vector<double> mel_grid(const FbankConfig& cfg) {
  std::vector<double> grid(cfg.n_mels + 2);
  double lo = hz_to_mel(cfg.fmin_hz), hi = hz_to_mel(cfg.fmax_hz);
  for (int i = 0; i < cfg.n_mels + 2; ++i) {
    grid[i] = lo + (hi - lo) * i / (cfg.n_mels + 1);
  }
  return grid;
}

}  // namespace

std::vector<double> mel_center_frequencies(const FbankConfig& cfg) {
  std::vector<double> grid = mel_grid(cfg);
  std::vector<double> centers(cfg.n_mels);
  for (int j = 0; j < cfg.n_mels; ++j) centers[j] = mel_to_hz(grid[j + 1]);
  return centers;
}

int fbank_num_frames(int num_samples, int sample_rate, const FbankConfig& cfg) {
  int win = cfg.win_samples(sample_rate);
  int hop = cfg.hop_samples(sample_rate);
  if (num_samples < win) return 0;
  return 1 + (num_samples - win) / hop;
}

FeatureMatrix compute_fbank(const Waveform& wave, const FbankConfig& cfg) {
  validate_waveform(wave);
  cfg.validate(wave.sample_rate);
  const int win = cfg.win_samples(wave.sample_rate);
  const int hop = cfg.hop_samples(wave.sample_rate);
  const int num_frames = fbank_num_frames(wave.num_samples(), wave.sample_rate, cfg);
  ACCENTID_CHECK_ARG(num_frames >= 1,
                     "utterance shorter than one window ("
                         << wave.num_samples() << " < " << win << " samples)");

  std::vector<double> window(win);
  for (int n = 0; n < win; ++n) {
    window[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / win);
  }

  // Triangular filterbank weights over FFT bin center frequencies.
  const int n_bins = cfg.fft_size / 2 + 1;
  std::vector<double> grid = mel_grid(cfg);
  std::vector<std::vector<std::pair<int, double>>> filters(cfg.n_mels);
  for (int k = 0; k < n_bins; ++k) {
    double hz = static_cast<double>(k) * wave.sample_rate / cfg.fft_size;
    double mel = hz_to_mel(hz);
    for (int j = 0; j < cfg.n_mels; ++j) {
      double left = grid[j], center = grid[j + 1], right = grid[j + 2];
      if (mel <= left || mel >= right) continue;
      double w = (mel <= center) ? (mel - left) / (center - left)
                                 : (right - mel) / (right - center);
      if (w > 0.0) filters[j].push_back({k, w});
    }
  }

  std::vector<float> out(static_cast<size_t>(num_frames) * cfg.n_mels);
  std::vector<double> frame(win);
  for (int t = 0; t < num_frames; ++t) {
    const float* src = wave.samples.data() + static_cast<size_t>(t) * hop;
    for (int n = 0; n < win; ++n) frame[n] = src[n] * window[n];
    std::vector<double> power = power_spectrum(frame, cfg.fft_size);
    for (int j = 0; j < cfg.n_mels; ++j) {
      double energy = 0.0;
      for (const auto& [k, w] : filters[j]) energy += w * power[k];
      if (energy < cfg.log_floor) energy = cfg.log_floor;
      out[static_cast<size_t>(t) * cfg.n_mels + j] =
          static_cast<float>(std::log(energy));
    }
  }
  return make_feature_matrix(wave.utt_id, FeatureKind::kFbank, num_frames,
                             cfg.n_mels, std::move(out), false,
                             static_cast<float>(cfg.hop_ms));
}

}  // namespace accentid
