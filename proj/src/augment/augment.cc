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

#include "accentid/augment/augment.hpp"

#include <cmath>

#include "accentid/common/error.hpp"
#include "accentid/common/rng.hpp"
#include "accentid/dsp/fft.hpp"

namespace accentid {

namespace {

double mean_square(const std::vector<float>& x) {
  double acc = 0.0;
  for (float v : x) acc += static_cast<double>(v) * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

float peak_abs(const std::vector<float>& x) {
  float peak = 0.0f;
  for (float v : x) peak = std::max(peak, std::abs(v));
  return peak;
}

}  // namespace

Waveform tempo_perturb(const Waveform& wave, double factor, uint64_t seed) {
  (void)seed;  // recorded in provenance only
  validate_waveform(wave);
  ACCENTID_CHECK_ARG(factor >= 0.5 && factor <= 2.0,
                     "tempo factor " << factor << " outside [0.5, 2.0]");
  if (factor == 1.0) return wave;

  const int sr = wave.sample_rate;
  const int frame = static_cast<int>(std::llround(0.030 * sr));
  const int hop = frame / 2;
  const int search = static_cast<int>(std::llround(0.0075 * sr));
  const int n_in = wave.num_samples();
  ACCENTID_CHECK_ARG(n_in >= 2 * frame,
                     "input shorter than two synthesis frames");

  const int n_out = static_cast<int>(std::llround(n_in / factor));
  std::vector<double> window(frame);
  for (int n = 0; n < frame; ++n) {
    window[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / frame);
  }

  auto sample_at = [&](long long i) -> double {
    return (i >= 0 && i < n_in) ? wave.samples[static_cast<size_t>(i)] : 0.0;
  };

  std::vector<double> acc(n_out, 0.0), weight(n_out, 0.0);
  long long prev_in = 0;
  const int num_frames = n_out / hop + 2;
  for (int k = 0; k < num_frames; ++k) {
    long long out_pos = static_cast<long long>(k) * hop;
    if (out_pos >= n_out) break;
    long long ideal = static_cast<long long>(std::llround(out_pos * factor));
    long long in_pos = ideal;
    if (k > 0) {
      // Template: where the previous frame would naturally continue.
      long long tmpl = prev_in + hop;
      double best_score = -2.0;
      long long best = ideal;
      for (int delta = -search; delta <= search; ++delta) {
        long long cand = ideal + delta;
        double dot = 0.0, e1 = 0.0, e2 = 0.0;
        for (int n = 0; n < frame; ++n) {
          double a = sample_at(tmpl + n);
          double b = sample_at(cand + n);
          dot += a * b;
          e1 += a * a;
          e2 += b * b;
        }
        double score = dot / (std::sqrt(e1 * e2) + 1e-12);
        if (score > best_score) {
          best_score = score;
          best = cand;
        }
      }
      in_pos = best;
    }
    for (int n = 0; n < frame; ++n) {
      long long o = out_pos + n;
      if (o >= n_out) break;
      acc[static_cast<size_t>(o)] += window[n] * sample_at(in_pos + n);
      weight[static_cast<size_t>(o)] += window[n];
    }
    prev_in = in_pos;
  }

  Waveform out;
  out.utt_id = wave.utt_id;
  out.sample_rate = sr;
  out.samples.resize(n_out);
  for (int i = 0; i < n_out; ++i) {
    double w = weight[i] > 1e-6 ? weight[i] : 1.0;
    double v = acc[i] / w;
    if (v > 1.0) v = 1.0;
    if (v < -1.0) v = -1.0;
    out.samples[i] = static_cast<float>(v);
  }
  return out;
}

Waveform mix_noise_at_snr(const Waveform& wave, const Waveform& noise,
                          double snr_db, uint64_t seed,
                          Waveform* scaled_noise_out) {
  validate_waveform(wave);
  validate_waveform(noise);
  ACCENTID_CHECK_ARG(wave.sample_rate == noise.sample_rate,
                     "sample rate mismatch between signal and noise");
  ACCENTID_CHECK_ARG(snr_db >= -5.0 && snr_db <= 40.0,
                     "snr_db " << snr_db << " outside [-5, 40]");
  double p_signal = mean_square(wave.samples);
  ACCENTID_CHECK_ARG(p_signal > 0.0, "signal power is zero, SNR undefined");

  // Loop/crop the noise from a seeded offset to match the signal length.
  Rng rng(seed);
  size_t offset = rng.next_below(noise.samples.size());
  std::vector<float> segment(wave.samples.size());
  for (size_t i = 0; i < segment.size(); ++i) {
    segment[i] = noise.samples[(offset + i) % noise.samples.size()];
  }
  double p_noise = mean_square(segment);
  ACCENTID_CHECK_ARG(p_noise > 0.0, "noise segment is all zero, SNR undefined");

  double gain = std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));
  Waveform out;
  out.utt_id = wave.utt_id;
  out.sample_rate = wave.sample_rate;
  out.samples.resize(wave.samples.size());
  if (scaled_noise_out) {
    scaled_noise_out->utt_id = wave.utt_id + "#noise";
    scaled_noise_out->sample_rate = wave.sample_rate;
    scaled_noise_out->samples.resize(segment.size());
  }
  for (size_t i = 0; i < out.samples.size(); ++i) {
    double n = gain * segment[i];
    if (scaled_noise_out) scaled_noise_out->samples[i] = static_cast<float>(n);
    double v = wave.samples[i] + n;
    if (v > 1.0) v = 1.0;
    if (v < -1.0) v = -1.0;
    out.samples[i] = static_cast<float>(v);
  }
  return out;
}

Waveform apply_rir(const Waveform& wave, const Waveform& rir) {
  validate_waveform(wave);
  validate_waveform(rir);
  ACCENTID_CHECK_ARG(wave.sample_rate == rir.sample_rate,
                     "sample rate mismatch between signal and RIR");
  ACCENTID_CHECK_ARG(rir.num_samples() <= wave.num_samples(),
                     "RIR longer than the input");

  std::vector<double> x(wave.samples.begin(), wave.samples.end());
  std::vector<double> h(rir.samples.begin(), rir.samples.end());
  std::vector<double> y = fft_convolve(x, h);
  y.resize(wave.samples.size());

  double out_peak = 0.0;
  for (double v : y) out_peak = std::max(out_peak, std::abs(v));
  ACCENTID_CHECK(out_peak > 0.0, ErrorCode::kNumeric,
                 "reverberated signal is all zero");
  double scale = peak_abs(wave.samples) / out_peak;

  Waveform out;
  out.utt_id = wave.utt_id;
  out.sample_rate = wave.sample_rate;
  out.samples.resize(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    double v = y[i] * scale;
    if (v > 1.0) v = 1.0;
    if (v < -1.0) v = -1.0;
    out.samples[i] = static_cast<float>(v);
  }
  return out;
}

Waveform replay_augment_chain(const Waveform& root,
                              const std::vector<AugmentStep>& chain,
                              const PerturbationSet& set) {
  Waveform wave = root;
  for (const auto& step : chain) {
    if (step.kind == "tempo") {
      wave = tempo_perturb(wave, step.params.at("factor").get<double>(),
                           step.seed);
    } else if (step.kind == "noise") {
      PerturbRole role = PerturbRole::kMusic;
      std::string role_name = step.params.at("noise_role").get<std::string>();
      if (role_name == "music") {
        role = PerturbRole::kMusic;
      } else if (role_name == "ambient") {
        role = PerturbRole::kAmbient;
      } else if (role_name == "babble") {
        role = PerturbRole::kBabble;
      } else {
        ACCENTID_CHECK_ARG(false, "unknown noise role " << role_name);
      }
      size_t index = step.params.at("noise_index").get<size_t>();
      const auto& items = set.items(role);
      ACCENTID_CHECK_ARG(index < items.size(), "noise index out of range");
      wave = mix_noise_at_snr(wave, items[index],
                              step.params.at("snr_db").get<double>(), step.seed);
    } else if (step.kind == "reverb") {
      size_t index = step.params.at("rir_index").get<size_t>();
      ACCENTID_CHECK_ARG(index < set.rirs.size(), "RIR index out of range");
      wave = apply_rir(wave, set.rirs[index]);
    } else {
      ACCENTID_CHECK_ARG(false, "cannot replay augment step " << step.kind);
    }
  }
  return wave;
}

}  // namespace accentid
