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

#include "accentid/augment/expand.hpp"

#include <cmath>
#include <sstream>

#include "accentid/augment/augment.hpp"
#include "accentid/common/error.hpp"
#include "accentid/common/io.hpp"
#include "accentid/common/parallel.hpp"
#include "accentid/common/rng.hpp"
#include "accentid/common/sha256.hpp"

namespace accentid {

namespace {

std::string format_factor(double f) {
  std::ostringstream os;
  os << f;
  return os.str();
}

std::vector<int> read_label_file(const std::string& path) {
  std::vector<int> labels;
  std::istringstream is(read_file_bytes(path));
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) labels.push_back(std::stoi(line));
  }
  return labels;
}

void write_label_file(const std::string& path, const std::vector<int>& labels) {
  std::string text;
  for (int v : labels) {
    text += std::to_string(v);
    text += '\n';
  }
  write_file_text(path, text);
}

}  // namespace

Manifest expand_training_manifest(const Manifest& manifest,
                                  const ConvAugmentConfig& cfg,
                                  const PerturbationSet& corpora, uint64_t seed,
                                  const std::string& out_dir) {
  ACCENTID_CHECK_ARG(!manifest.empty(), "empty manifest");
  ACCENTID_CHECK_ARG(!cfg.tempo_factors.empty(), "no tempo factors configured");
  corpora.validate();
  for (const auto& row : manifest) {
    ACCENTID_CHECK(row.augment.empty(), ErrorCode::kState,
                   "manifest row " << row.utt_id
                                   << " is already augmented; expansion "
                                      "does not compose");
  }

  struct NoiseKind {
    const char* suffix;
    const char* role_name;
    PerturbRole role;
  };
  static const NoiseKind kNoise[] = {
      {"mus", "music", PerturbRole::kMusic},
      {"amb", "ambient", PerturbRole::kAmbient},
      {"bab", "babble", PerturbRole::kBabble},
  };

  // Plan every output row first; rendering then fills audio and hashes.
  // Per input row the order is: base, its 4 noise/reverb copies, the tempo
  // copy, and the tempo copy's 4 noise/reverb copies.
  Manifest out_rows;
  out_rows.reserve(manifest.size() * 10);
  struct Job {
    size_t out_index;
    const ManifestRow* parent;
    bool writes_labels = false;  // tempo copies re-index the frame labels
  };
  std::vector<Job> jobs;

  auto plan_noise_copies = [&](const ManifestRow& derived,
                               const ManifestRow& parent) {
    for (const auto& nk : kNoise) {
      uint64_t s = derive_seed(seed, derived.utt_id + "#stage2/" + nk.suffix);
      Rng rng(s);
      double snr = rng.uniform(cfg.snr_lo_db, cfg.snr_hi_db);
      size_t index = rng.next_below(corpora.items(nk.role).size());
      ManifestRow row = derived;
      row.utt_id = derived.utt_id + "_" + nk.suffix;
      row.path = out_dir + "/wav/" + row.utt_id + ".wav";
      row.sha256.clear();
      row.augment.push_back({"noise",
                             {{"noise_role", nk.role_name},
                              {"noise_index", index},
                              {"snr_db", snr}},
                             s});
      jobs.push_back({out_rows.size(), &parent});
      out_rows.push_back(std::move(row));
    }
    {
      uint64_t s = derive_seed(seed, derived.utt_id + "#stage2/rev");
      Rng rng(s);
      size_t index = rng.next_below(corpora.rirs.size());
      ManifestRow row = derived;
      row.utt_id = derived.utt_id + "_rev";
      row.path = out_dir + "/wav/" + row.utt_id + ".wav";
      row.sha256.clear();
      row.augment.push_back({"reverb", {{"rir_index", index}}, s});
      jobs.push_back({out_rows.size(), &parent});
      out_rows.push_back(std::move(row));
    }
  };

  for (const auto& base : manifest) {
    ManifestRow base_out = base;
    if (base_out.origin.empty()) base_out.origin = base_out.utt_id;
    out_rows.push_back(base_out);
    plan_noise_copies(base_out, base);

    uint64_t s1 = derive_seed(seed, base.utt_id + "#stage1");
    Rng rng(s1);
    double factor = cfg.tempo_factors[rng.next_below(cfg.tempo_factors.size())];
    ManifestRow tempo_row = base_out;
    tempo_row.utt_id = base.utt_id + "_tp" + format_factor(factor);
    tempo_row.path = out_dir + "/wav/" + tempo_row.utt_id + ".wav";
    tempo_row.sha256.clear();
    tempo_row.augment.push_back({"tempo", {{"factor", factor}}, s1});
    if (!base.labels.empty()) {
      tempo_row.labels = out_dir + "/labels/" + tempo_row.utt_id + ".lab";
    }
    jobs.push_back({out_rows.size(), &base, /*writes_labels=*/true});
    out_rows.push_back(tempo_row);
    plan_noise_copies(tempo_row, base);
  }

  parallel_for(
      jobs.size(),
      [&](size_t i) {
        const Job& job = jobs[i];
        ManifestRow& row = out_rows[job.out_index];
        Waveform parent_wave = read_wav(job.parent->path);
        parent_wave.utt_id = row.utt_id;
        Waveform result = replay_augment_chain(parent_wave, row.augment, corpora);
        std::string bytes = encode_wav(result);
        write_file_bytes(row.path, bytes);
        row.sha256 = sha256_hex(bytes);

        if (job.writes_labels && !job.parent->labels.empty()) {
          double factor = row.augment.back().params.at("factor").get<double>();
          std::vector<int> labels = read_label_file(job.parent->labels);
          if (!labels.empty()) {
            // Output frame t corresponds to input time t * factor.
            int t_out = static_cast<int>(
                std::llround(static_cast<double>(labels.size()) / factor));
            std::vector<int> remapped(static_cast<size_t>(t_out));
            for (int t = 0; t < t_out; ++t) {
              size_t src = static_cast<size_t>(std::llround(t * factor));
              if (src >= labels.size()) src = labels.size() - 1;
              remapped[static_cast<size_t>(t)] = labels[src];
            }
            write_label_file(row.labels, remapped);
          }
        }
      },
      cfg.num_threads);

  return out_rows;
}

}  // namespace accentid
