// src/synth-corpus.cc

// Copyright 2026  The wdisc Authors

// See ../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "wdisc/synth-corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "wdisc/parallel.h"

namespace wdisc {

void SynthOptions::Check() const {
  if (vocab_size < 1) WDISC_THROW(ParameterError) << "vocab_size must be >= 1";
  if (dim < 1) WDISC_THROW(ParameterError) << "dim must be >= 1";
  if (min_frames_per_word < 1 || max_frames_per_word < min_frames_per_word)
    WDISC_THROW(ParameterError) << "bad frames-per-word range";
  if (min_words < 1 || max_words < min_words)
    WDISC_THROW(ParameterError) << "bad words-per-utterance range";
  if (num_utterances < 1)
    WDISC_THROW(ParameterError) << "num_utterances must be >= 1";
  if (noise_sigma < 0.0)
    WDISC_THROW(ParameterError) << "noise_sigma must be >= 0";
  if (distractor_rate < 0.0)
    WDISC_THROW(ParameterError) << "distractor_rate must be >= 0";
  if (!allow_adjacent_repeats && vocab_size < 2 && max_words > 1)
    WDISC_THROW(ParameterError)
        << "forbidding adjacent repeats needs at least 2 word types";
  if (phones_per_word < 1 || num_phones < 1)
    WDISC_THROW(ParameterError) << "phone settings must be >= 1";
  if (std::pow(static_cast<double>(num_phones), phones_per_word) <
      vocab_size)
    WDISC_THROW(ParameterError) << "phone inventory too small for "
                                << vocab_size << " distinct word types";
  if (num_speakers < 1)
    WDISC_THROW(ParameterError) << "num_speakers must be >= 1";
  if (!(frame_rate_hz > 0.0f))
    WDISC_THROW(ParameterError) << "frame rate must be positive";
}

CorpusManifest SynthCorpus::Manifest(const std::string &feature_dir) const {
  CorpusManifest m;
  for (const FeatureMatrix &f : features) {
    ManifestEntry e;
    e.utterance_id = f.utterance_id;
    e.feature_path = feature_dir + "/" + f.utterance_id + ".wdf";
    e.duration_s = f.NumFrames() / static_cast<double>(f.frame_rate_hz);
    m.entries.push_back(std::move(e));
  }
  return m;
}

SynthCorpus GenerateSynthCorpus(const SynthOptions &opts) {
  opts.Check();
  SynthCorpus c;
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  c.prototypes.resize(opts.vocab_size, opts.dim);
  for (int32 v = 0; v < opts.vocab_size; v++) {
    VectorXd x(opts.dim);
    do {
      for (int32 d = 0; d < opts.dim; d++) x[d] = gauss(rng);
    } while (x.norm() == 0.0);
    c.prototypes.row(v) = (x / x.norm()).transpose();
  }

  std::uniform_int_distribution<int32> phone(0, opts.num_phones - 1);
  std::set<std::string> taken;
  for (int32 v = 0; v < opts.vocab_size; v++) {
    std::string s;
    do {
      s.clear();
      for (int32 p = 0; p < opts.phones_per_word; p++) {
        if (p > 0) s += ' ';
        s += "p" + std::to_string(phone(rng));
      }
    } while (!taken.insert(s).second);
    c.phone_strings.push_back(s);
  }

  const int32 n = opts.num_utterances;
  c.features.resize(n);
  c.true_segmentations.resize(n);
  c.word_ids.resize(n);
  c.words.resize(n);
  c.phones.resize(n);
  c.candidates.resize(n);
  const double rate = opts.frame_rate_hz;
  for (int32 u = 0; u < n; u++) {
    std::mt19937_64 urng(DeriveSeed(opts.seed, static_cast<std::size_t>(u)));
    char id[32];
    std::snprintf(id, sizeof(id), "synth_%04d", u);
    std::uniform_int_distribution<int32> num_words(opts.min_words,
                                                   opts.max_words);
    std::uniform_int_distribution<int32> word(0, opts.vocab_size - 1);
    std::uniform_int_distribution<int32> length(opts.min_frames_per_word,
                                                opts.max_frames_per_word);
    std::vector<int32> ids, lengths;
    int32 count = num_words(urng), total = 0;
    for (int32 w = 0; w < count; w++) {
      int32 v;
      do {
        v = word(urng);
      } while (!opts.allow_adjacent_repeats && !ids.empty() && v == ids.back());
      ids.push_back(v);
      lengths.push_back(length(urng));
      total += lengths.back();
    }

    FeatureMatrix &f = c.features[u];
    f.utterance_id = id;
    f.frame_rate_hz = opts.frame_rate_hz;
    f.data.resize(total, opts.dim);
    AlignmentTrack &wt = c.words[u];
    AlignmentTrack &pt = c.phones[u];
    wt.utterance_id = pt.utterance_id = id;
    wt.tier = Tier::kWord;
    pt.tier = Tier::kPhone;
    std::vector<int32> bounds;
    int32 start = 0;
    for (int32 w = 0; w < count; w++) {
      int32 len = lengths[w], end = start + len;
      for (int32 t = start; t < end; t++)
        for (int32 d = 0; d < opts.dim; d++)
          f.data(t, d) = static_cast<float>(
              c.prototypes(ids[w], d) + opts.noise_sigma * gauss(urng));
      wt.entries.push_back({start / rate, end / rate, "w" + std::to_string(ids[w])});
      std::vector<std::string> ph;
      {
        std::istringstream ss(c.phone_strings[ids[w]]);
        std::string p;
        while (ss >> p) ph.push_back(p);
      }
      const int32 np = static_cast<int32>(ph.size());
      for (int32 p = 0; p < np; p++) {
        int32 ps = start + p * len / np, pe = start + (p + 1) * len / np;
        if (pe > ps) pt.entries.push_back({ps / rate, pe / rate, ph[p]});
      }
      c.true_classes.classes[ids[w]].push_back({id, start / rate, end / rate});
      bounds.push_back(end);
      start = end;
    }
    c.word_ids[u] = ids;
    c.true_segmentations[u] =
        MakeBoundarySet<Segmentation>(id, total, bounds);

    std::vector<int32> free;
    for (int32 t = 1; t < total; t++)
      if (!std::binary_search(bounds.begin(), bounds.end(), t)) free.push_back(t);
    int32 want = static_cast<int32>(std::lround(opts.distractor_rate * count));
    std::vector<int32> distract;
    std::sample(free.begin(), free.end(), std::back_inserter(distract),
                std::min<std::size_t>(want, free.size()), urng);
    bounds.insert(bounds.end(), distract.begin(), distract.end());
    c.candidates[u] = MakeBoundarySet<CandidateSet>(id, total, bounds);
    c.speakers[id] = "spk" + std::to_string(u % opts.num_speakers);
  }
  return c;
}

void WriteSynthCorpus(const SynthCorpus &corpus, const std::string &dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "feats", ec);
  if (ec) WDISC_THROW(IoError) << "cannot create " << dir << ": " << ec.message();
  for (const FeatureMatrix &f : corpus.features)
    WriteFeatureFile(f, (fs::path(dir) / "feats" / (f.utterance_id + ".wdf")).string());
  CorpusManifest m = corpus.Manifest("feats");
  m.alignment_paths[Tier::kWord] = "words.txt";
  m.alignment_paths[Tier::kPhone] = "phones.txt";
  auto at = [&](const char *name) { return (fs::path(dir) / name).string(); };
  WriteManifest(m, at("manifest.txt"));
  WriteAlignments(corpus.words, at("words.txt"));
  WriteAlignments(corpus.phones, at("phones.txt"));
  WriteCandidateFile(corpus.candidates, at("candidates.txt"));
  WriteBoundaryFile(corpus.true_segmentations, at("true_boundaries.txt"));
  WriteClassFile(corpus.true_classes, at("true_classes.txt"));
  std::ofstream os(at("speakers.txt"));
  for (const auto &[utt, spk] : corpus.speakers) os << utt << ' ' << spk << '\n';
  if (!os) WDISC_THROW(IoError) << "error writing " << at("speakers.txt");
}

}  // namespace wdisc
