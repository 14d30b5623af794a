// src/synth-corpus-test.cc

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

#include <filesystem>
#include <set>

#include "wdisc/eval-metrics.h"
#include "wdisc/prom-seg.h"
#include "test-util.h"

namespace wdisc {

using test::Throws;

static SynthOptions SmallOptions(uint64_t seed) {
  SynthOptions o;
  o.num_utterances = 20;
  o.seed = seed;
  return o;
}

static void UnitTestStructure() {
  SynthOptions o = SmallOptions(3);
  o.min_frames_per_word = 5;
  o.max_frames_per_word = 11;
  o.allow_adjacent_repeats = false;
  SynthCorpus c = GenerateSynthCorpus(o);
  WDISC_ASSERT(c.features.size() == 20 && c.candidates.size() == 20);
  for (int32 v = 0; v < o.vocab_size; v++)
    WDISC_ASSERT(std::abs(c.prototypes.row(v).norm() - 1.0) < 1e-12);
  std::set<std::string> distinct(c.phone_strings.begin(), c.phone_strings.end());
  WDISC_ASSERT(static_cast<int32>(distinct.size()) == o.vocab_size);
  std::size_t tokens = 0;
  for (std::size_t u = 0; u < c.features.size(); u++) {
    const Segmentation &s = c.true_segmentations[u];
    ValidateBoundarySet(s);
    WDISC_ASSERT(s.num_frames == c.features[u].NumFrames());
    WDISC_ASSERT(IsSubsetOf(s, c.candidates[u]));
    int32 n = static_cast<int32>(c.word_ids[u].size());
    WDISC_ASSERT(n >= o.min_words && n <= o.max_words);
    WDISC_ASSERT(static_cast<int32>(s.boundaries.size()) == n);
    // Distractor count is round(rate * words), capped by the free frames.
    WDISC_ASSERT(c.candidates[u].boundaries.size() ==
                 s.boundaries.size() + std::lround(0.5 * n));
    for (int32 w = 1; w < n; w++)
      WDISC_ASSERT(c.word_ids[u][w] != c.word_ids[u][w - 1]);
    int32 prev = 0;
    for (int32 b : s.boundaries) {
      WDISC_ASSERT(b - prev >= 5 && b - prev <= 11);
      prev = b;
    }
    WDISC_ASSERT(c.words[u].entries.size() == static_cast<std::size_t>(n));
    WDISC_ASSERT(c.phones[u].entries.size() == static_cast<std::size_t>(3 * n));
    tokens += n;
  }
  WDISC_ASSERT(c.true_classes.NumTokens() == tokens);
  WDISC_ASSERT(c.speakers.at("synth_0005") == "spk1");
  WDISC_ASSERT(Throws<ParameterError>([] {
    SynthOptions bad;
    bad.vocab_size = 1;
    bad.allow_adjacent_repeats = false;
    GenerateSynthCorpus(bad);
  }));
  WDISC_ASSERT(Throws<ParameterError>([] {
    SynthOptions bad;
    bad.num_phones = 2;
    bad.phones_per_word = 2;  // only 4 distinct strings for 20 words
    GenerateSynthCorpus(bad);
  }));
}

// Without noise every frame of a token equals the prototype, so the
// dissimilarity is 0 inside tokens and positive exactly at the transitions.
static void UnitTestNoiselessCurve() {
  SynthOptions o = SmallOptions(4);
  o.noise_sigma = 0.0;
  o.allow_adjacent_repeats = false;
  SynthCorpus c = GenerateSynthCorpus(o);
  for (std::size_t u = 0; u < c.features.size(); u++) {
    DissimilarityCurve d = ComputeDissimilarity(c.features[u]);
    const std::vector<int32> &b = c.true_segmentations[u].boundaries;
    for (std::size_t i = 0; i < d.values.size(); i++) {
      bool transition = std::binary_search(b.begin(), b.end(),
                                           static_cast<int32>(i + 1));
      if (transition) {
        WDISC_ASSERT(d.values[i] > 1e-3);
      } else {
        WDISC_ASSERT(std::abs(d.values[i]) < 1e-6);
      }
    }
  }
}

static void UnitTestSingleWordType() {
  SynthOptions o = SmallOptions(5);
  o.vocab_size = 1;
  SynthCorpus c = GenerateSynthCorpus(o);
  WDISC_ASSERT(c.true_classes.classes.size() == 1);
  AlignmentMap phones;
  for (const AlignmentTrack &t : c.phones) phones[t.utterance_id] = t;
  WDISC_ASSERT(Ned(c.true_classes, phones) == 0.0);
}

static void UnitTestDeterminismAndFiles() {
  SynthOptions o = SmallOptions(6);
  SynthCorpus a = GenerateSynthCorpus(o), b = GenerateSynthCorpus(o);
  WDISC_ASSERT(a.prototypes == b.prototypes);
  for (std::size_t u = 0; u < a.features.size(); u++) {
    WDISC_ASSERT(a.features[u].data == b.features[u].data);
    WDISC_ASSERT(a.candidates[u].boundaries == b.candidates[u].boundaries);
  }
  o.seed = 7;
  WDISC_ASSERT(!(GenerateSynthCorpus(o).prototypes == a.prototypes));

  std::string d1 = test::TempDir("synth1"), d2 = test::TempDir("synth2");
  WriteSynthCorpus(a, d1);
  WriteSynthCorpus(b, d2);
  for (const char *f : {"manifest.txt", "words.txt", "phones.txt", "candidates.txt",
                        "true_boundaries.txt", "true_classes.txt", "speakers.txt",
                        "feats/synth_0000.wdf"})
    WDISC_ASSERT(test::ReadBytes(d1 + "/" + f) == test::ReadBytes(d2 + "/" + f));

  CorpusManifest m = ReadManifest(d1 + "/manifest.txt");
  WDISC_ASSERT(m.entries.size() == a.features.size());
  for (std::size_t u = 0; u < m.entries.size(); u++) {
    FeatureMatrix f = ReadFeatureFile(m.entries[u].feature_path);
    WDISC_ASSERT(f.utterance_id == a.features[u].utterance_id);
    WDISC_ASSERT(f.data == a.features[u].data);
    WDISC_ASSERT(std::abs(m.entries[u].duration_s -
                          f.NumFrames() / 50.0) < 1e-6);
  }
  std::vector<Segmentation> segs = ReadBoundaryFile(d1 + "/true_boundaries.txt");
  for (std::size_t u = 0; u < segs.size(); u++)
    WDISC_ASSERT(segs[u].boundaries == a.true_segmentations[u].boundaries);
  std::vector<CandidateSet> cands = ReadCandidateFile(d1 + "/candidates.txt");
  for (std::size_t u = 0; u < cands.size(); u++)
    WDISC_ASSERT(cands[u].boundaries == a.candidates[u].boundaries);
  AlignmentMap words = ReadAlignmentMap(m.alignment_paths.at(Tier::kWord), Tier::kWord);
  WDISC_ASSERT(words.size() == a.words.size());
  ClassFile classes = ReadClassFile(d1 + "/true_classes.txt", &m);
  WDISC_ASSERT(classes.NumTokens() == a.true_classes.NumTokens());
  WDISC_ASSERT(ReadSpeakerMap(d1 + "/speakers.txt") == a.speakers);
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestStructure();
  UnitTestNoiselessCurve();
  UnitTestSingleWordType();
  UnitTestDeterminismAndFiles();
  std::cout << "Test OK.\n";
  return 0;
}
