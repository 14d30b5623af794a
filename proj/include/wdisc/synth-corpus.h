// include/wdisc/synth-corpus.h

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

#ifndef WDISC_SYNTH_CORPUS_H_
#define WDISC_SYNTH_CORPUS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wdisc/base.h"
#include "wdisc/corpus-io.h"
#include "wdisc/feature-io.h"
#include "wdisc/segmentation.h"

namespace wdisc {

/// Parameters of a synthetic corpus.  Each word type is a random unit
/// vector ("prototype"); a token repeats its prototype for every frame and
/// adds i.i.d. Gaussian noise.
struct SynthOptions {
  int32 vocab_size = 20;
  int32 dim = 16;
  int32 min_frames_per_word = 8;
  int32 max_frames_per_word = 8;
  int32 min_words = 3;
  int32 max_words = 6;
  int32 num_utterances = 200;
  double noise_sigma = 0.01;
  /// Distractor candidates per true boundary (T included).
  double distractor_rate = 0.5;
  bool allow_adjacent_repeats = true;
  /// Each word type is given a distinct sequence of this many phones drawn
  /// from an inventory of num_phones symbols.
  int32 phones_per_word = 3;
  int32 num_phones = 12;
  int32 num_speakers = 4;
  float frame_rate_hz = 50.0f;
  uint64_t seed = 0;

  void Check() const;
};

struct SynthCorpus {
  DoubleMatrix prototypes;  // vocab_size x dim
  std::vector<std::string> phone_strings;  // per word type
  std::vector<FeatureMatrix> features;
  std::vector<Segmentation> true_segmentations;
  std::vector<std::vector<int32>> word_ids;  // per utterance, per token
  std::vector<AlignmentTrack> words;
  std::vector<AlignmentTrack> phones;
  std::vector<CandidateSet> candidates;
  ClassFile true_classes;  // class id = word type
  std::map<std::string, std::string> speakers;

  CorpusManifest Manifest(const std::string &feature_dir) const;
};

SynthCorpus GenerateSynthCorpus(const SynthOptions &opts);

/// Writes manifest.txt, feats/<utt>.wdf, words.txt, phones.txt,
/// candidates.txt, true_boundaries.txt, true_classes.txt and speakers.txt
/// under dir (created if needed).  The manifest references the alignment
/// files with #alignment lines.
void WriteSynthCorpus(const SynthCorpus &corpus, const std::string &dir);

}  // namespace wdisc

#endif  // WDISC_SYNTH_CORPUS_H_
