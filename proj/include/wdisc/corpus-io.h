// include/wdisc/corpus-io.h

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

#ifndef WDISC_CORPUS_IO_H_
#define WDISC_CORPUS_IO_H_

#include <map>
#include <string>
#include <vector>

#include "wdisc/base.h"
#include "wdisc/segmentation.h"

namespace wdisc {

enum class Tier { kWord, kPhone, kSyllable };

Tier ParseTier(const std::string &name);
std::string TierName(Tier tier);

struct AlignmentEntry {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;
};

/// Time-stamped labelled intervals of one utterance, sorted and
/// non-overlapping.
struct AlignmentTrack {
  std::string utterance_id;
  Tier tier = Tier::kWord;
  std::vector<AlignmentEntry> entries;
};

using AlignmentMap = std::map<std::string, AlignmentTrack>;

/// Reads "<utt> <start_s> <end_s> <label...>" lines.  Word and syllable
/// labels are a single token; for the phone tier the label is the rest of
/// the line, so one entry may carry a space-separated phone sequence.
/// Returns one track per utterance in order of first appearance, each sorted
/// by start time.  Overlapping entries or end <= start throw ValidationError.
std::vector<AlignmentTrack> ReadAlignments(const std::string &path, Tier tier);

/// Same, keyed by utterance id.
AlignmentMap ReadAlignmentMap(const std::string &path, Tier tier);

/// Writes tracks with 2-decimal times.
void WriteAlignments(const std::vector<AlignmentTrack> &tracks,
                     const std::string &path);

struct ManifestEntry {
  std::string utterance_id;
  std::string feature_path;
  double duration_s = 0.0;
};

/// Utterance list: "<utt> <feature_path> <duration_s>" per line.  Lines
/// starting with '#' are comments, except "#alignment <tier> <path>" which
/// records an alignment file for that tier.  Relative paths are resolved
/// against the manifest's directory.
struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::map<Tier, std::string> alignment_paths;

  const ManifestEntry *Find(const std::string &utterance_id) const;
  double TotalDuration() const;
};

CorpusManifest ReadManifest(const std::string &path);
void WriteManifest(const CorpusManifest &manifest, const std::string &path);

struct ClassToken {
  std::string utterance_id;
  double onset_s = 0.0;
  double offset_s = 0.0;
  bool operator==(const ClassToken &) const = default;
};

/// Discovered lexicon: cluster id -> tokens.
struct ClassFile {
  std::map<int32, std::vector<ClassToken>> classes;

  std::size_t NumTokens() const;
};

/// Formats a time the way class and alignment files store it ("%.2f").
std::string FormatTime(double seconds);

/// Blocks of "Class <id>" followed by "<utt> <onset> <offset>" lines, blank
/// line between blocks.
void WriteClassFile(const ClassFile &classes, const std::string &path);

/// If manifest is non-null, tokens naming unknown utterances throw
/// ValidationError.
ClassFile ReadClassFile(const std::string &path,
                        const CorpusManifest *manifest = nullptr);

/// "<utt> <b1> ... <T>" per line, frame indices.
void WriteBoundaryFile(const std::vector<Segmentation> &segs,
                       const std::string &path);
std::vector<Segmentation> ReadBoundaryFile(const std::string &path);
void WriteCandidateFile(const std::vector<CandidateSet> &cands,
                        const std::string &path);
std::vector<CandidateSet> ReadCandidateFile(const std::string &path);

/// "<utt> <speaker>" per line.
std::map<std::string, std::string> ReadSpeakerMap(const std::string &path);

}  // namespace wdisc

#endif  // WDISC_CORPUS_IO_H_
