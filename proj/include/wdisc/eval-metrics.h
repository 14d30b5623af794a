// include/wdisc/eval-metrics.h

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

#ifndef WDISC_EVAL_METRICS_H_
#define WDISC_EVAL_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wdisc/base.h"
#include "wdisc/corpus-io.h"
#include "wdisc/segmentation.h"

namespace wdisc {

// All percentages are in [0, 100] unless noted.
struct BoundaryScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double over_segmentation = 0.0;  // 100 * (n_hyp / n_ref - 1), may be < 0
  double r_value = 0.0;
  int64_t n_hyp = 0;
  int64_t n_ref = 0;
  int64_t n_hits = 0;
};

struct TokenScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t n_hit_tokens = 0;
  int64_t n_hyp_tokens = 0;
  int64_t n_ref_tokens = 0;
};

struct LexiconScore {
  double ned = 0.0;
  int64_t n_pairs = 0;
  double bitrate_bits_per_s = 0.0;
};

/// Slack added to the tolerance so that values which went through 2-decimal
/// text (e.g. 0.50 vs 0.48) still compare as 20 ms apart.
inline constexpr double kToleranceSlack = 1e-9;

/// Harmonic mean of two percentages; 0 when both are 0.
double FScore(double precision, double recall);

/// R-value from recall and over-segmentation, both in percent.
double RValue(double recall, double over_segmentation);

/// Interior reference boundaries in seconds: the distinct entry edges
/// strictly between the first entry's start and the last entry's end.
std::vector<double> ReferenceBoundaries(const AlignmentTrack &track);

/// Interior hypothesis boundaries (frame 0 and T dropped) in seconds.
std::vector<double> HypothesisBoundaries(const BoundarySet &s,
                                         double frame_rate_hz);

/// Greedy one-to-one matching in hypothesis time order: each hypothesis
/// boundary takes the nearest unmatched reference boundary within
/// tolerance_s, ties to the earlier reference.  Both inputs sorted.
int64_t CountBoundaryHits(std::span<const double> hyp,
                          std::span<const double> ref, double tolerance_s);

/// Micro-averaged over all hypothesis utterances.  Throws ValidationError
/// if an utterance has no reference track and UndefinedMetricError if the
/// reference has no interior boundaries.
BoundaryScore ScoreBoundaries(const std::vector<Segmentation> &hyp,
                              const AlignmentMap &ref, double tolerance_s,
                              double frame_rate_hz);

/// A hypothesis token is a hit when some not yet credited reference entry
/// has its start and end each within tolerance of the token's edges.
TokenScore ScoreTokens(const std::vector<Segmentation> &hyp,
                       const AlignmentMap &ref, double tolerance_s,
                       double frame_rate_hz);

/// Levenshtein distance with unit costs.
int32 EditDistance(std::span<const std::string> a,
                   std::span<const std::string> b);

/// Splits on whitespace.
std::vector<std::string> SplitSymbols(const std::string &s);

/// Phones overlapping [onset_s, offset_s) by at least half the phone's
/// duration or by at least 30 ms, in order.  Multi-symbol phone labels are
/// expanded into their symbols.
std::vector<std::string> TokenTranscription(const AlignmentTrack &phones,
                                            double onset_s, double offset_s);

enum class NedPooling {
  kPooled,      // mean over all within-cluster pairs of the corpus
  kPerCluster,  // mean over clusters of the mean within each cluster
};

/// 100 * mean normalised edit distance between the transcriptions of
/// same-cluster token pairs.  Throws UndefinedMetricError if no cluster has
/// two tokens.
double Ned(const ClassFile &classes, const AlignmentMap &phones,
           NedPooling pooling = NedPooling::kPooled,
           int64_t *num_pairs = nullptr);

/// Tokens per second times the entropy (bits) of the class distribution.
double Bitrate(const ClassFile &classes, double total_duration_s);

LexiconScore ScoreLexicon(const ClassFile &classes, const AlignmentMap &phones,
                          double total_duration_s,
                          NedPooling pooling = NedPooling::kPooled);

struct ClusterSummary {
  int32 cluster_id = 0;
  int64_t num_tokens = 0;
  std::optional<int64_t> num_speakers;
  double mean_duration_s = 0.0;
  /// Label of the reference word overlapping each token the longest
  /// ("<none>" when nothing overlaps), most frequent first.
  std::vector<std::pair<std::string, int64_t>> label_histogram;
};

/// Summaries of the top_n clusters by token count (ties to the lower id).
/// Speaker counts are filled in only when a speaker map is given.
std::vector<ClusterSummary> ClusterReport(
    const ClassFile &classes, const AlignmentMap &words,
    const std::map<std::string, std::string> *speakers, int32 top_n);

/// Label of the entry with the longest overlap with [onset_s, offset_s);
/// ties go to the earlier entry.  "<none>" when nothing overlaps.
std::string MaxOverlapLabel(const AlignmentTrack &track, double onset_s,
                            double offset_s);

}  // namespace wdisc

#endif  // WDISC_EVAL_METRICS_H_
