// include/wdisc/es-kmeans.h

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

#ifndef WDISC_ES_KMEANS_H_
#define WDISC_ES_KMEANS_H_

// Embedded segmental K-means with candidate boundaries, in its batched form:
// every utterance is re-segmented by dynamic programming under fixed
// centroids, then the new segments are re-clustered, and the two steps
// alternate for a fixed number of iterations.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wdisc/base.h"
#include "wdisc/feature-io.h"
#include "wdisc/kmeans.h"
#include "wdisc/seg-embed.h"
#include "wdisc/segmentation.h"

namespace wdisc {

struct EsKMeansOptions {
  int32 num_clusters = 1;
  int32 num_iterations = 5;
  /// Probability that an interior candidate is kept by the random
  /// initial segmentation.
  double init_keep_prob = 0.5;
  int32 min_segment_frames = 5;
  /// A segment may cover at most this many consecutive candidate gaps.
  int32 max_span_candidates = 4;
  uint64_t seed = 0;
  int32 kmeans_max_iters = 10;
  int32 kmeans_restarts = 1;
  /// Weight centroid updates by segment length.
  bool weighted_centroids = false;
  EmbeddingOptions embedding;
  int32 num_workers = 0;

  /// Throws ParameterError when a field is out of range.
  void Check() const;
};

/// Segment score: length in frames times the squared distance of the
/// embedding to its nearest centroid.
double SegmentScore(const Eigen::Ref<const VectorXd> &embedding,
                    int32 length_frames, const DoubleMatrix &centroids);
double SegmentScore(const SegmentEmbedding &z, const ClusterModel &model);

/// Keeps each interior candidate independently with probability keep_prob;
/// T is always kept.
Segmentation RandomInitSegmentation(const CandidateSet &cands,
                                    double keep_prob, uint64_t seed);

/// Embeddings of every candidate pair a segment may span.  Positions are
/// indexed 0..n with position 0 the utterance start (frame 0) and position
/// j >= 1 the frame cands.boundaries[j-1].  The pair (i, j) is present iff
/// 0 < j - i <= max_span_candidates and the segment has at least
/// min_segment_frames frames.  If those constraints leave no path from 0 to
/// n, the cache is rebuilt with a one-frame minimum and Relaxed() is true.
class SegmentCache {
 public:
  SegmentCache(const FeatureMatrix &m, const CandidateSet &cands,
               int32 min_segment_frames, int32 max_span_candidates,
               const EmbeddingOptions &opts);

  /// Frame of position j.
  int32 Position(int32 j) const { return positions_[j]; }
  int32 NumPositions() const { return static_cast<int32>(positions_.size()); }
  int32 MaxSpan() const { return max_span_; }
  int32 MinSegmentFrames() const { return min_frames_; }
  bool Relaxed() const { return relaxed_; }
  const std::string &UtteranceId() const { return utterance_id_; }

  /// Null when (i, j) is not a permitted segment.
  const SegmentEmbedding *Find(int32 i, int32 j) const;
  std::size_t Size() const;

 private:
  void Build(const FeatureMatrix &m, const EmbeddingOptions &opts);
  bool Feasible() const;

  std::string utterance_id_;
  std::vector<int32> positions_;
  int32 min_frames_;
  int32 max_span_;
  bool relaxed_ = false;
  // entries_[j][l - 1] holds the pair (j - l, j) for l in [1, max_span].
  std::vector<std::vector<std::optional<SegmentEmbedding>>> entries_;
};

/// Forward variables over positions 0..n.
struct DpTable {
  std::vector<double> gamma;         // minimal cost of a path 0 -> j
  std::vector<int32> backpointer;    // predecessor position, -1 if none
  std::vector<int32> num_segments;   // segments on the chosen path
};

/// cost(i, j) of the segment between positions i < j; return
/// std::numeric_limits<double>::infinity() for forbidden pairs.
using SegmentCostFn = std::function<double(int32, int32)>;

/// gamma[j] = min over i in [j - max_span, j) of cost(i, j) + gamma[i].
/// Ties go to the path with fewer segments, then to the earlier
/// predecessor.
DpTable ForwardPass(int32 num_positions, int32 max_span,
                    const SegmentCostFn &cost);

/// Position indices of the optimal path, ending with n and excluding 0.
/// Empty when gamma[n] is infinite.
std::vector<int32> Backtrack(const DpTable &table);

struct ViterbiResult {
  Segmentation segmentation;
  std::vector<int32> path;  // position indices, as from Backtrack()
  double cost = 0.0;
  bool relaxed = false;     // the one-frame minimum was used
};

/// Minimum-cost segmentation of the cached utterance under fixed centroids.
ViterbiResult ViterbiSegment(const SegmentCache &cache,
                             const DoubleMatrix &centroids);

/// Convenience form that builds the cache first.
ViterbiResult ViterbiSegment(const FeatureMatrix &m,
                             const CandidateSet &cands,
                             const ClusterModel &model,
                             const EsKMeansOptions &opts);

/// Total segment score of an existing segmentation.
double SegmentationCost(const FeatureMatrix &m, const Segmentation &s,
                        const DoubleMatrix &centroids,
                        const EmbeddingOptions &opts);

struct IterationRecord {
  int32 iteration = 0;
  std::string phase;  // "seg" or "cluster"
  double cost = 0.0;
  double inertia = 0.0;
  double seconds = 0.0;
};

/// "iter=<i> phase=<seg|cluster> cost=<float> inertia=<float>".
std::string FormatIterationRecord(const IterationRecord &r);

struct EsKMeansResult {
  std::vector<Segmentation> segmentations;
  ClusterModel model;
  /// Embeddings behind model.assignment, in utterance then segment order.
  std::vector<SegmentEmbedding> segments;
  /// iter=0 cluster: initial fit on the random segmentation; for each
  /// iteration i >= 1, a seg record (cost of the new segmentation under
  /// the previous centroids) and a cluster record (same segmentation scored
  /// under the refitted centroids).
  std::vector<IterationRecord> log;
  int32 num_relaxed = 0;
};

/// Runs the full alternation.  `features` holds the embedding-space
/// features (e.g. PCA-projected), `candidates` the matching candidate sets
/// in the same order.
EsKMeansResult EsKMeansFit(const std::vector<FeatureMatrix> &features,
                           const std::vector<CandidateSet> &candidates,
                           const EsKMeansOptions &opts);

}  // namespace wdisc

#endif  // WDISC_ES_KMEANS_H_
