// src/es-kmeans.cc

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

#include "wdisc/es-kmeans.h"

#include <chrono>
#include <cstdio>
#include <random>

#include "wdisc/parallel.h"

namespace wdisc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double SecondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

void EsKMeansOptions::Check() const {
  if (num_clusters < 1) WDISC_THROW(ParameterError) << "K must be >= 1";
  if (num_iterations < 1)
    WDISC_THROW(ParameterError) << "number of iterations must be >= 1";
  if (!(init_keep_prob > 0.0 && init_keep_prob <= 1.0))
    WDISC_THROW(ParameterError) << "init keep probability must be in (0, 1]";
  if (min_segment_frames < 1)
    WDISC_THROW(ParameterError) << "minimum segment length must be >= 1";
  if (max_span_candidates < 1)
    WDISC_THROW(ParameterError) << "maximum span must be >= 1";
  if (kmeans_max_iters < 1)
    WDISC_THROW(ParameterError) << "K-means iterations must be >= 1";
  if (embedding.num_samples < 1)
    WDISC_THROW(ParameterError) << "subsample count must be >= 1";
}

double SegmentScore(const Eigen::Ref<const VectorXd> &embedding,
                    int32 length_frames, const DoubleMatrix &centroids) {
  return length_frames * Assign(centroids, embedding).sq_dist;
}

double SegmentScore(const SegmentEmbedding &z, const ClusterModel &model) {
  return SegmentScore(z.vector, z.LengthFrames(), model.centroids);
}

Segmentation RandomInitSegmentation(const CandidateSet &cands,
                                    double keep_prob, uint64_t seed) {
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0))
    WDISC_THROW(ParameterError) << "keep probability must be in [0, 1]";
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(keep_prob);
  std::vector<int32> kept;
  for (std::size_t i = 0; i + 1 < cands.boundaries.size(); i++)
    if (keep(rng)) kept.push_back(cands.boundaries[i]);
  return MakeBoundarySet<Segmentation>(cands.utterance_id, cands.num_frames,
                                       std::move(kept));
}

SegmentCache::SegmentCache(const FeatureMatrix &m, const CandidateSet &cands,
                           int32 min_segment_frames,
                           int32 max_span_candidates,
                           const EmbeddingOptions &opts)
    : utterance_id_(cands.utterance_id),
      min_frames_(min_segment_frames),
      max_span_(max_span_candidates) {
  ValidateBoundarySet(cands);
  if (cands.num_frames != m.NumFrames())
    WDISC_THROW(ShapeError) << "candidates of '" << cands.utterance_id
                            << "' cover " << cands.num_frames
                            << " frames, features have " << m.NumFrames();
  if (min_frames_ < 1 || max_span_ < 1)
    WDISC_THROW(ParameterError) << "segment constraints must be >= 1";
  positions_.push_back(0);
  positions_.insert(positions_.end(), cands.boundaries.begin(),
                    cands.boundaries.end());
  Build(m, opts);
  if (!Feasible()) {
    WDISC_VLOG(1) << "no segmentation of '" << utterance_id_ << "' has all "
                  << "segments >= " << min_frames_
                  << " frames; relaxing the minimum to 1";
    min_frames_ = 1;
    relaxed_ = true;
    Build(m, opts);
  }
}

void SegmentCache::Build(const FeatureMatrix &m,
                         const EmbeddingOptions &opts) {
  const int32 n = NumPositions();
  entries_.assign(n, {});
  for (int32 j = 1; j < n; j++) {
    int32 spans = std::min(max_span_, j);
    entries_[j].resize(spans);
    for (int32 l = 1; l <= spans; l++) {
      int32 start = positions_[j - l], end = positions_[j];
      if (end - start < min_frames_) continue;
      try {
        entries_[j][l - 1] = EmbedSegment(m, start, end, opts);
      } catch (const DegenerateError &) {
        // A zero-mean segment has no direction; it cannot be chosen.
      }
    }
  }
}

bool SegmentCache::Feasible() const {
  const int32 n = NumPositions();
  std::vector<bool> reach(n, false);
  reach[0] = true;
  for (int32 j = 1; j < n; j++)
    for (int32 l = 1; l <= static_cast<int32>(entries_[j].size()); l++)
      if (reach[j - l] && entries_[j][l - 1].has_value()) {
        reach[j] = true;
        break;
      }
  return reach[n - 1];
}

const SegmentEmbedding *SegmentCache::Find(int32 i, int32 j) const {
  if (i < 0 || j >= NumPositions() || j <= i) return nullptr;
  int32 l = j - i;
  if (l > static_cast<int32>(entries_[j].size())) return nullptr;
  const auto &e = entries_[j][l - 1];
  return e.has_value() ? &*e : nullptr;
}

std::size_t SegmentCache::Size() const {
  std::size_t count = 0;
  for (const auto &row : entries_)
    for (const auto &e : row) count += e.has_value();
  return count;
}

DpTable ForwardPass(int32 num_positions, int32 max_span,
                    const SegmentCostFn &cost) {
  if (num_positions < 1)
    WDISC_THROW(ParameterError) << "need at least the start position";
  DpTable t;
  t.gamma.assign(num_positions, kInf);
  t.backpointer.assign(num_positions, -1);
  t.num_segments.assign(num_positions, 0);
  t.gamma[0] = 0.0;
  for (int32 j = 1; j < num_positions; j++) {
    for (int32 i = std::max(0, j - max_span); i < j; i++) {
      if (t.gamma[i] == kInf) continue;
      double c = cost(i, j);
      if (c == kInf) continue;
      double total = t.gamma[i] + c;
      int32 segs = t.num_segments[i] + 1;
      if (total < t.gamma[j] ||
          (total == t.gamma[j] && segs < t.num_segments[j])) {
        t.gamma[j] = total;
        t.backpointer[j] = i;
        t.num_segments[j] = segs;
      }
    }
  }
  return t;
}

std::vector<int32> Backtrack(const DpTable &table) {
  const int32 last = static_cast<int32>(table.gamma.size()) - 1;
  std::vector<int32> path;
  if (last < 0 || table.gamma[last] == kInf) return path;
  for (int32 j = last; j > 0; j = table.backpointer[j]) {
    WDISC_ASSERT(table.backpointer[j] >= 0);
    path.push_back(j);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

ViterbiResult ViterbiSegment(const SegmentCache &cache,
                             const DoubleMatrix &centroids) {
  const int32 n = cache.NumPositions();
  DpTable table = ForwardPass(n, cache.MaxSpan(), [&](int32 i, int32 j) {
    const SegmentEmbedding *z = cache.Find(i, j);
    return z == nullptr ? kInf
                        : SegmentScore(z->vector, z->LengthFrames(), centroids);
  });
  ViterbiResult r;
  r.relaxed = cache.Relaxed();
  r.path = Backtrack(table);
  r.segmentation.utterance_id = cache.UtteranceId();
  r.segmentation.num_frames = cache.Position(n - 1);
  if (r.path.empty()) {
    // Unreachable once the minimum length is relaxed to one frame, kept so
    // full coverage holds regardless.
    WDISC_WARN << "no feasible segmentation for '" << cache.UtteranceId()
               << "', emitting a single segment";
    r.path = {n - 1};
    r.cost = kInf;
  } else {
    r.cost = table.gamma[n - 1];
  }
  for (int32 j : r.path) r.segmentation.boundaries.push_back(cache.Position(j));
  return r;
}

ViterbiResult ViterbiSegment(const FeatureMatrix &m,
                             const CandidateSet &cands,
                             const ClusterModel &model,
                             const EsKMeansOptions &opts) {
  SegmentCache cache(m, cands, opts.min_segment_frames,
                     opts.max_span_candidates, opts.embedding);
  ViterbiResult r = ViterbiSegment(cache, model.centroids);
  if (r.cost == kInf) {
    SegmentEmbedding whole = EmbedSegment(m, 0, m.NumFrames(), opts.embedding);
    r.cost = SegmentScore(whole.vector, whole.LengthFrames(), model.centroids);
  }
  return r;
}

double SegmentationCost(const FeatureMatrix &m, const Segmentation &s,
                        const DoubleMatrix &centroids,
                        const EmbeddingOptions &opts) {
  double total = 0.0;
  for (const SegmentEmbedding &z : EmbedSegmentation(m, s, opts))
    total += SegmentScore(z.vector, z.LengthFrames(), centroids);
  return total;
}

std::string FormatIterationRecord(const IterationRecord &r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "iter=%d phase=%s cost=%.9g inertia=%.9g",
                r.iteration, r.phase.c_str(), r.cost, r.inertia);
  return buf;
}

namespace {

struct PointSet {
  DoubleMatrix points;
  std::vector<double> weights;
};

PointSet CollectPoints(const std::vector<SegmentEmbedding> &segments,
                       bool weighted) {
  PointSet ps;
  const Eigen::Index dim = segments.front().vector.size();
  ps.points.resize(static_cast<Eigen::Index>(segments.size()), dim);
  for (std::size_t i = 0; i < segments.size(); i++) {
    ps.points.row(i) = segments[i].vector.transpose();
    if (weighted) ps.weights.push_back(segments[i].LengthFrames());
  }
  return ps;
}

double TotalScore(const std::vector<SegmentEmbedding> &segments,
                  const DoubleMatrix &centroids) {
  double total = 0.0;
  for (const SegmentEmbedding &z : segments)
    total += SegmentScore(z.vector, z.LengthFrames(), centroids);
  return total;
}

}  // namespace

EsKMeansResult EsKMeansFit(const std::vector<FeatureMatrix> &features,
                           const std::vector<CandidateSet> &candidates,
                           const EsKMeansOptions &opts) {
  opts.Check();
  if (features.empty())
    WDISC_THROW(ValidationError) << "empty corpus";
  if (features.size() != candidates.size())
    WDISC_THROW(ShapeError) << features.size() << " feature matrices but "
                            << candidates.size() << " candidate sets";
  const std::size_t num_utts = features.size();
  EsKMeansResult result;
  result.segmentations.resize(num_utts);

  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<SegmentEmbedding>> per_utt(num_utts);
  ParallelFor(num_utts, opts.num_workers, [&](std::size_t u) {
    if (candidates[u].utterance_id != features[u].utterance_id)
      WDISC_THROW(ValidationError)
          << "candidate set '" << candidates[u].utterance_id
          << "' does not match features '" << features[u].utterance_id << "'";
    result.segmentations[u] = RandomInitSegmentation(
        candidates[u], opts.init_keep_prob, DeriveSeed(opts.seed, u));
    per_utt[u] = EmbedSegmentation(features[u], result.segmentations[u],
                                   opts.embedding);
  });
  auto flatten = [&]() {
    std::vector<SegmentEmbedding> all;
    for (auto &v : per_utt)
      all.insert(all.end(), std::make_move_iterator(v.begin()),
                 std::make_move_iterator(v.end()));
    return all;
  };
  result.segments = flatten();
  if (result.segments.empty())
    WDISC_THROW(ValidationError) << "corpus has no embeddable segments";
  if (static_cast<std::size_t>(opts.num_clusters) > result.segments.size())
    WDISC_THROW(ParameterError) << "K=" << opts.num_clusters << " exceeds the "
                                << result.segments.size()
                                << " initial segments";

  KMeansOptions km;
  km.num_clusters = opts.num_clusters;
  km.max_iters = opts.kmeans_max_iters;
  km.seed = opts.seed;
  km.num_restarts = opts.kmeans_restarts;
  km.num_workers = opts.num_workers;
  {
    PointSet ps = CollectPoints(result.segments, opts.weighted_centroids);
    result.model = KMeansFit(ps.points, km, nullptr, ps.weights);
  }
  result.log.push_back({0, "cluster",
                        TotalScore(result.segments, result.model.centroids),
                        result.model.inertia, SecondsSince(t0)});
  WDISC_VLOG(1) << FormatIterationRecord(result.log.back());

  t0 = std::chrono::steady_clock::now();
  std::vector<std::optional<SegmentCache>> caches(num_utts);
  ParallelFor(num_utts, opts.num_workers, [&](std::size_t u) {
    caches[u].emplace(features[u], candidates[u], opts.min_segment_frames,
                      opts.max_span_candidates, opts.embedding);
  });
  for (const auto &c : caches) result.num_relaxed += c->Relaxed();
  if (result.num_relaxed > 0)
    WDISC_LOG << result.num_relaxed << " utterance(s) too short for the "
              << "minimum segment length; constraint relaxed for them";
  WDISC_VLOG(1) << "built segment caches in " << SecondsSince(t0) << "s";

  for (int32 iter = 1; iter <= opts.num_iterations; iter++) {
    t0 = std::chrono::steady_clock::now();
    std::vector<double> costs(num_utts, 0.0);
    ParallelFor(num_utts, opts.num_workers, [&](std::size_t u) {
      ViterbiResult r = ViterbiSegment(*caches[u], result.model.centroids);
      std::vector<SegmentEmbedding> segs;
      int32 prev = 0;
      for (int32 j : r.path) {
        const SegmentEmbedding *z = caches[u]->Find(prev, j);
        if (z == nullptr) {
          segs.push_back(EmbedSegment(features[u], caches[u]->Position(prev),
                                      caches[u]->Position(j), opts.embedding));
        } else {
          segs.push_back(*z);
        }
        prev = j;
      }
      costs[u] = TotalScore(segs, result.model.centroids);
      result.segmentations[u] = std::move(r.segmentation);
      per_utt[u] = std::move(segs);
    });
    double seg_cost = 0.0;
    for (double c : costs) seg_cost += c;
    result.log.push_back(
        {iter, "seg", seg_cost, result.model.inertia, SecondsSince(t0)});
    WDISC_VLOG(1) << FormatIterationRecord(result.log.back());

    t0 = std::chrono::steady_clock::now();
    result.segments = flatten();
    if (static_cast<std::size_t>(opts.num_clusters) > result.segments.size())
      WDISC_WARN << "iteration " << iter << ": only "
                 << result.segments.size() << " segments for K="
                 << opts.num_clusters << "; some clusters will stay empty";
    PointSet ps = CollectPoints(result.segments, opts.weighted_centroids);
    DoubleMatrix warm = result.model.centroids;
    result.model = KMeansFit(ps.points, km, &warm, ps.weights);
    result.log.push_back({iter, "cluster",
                          TotalScore(result.segments, result.model.centroids),
                          result.model.inertia, SecondsSince(t0)});
    WDISC_VLOG(1) << FormatIterationRecord(result.log.back());
  }
  return result;
}

}  // namespace wdisc
