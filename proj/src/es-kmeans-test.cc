// src/es-kmeans-test.cc

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

#include "test-oracles.h"
#include "test-util.h"
#include "wdisc/eval-metrics.h"
#include "wdisc/synth-corpus.h"

namespace wdisc {

using test::ApproxEqual;
using test::Throws;

static DoubleMatrix Rows(std::vector<std::vector<double>> rows) {
  DoubleMatrix p(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); r++)
    for (std::size_t c = 0; c < rows[r].size(); c++) p(r, c) = rows[r][c];
  return p;
}

static FeatureMatrix RandomUtterance(int32 t, int32 d, std::mt19937 *rng) {
  std::normal_distribution<float> g;
  FeatureMatrix m;
  m.utterance_id = "r";
  m.data.resize(t, d);
  for (int32 i = 0; i < m.data.size(); i++) m.data.data()[i] = g(*rng);
  return m;
}

static DoubleMatrix RandomCentroids(int32 k, int32 d, std::mt19937 *rng) {
  std::normal_distribution<double> g;
  DoubleMatrix c(k, d);
  for (int32 i = 0; i < c.size(); i++) c.data()[i] = g(*rng);
  for (int32 i = 0; i < k; i++) c.row(i).normalize();
  return c;
}

static CandidateSet RandomCandidates(int32 t, int32 max_interior,
                                     std::mt19937 *rng) {
  std::vector<int32> interior;
  int32 n = (*rng)() % (max_interior + 1);
  for (int32 k = 0; k < n; k++) interior.push_back(1 + (*rng)() % std::max(1, t - 1));
  return MakeBoundarySet<CandidateSet>("r", t, interior);
}

static void UnitTestSegmentScore() {
  DoubleMatrix c = Rows({{1, 0}, {0, 1}});
  VectorXd z(2);
  z << 0, 1;
  WDISC_ASSERT(SegmentScore(z, 4, c) == 0.0);
  z << 0.6, 0.8;
  DoubleMatrix only = Rows({{1, 0}});
  WDISC_ASSERT(ApproxEqual(SegmentScore(z, 5, only), 4.0, 1e-12));
  WDISC_ASSERT(SegmentScore(z, 10, only) == 2 * SegmentScore(z, 5, only));
  ClusterModel m;
  m.centroids = only;
  SegmentEmbedding e{"u", 3, 8, z};
  WDISC_ASSERT(SegmentScore(e, m) == SegmentScore(z, 5, only));
}

static void UnitTestRandomInit() {
  CandidateSet c = MakeBoundarySet<CandidateSet>("u", 20, {3, 7, 12});
  WDISC_ASSERT(RandomInitSegmentation(c, 1.0, 1).boundaries == c.boundaries);
  WDISC_ASSERT((RandomInitSegmentation(c, 0.0, 1).boundaries == std::vector<int32>{20}));
  std::vector<int32> many;
  for (int32 i = 1; i <= 10000; i++) many.push_back(i);
  CandidateSet big = MakeBoundarySet<CandidateSet>("u", 10001, many);
  Segmentation s = RandomInitSegmentation(big, 0.5, 7);
  double kept = (s.NumSegments() - 1) / 10000.0;
  WDISC_ASSERT(kept >= 0.47 && kept <= 0.53);
  WDISC_ASSERT(IsSubsetOf(s, big));
  WDISC_ASSERT(RandomInitSegmentation(big, 0.5, 7) == s);
  WDISC_ASSERT(Throws<ParameterError>([&] { RandomInitSegmentation(c, 1.5, 0); }));
}

static void UnitTestForwardPass() {
  // Positions 0, 2, 4 (candidates {2, 4}, T = 4).
  auto cost = [](int32 i, int32 j) {
    if (i == 0 && j == 2) return 5.0;
    if (i == 0 && j == 1) return 1.0;
    return 3.0;  // (1, 2)
  };
  DpTable t = ForwardPass(3, 4, cost);
  WDISC_ASSERT(t.gamma[2] == 4.0);
  WDISC_ASSERT((Backtrack(t) == std::vector<int32>{1, 2}));
  // Span limit 1 forbids the direct segment.
  t = ForwardPass(3, 1, [](int32, int32) { return 0.0; });
  WDISC_ASSERT((Backtrack(t) == std::vector<int32>{1, 2}));
  // All-zero costs: the fewest segments win.
  t = ForwardPass(6, 10, [](int32, int32) { return 0.0; });
  WDISC_ASSERT((Backtrack(t) == std::vector<int32>{5}));
  // Unreachable end.
  t = ForwardPass(3, 4, [](int32, int32 j) {
    return j == 2 ? std::numeric_limits<double>::infinity() : 0.0;
  });
  WDISC_ASSERT(Backtrack(t).empty());
}

static void UnitTestTieToFewer() {
  // Every frame equal: every segment embeds to the centroid, cost 0.
  FeatureMatrix m;
  m.utterance_id = "u";
  m.data = FloatMatrix::Constant(12, 2, 0.5f);
  CandidateSet c = MakeBoundarySet<CandidateSet>("u", 12, {3, 6, 9});
  ClusterModel model;
  model.centroids = Rows({{std::sqrt(0.5), std::sqrt(0.5)}});
  EsKMeansOptions o;
  o.min_segment_frames = 1;
  ViterbiResult r = ViterbiSegment(m, c, model, o);
  WDISC_ASSERT((r.segmentation.boundaries == std::vector<int32>{12}));
  WDISC_ASSERT(r.cost < 1e-12);
}

static void UnitTestOracle(bool constrained, int trials) {
  std::mt19937 rng(constrained ? 11 : 10);
  for (int trial = 0; trial < trials; trial++) {
    int32 t = 2 + rng() % 59;
    FeatureMatrix m = RandomUtterance(t, 3, &rng);
    CandidateSet c = RandomCandidates(t, 10, &rng);
    ClusterModel model;
    model.centroids = RandomCentroids(1 + rng() % 5, 3, &rng);
    EsKMeansOptions o;
    o.min_segment_frames = constrained ? 1 + rng() % 6 : 1;
    o.max_span_candidates = constrained ? 1 + rng() % 4 : 100;
    ViterbiResult r = ViterbiSegment(m, c, model, o);
    oracle::BestSegmentation best = oracle::EnumerateSegmentations(
        m, c.Interior(), model.centroids, o.min_segment_frames,
        o.max_span_candidates);
    WDISC_ASSERT(!best.boundaries.empty());
    WDISC_ASSERT(ApproxEqual(r.cost, best.cost, 1e-9 * (1 + best.cost)));
    WDISC_ASSERT(r.relaxed == best.relaxed);
    WDISC_ASSERT(IsSubsetOf(r.segmentation, c));
    // The reported cost is the cost of the returned segmentation.
    WDISC_ASSERT(ApproxEqual(
        SegmentationCost(m, r.segmentation, model.centroids, o.embedding),
        r.cost, 1e-9 * (1 + r.cost)));
  }
}

static void UnitTestCache() {
  std::mt19937 rng(3);
  FeatureMatrix m = RandomUtterance(20, 4, &rng);
  CandidateSet c = MakeBoundarySet<CandidateSet>("r", 20, {4, 9, 15});
  EmbeddingOptions eo;
  SegmentCache all(m, c, 1, 4, eo);
  WDISC_ASSERT(all.NumPositions() == 5 && all.Size() == 10);  // C(5, 2)
  WDISC_ASSERT(!all.Relaxed());
  for (int32 i = 0; i < 5; i++)
    for (int32 j = i + 1; j < 5; j++) {
      const SegmentEmbedding *z = all.Find(i, j);
      WDISC_ASSERT(z != nullptr);
      SegmentEmbedding fresh = EmbedMean(m, all.Position(i), all.Position(j));
      WDISC_ASSERT(z->vector == fresh.vector);  // bit-exact
      WDISC_ASSERT(z->start == fresh.start && z->end == fresh.end);
    }
  WDISC_ASSERT(all.Find(2, 1) == nullptr && all.Find(0, 5) == nullptr);

  SegmentCache span2(m, c, 1, 2, eo);
  WDISC_ASSERT(span2.Size() == 4 + 3);
  WDISC_ASSERT(span2.Find(0, 3) == nullptr && span2.Find(1, 3) != nullptr);

  // Positions 0, 4, 9, 15, 20: the gap 4 -> 9 is 5 frames, 0 -> 4 is 4.
  SegmentCache min5(m, c, 5, 4, eo);
  WDISC_ASSERT(min5.Find(0, 1) == nullptr && min5.Find(1, 2) != nullptr);
  CandidateSet gap3 = MakeBoundarySet<CandidateSet>("r", 20, {10, 13});
  SegmentCache g3(m, gap3, 4, 4, eo);
  WDISC_ASSERT(g3.Find(1, 2) == nullptr && g3.Find(0, 2) != nullptr);

  // No segmentation meets the minimum: relaxed to one frame.
  SegmentCache relaxed(m, c, 25, 4, eo);
  WDISC_ASSERT(relaxed.Relaxed() && relaxed.MinSegmentFrames() == 1);
  WDISC_ASSERT(relaxed.Size() == 10);

  WDISC_ASSERT(Throws<ShapeError>(
      [&] { SegmentCache(m, MakeBoundarySet<CandidateSet>("r", 21, {}), 1, 4, eo); }));
}

static SynthCorpus Corpus(double sigma, double distractors, uint64_t seed,
                          bool repeats = true) {
  SynthOptions so;
  so.noise_sigma = sigma;
  so.distractor_rate = distractors;
  so.allow_adjacent_repeats = repeats;
  so.seed = seed;
  return GenerateSynthCorpus(so);
}

static AlignmentMap WordMap(const SynthCorpus &c) {
  AlignmentMap m;
  for (const AlignmentTrack &t : c.words) m[t.utterance_id] = t;
  return m;
}

// Under the generating prototypes as centroids, the best segmentation of
// every utterance is the generating one: distractors would create segments
// below the minimum length or add a segment's worth of noise cost, and
// merging distinct words moves the mean away from both prototypes.
static void UnitTestGeneratingOptimum() {
  SynthCorpus c = Corpus(0.01, 0.5, 1, false);
  EsKMeansOptions o;
  ClusterModel truth;
  truth.centroids = c.prototypes;
  for (int32 k = 0; k < truth.centroids.rows(); k++) truth.centroids.row(k).normalize();
  for (std::size_t u = 0; u < c.features.size(); u++) {
    ViterbiResult r = ViterbiSegment(c.features[u], c.candidates[u], truth, o);
    WDISC_ASSERT(r.segmentation == c.true_segmentations[u]);
    if (c.candidates[u].NumSegments() <= 11) {
      oracle::BestSegmentation best = oracle::EnumerateSegmentations(
          c.features[u], c.candidates[u].Interior(), truth.centroids,
          o.min_segment_frames, o.max_span_candidates);
      WDISC_ASSERT(best.boundaries == c.true_segmentations[u].boundaries);
    }
  }
}

static void UnitTestFitSynthetic() {
  for (uint64_t seed : {1, 2, 3}) {
    SynthCorpus c = Corpus(0.01, 0.5, seed, false);
    EsKMeansOptions o;
    o.num_clusters = 20;
    o.seed = seed;
    o.num_workers = 2;
    o.kmeans_restarts = 10;
    EsKMeansResult r = EsKMeansFit(c.features, c.candidates, o);
    for (std::size_t u = 0; u < c.features.size(); u++)
      WDISC_ASSERT(IsSubsetOf(r.segmentations[u], c.candidates[u]));
    BoundaryScore b = ScoreBoundaries(r.segmentations, WordMap(c), 0.02, 50.0);
    std::cout << "synthetic seed " << seed << ": precision " << b.precision
              << " recall " << b.recall << " f1 " << b.f1 << "\n";
    // Uniformly seeded K-means does not always find all 20 word clusters,
    // so the fit is held to a floor rather than to exact recovery.
    WDISC_ASSERT(b.precision >= 99.0 && b.f1 >= 98.0);

    // The log alternates seg/cluster after the initial fit, and each
    // segmentation step never costs more than the previous segmentation
    // did under the same centroids.
    WDISC_ASSERT(r.log.size() == 1 + 2 * static_cast<std::size_t>(o.num_iterations));
    WDISC_ASSERT(r.log[0].phase == "cluster" && r.log[0].iteration == 0);
    for (std::size_t i = 1; i < r.log.size(); i += 2) {
      WDISC_ASSERT(r.log[i].phase == "seg" && r.log[i + 1].phase == "cluster");
      if (i > 1) WDISC_ASSERT(r.log[i].cost <= r.log[i - 1].cost * (1 + 1e-12));
    }

    // Determinism, independent of the worker count.
    o.num_workers = 1;
    EsKMeansResult again = EsKMeansFit(c.features, c.candidates, o);
    WDISC_ASSERT(again.segmentations == r.segmentations);
    WDISC_ASSERT(again.model.centroids == r.model.centroids);
  }
  WDISC_ASSERT(FormatIterationRecord({2, "seg", 1.5, 0.25, 0.0}) ==
               "iter=2 phase=seg cost=1.5 inertia=0.25");
}

static void UnitTestFixpointAndMonotone() {
  SynthCorpus c = Corpus(0.05, 1.0, 2);
  EsKMeansOptions o;
  o.num_clusters = 20;
  o.seed = 3;
  o.num_iterations = 12;
  EsKMeansResult r = EsKMeansFit(c.features, c.candidates, o);
  // Per utterance: re-segmenting under fixed centroids never costs more
  // than the segmentation it replaces.
  for (std::size_t u = 0; u < c.features.size(); u++) {
    double before = SegmentationCost(c.features[u], r.segmentations[u],
                                     r.model.centroids, o.embedding);
    ViterbiResult v = ViterbiSegment(c.features[u], c.candidates[u], r.model, o);
    WDISC_ASSERT(v.cost <= before * (1 + 1e-12) + 1e-12);
  }
  // Converged: the last iterations repeat exactly.
  const auto &log = r.log;
  std::size_t n = log.size();
  WDISC_ASSERT(log[n - 1].cost == log[n - 3].cost);
  WDISC_ASSERT(log[n - 1].inertia == log[n - 3].inertia);
  EsKMeansOptions more = o;
  more.num_iterations = 13;
  EsKMeansResult r2 = EsKMeansFit(c.features, c.candidates, more);
  WDISC_ASSERT(r2.segmentations == r.segmentations);
}

static void UnitTestFitErrors() {
  SynthCorpus c = Corpus(0.01, 0.5, 4);
  EsKMeansOptions o;
  o.num_clusters = 100000;
  WDISC_ASSERT(Throws<ParameterError>([&] { EsKMeansFit(c.features, c.candidates, o); }));
  o.num_clusters = 0;
  WDISC_ASSERT(Throws<ParameterError>([&] { EsKMeansFit(c.features, c.candidates, o); }));
  o.num_clusters = 5;
  o.init_keep_prob = 0.0;
  WDISC_ASSERT(Throws<ParameterError>([&] { EsKMeansFit(c.features, c.candidates, o); }));
  o.init_keep_prob = 0.5;
  std::vector<CandidateSet> fewer(c.candidates.begin(), c.candidates.end() - 1);
  WDISC_ASSERT(Throws<ShapeError>([&] { EsKMeansFit(c.features, fewer, o); }));
  std::vector<CandidateSet> swapped = c.candidates;
  std::swap(swapped[0], swapped[1]);
  WDISC_ASSERT(Throws<Error>([&] { EsKMeansFit(c.features, swapped, o); }));

  // Subsample embeddings work end to end as well.
  o.embedding = {EmbeddingKind::kSubsampleFlatten, 3};
  o.num_clusters = 20;
  EsKMeansResult r = EsKMeansFit(c.features, c.candidates, o);
  WDISC_ASSERT(r.model.Dim() == 3 * c.features[0].Dim());
  for (std::size_t u = 0; u < c.features.size(); u++)
    WDISC_ASSERT(IsSubsetOf(r.segmentations[u], c.candidates[u]));
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestSegmentScore();
  UnitTestRandomInit();
  UnitTestForwardPass();
  UnitTestTieToFewer();
  UnitTestOracle(false, 300);
  UnitTestOracle(true, 300);
  UnitTestCache();
  UnitTestGeneratingOptimum();
  UnitTestFitSynthetic();
  UnitTestFixpointAndMonotone();
  UnitTestFitErrors();
  std::cout << "Test OK.\n";
  return 0;
}
