// include/wdisc/pipeline.h

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

#ifndef WDISC_PIPELINE_H_
#define WDISC_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdisc/base.h"
#include "wdisc/corpus-io.h"
#include "wdisc/es-kmeans.h"
#include "wdisc/eval-metrics.h"
#include "wdisc/feature-io.h"
#include "wdisc/kmeans.h"
#include "wdisc/prom-seg.h"
#include "wdisc/seg-embed.h"

namespace wdisc {

enum class CandidateSource {
  kProminence,            // prominence peaks with the candidate settings
  kFile,                  // a candidate file (e.g. ground-truth boundaries)
  kMaxRecallProminence,   // prominence peaks with the max-recall settings
  kUnion,                 // candidate file plus prominence peaks
};

CandidateSource ParseCandidateSource(const std::string &name);

enum class NormalizationScope { kCorpus, kUtterance };

NormalizationScope ParseNormalizationScope(const std::string &name);

struct PipelineConfig {
  std::string manifest;
  /// When set, feature files are looked up in this directory by file name
  /// instead of at the manifest path.  Boundary detection and the lexicon
  /// may use features from different encoder layers.
  std::string boundary_feature_dir;
  std::string lexicon_feature_dir;

  PromSegOptions promseg;  // bottom-up boundaries
  PromSegOptions candidate_promseg = CandidatePromSegOptions();
  NormalizationScope normalization = NormalizationScope::kCorpus;

  int32 pca_dim = 250;  // 0 keeps the raw lexicon features
  int64_t pca_max_frames = 100000;

  int32 num_clusters = 1;
  EmbeddingOptions embedding;
  /// K-means effort for the bottom-up lexicon.
  int32 cluster_max_iters = 25;
  int32 cluster_restarts = 1;

  /// Top-down settings; K, seed, workers and the embedding are taken from
  /// the fields of this struct.
  EsKMeansOptions eskmeans;
  CandidateSource candidate_source = CandidateSource::kProminence;
  std::string candidate_file;

  uint64_t seed = 0;
  int32 num_workers = 0;
};

struct LoadedCorpus {
  CorpusManifest manifest;
  std::vector<FeatureMatrix> boundary_features;
  std::vector<FeatureMatrix> lexicon_features;
};

/// Reads every feature file named by the manifest.  Missing files are
/// collected and reported together in one ValidationError.
LoadedCorpus LoadCorpus(const PipelineConfig &cfg);

/// Mean-variance normalisation, statistics pooled over the corpus or taken
/// per utterance.
std::vector<FeatureMatrix> NormalizeFeatures(
    const std::vector<FeatureMatrix> &features, NormalizationScope scope,
    int32 num_workers);

/// Normalises and runs prominence segmentation on every utterance.
std::vector<Segmentation> SegmentCorpus(
    const std::vector<FeatureMatrix> &boundary_features,
    const PromSegOptions &opts, NormalizationScope scope, int32 num_workers);

/// PCA fitted on a seeded frame sample and applied to every utterance;
/// returns the input unchanged when pca_dim is 0.
std::vector<FeatureMatrix> ProjectLexiconFeatures(
    const std::vector<FeatureMatrix> &lexicon_features, int32 pca_dim,
    int64_t max_frames, uint64_t seed, int32 num_workers);

/// Turns clustered segments into a class file, times in seconds.
ClassFile MakeClassFile(const std::vector<SegmentEmbedding> &segments,
                        const std::vector<int32> &assignment,
                        const std::vector<FeatureMatrix> &features);

struct PhaseTiming {
  std::string phase;
  double seconds = 0.0;
};

struct LexiconResult {
  ClassFile classes;
  ClusterModel model;
  std::vector<SegmentEmbedding> segments;
};

/// Embeds every segment of fixed segmentations and clusters them.
/// `features` are already projected.
LexiconResult BuildLexicon(const std::vector<FeatureMatrix> &features,
                           const std::vector<Segmentation> &segmentations,
                           const PipelineConfig &cfg);

struct BottomUpResult {
  std::vector<Segmentation> segmentations;
  LexiconResult lexicon;
  std::vector<PhaseTiming> timings;
};

/// Bottom-up system: boundaries from prominence peaks (or `fixed_boundaries`
/// when given), then PCA, mean-pooled embeddings and K-means.  The
/// boundaries are final before clustering starts.
BottomUpResult RunPromSegClus(
    const LoadedCorpus &corpus, const PipelineConfig &cfg,
    const std::vector<Segmentation> *fixed_boundaries = nullptr);

/// Candidate sets for the top-down system in manifest order.
/// `file_candidates` is required for kFile and kUnion.
std::vector<CandidateSet> ResolveCandidates(
    const LoadedCorpus &corpus, const PipelineConfig &cfg,
    const std::vector<CandidateSet> *file_candidates);

struct TopDownResult {
  std::vector<CandidateSet> candidates;
  std::vector<Segmentation> segmentations;
  ClassFile classes;
  EsKMeansResult fit;
  std::vector<PhaseTiming> timings;
};

TopDownResult RunEsKMeansPlus(
    const LoadedCorpus &corpus, const PipelineConfig &cfg,
    const std::vector<CandidateSet> *file_candidates = nullptr);

/// Puts sets into manifest order; throws ValidationError on missing or
/// unknown utterances.
template <class Set>
std::vector<Set> OrderByManifest(const std::vector<Set> &sets,
                                 const CorpusManifest &manifest);

struct EvalOptions {
  double tolerance_s = 0.020;
  double frame_rate_hz = 50.0;
  Tier tier = Tier::kWord;
  NedPooling ned_pooling = NedPooling::kPooled;
};

struct EvalReport {
  std::string tier;
  double tolerance_s = 0.0;
  std::optional<BoundaryScore> boundary;
  std::optional<TokenScore> token;
  std::optional<LexiconScore> lexicon;
  std::optional<double> bitrate;  // also set when NED is unavailable
  std::optional<std::string> ned_error;
};

/// Computes whatever the inputs allow: boundary and token scores need
/// hyp + ref, NED needs classes + phones, bitrate needs classes.
EvalReport RunEval(const std::vector<Segmentation> *hyp,
                   const ClassFile *classes, const AlignmentMap *ref,
                   const AlignmentMap *phones, double total_duration_s,
                   const EvalOptions &opts);

/// Human-readable multi-line report, or a single JSON object per line.
std::string FormatEvalReport(const EvalReport &r, bool json);

/// NED-vs-bitrate point as one JSON line: {"label":..,"ned":..,"bitrate":..}.
std::string FormatNedBitratePoint(const EvalReport &r,
                                  const std::string &label);

std::string FormatClusterReport(const std::vector<ClusterSummary> &clusters,
                                bool json);

}  // namespace wdisc

#endif  // WDISC_PIPELINE_H_
