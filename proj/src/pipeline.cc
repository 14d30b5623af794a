// src/pipeline.cc

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

#include "wdisc/pipeline.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "json.hpp"
#include "wdisc/parallel.h"
#include "wdisc/preprocess.h"

namespace wdisc {

namespace {

class PhaseTimer {
 public:
  explicit PhaseTimer(std::vector<PhaseTiming> *out) : out_(out) {}
  void Mark(const std::string &phase) {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - start_).count();
    out_->push_back({phase, s});
    WDISC_VLOG(1) << "phase " << phase << " took " << s << "s";
    start_ = now;
  }

 private:
  std::vector<PhaseTiming> *out_;
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string FeaturePath(const ManifestEntry &e, const std::string &dir) {
  if (dir.empty()) return e.feature_path;
  return (std::filesystem::path(dir) /
          std::filesystem::path(e.feature_path).filename())
      .string();
}

std::vector<FeatureMatrix> ReadAll(const CorpusManifest &m,
                                   const std::string &dir, int32 workers) {
  std::vector<std::string> missing;
  for (const ManifestEntry &e : m.entries)
    if (!std::filesystem::exists(FeaturePath(e, dir)))
      missing.push_back(e.utterance_id + " (" + FeaturePath(e, dir) + ")");
  if (!missing.empty()) {
    std::ostringstream ss;
    ss << missing.size() << " utterance(s) have no feature file:";
    for (const std::string &s : missing) ss << ' ' << s;
    WDISC_THROW(ValidationError) << ss.str();
  }
  std::vector<FeatureMatrix> out(m.entries.size());
  ParallelFor(out.size(), workers, [&](std::size_t i) {
    out[i] = ReadFeatureFile(FeaturePath(m.entries[i], dir),
                             m.entries[i].utterance_id);
  });
  return out;
}

void CheckAligned(const std::vector<FeatureMatrix> &features,
                  const std::vector<Segmentation> &segs) {
  if (features.size() != segs.size())
    WDISC_THROW(ShapeError) << features.size() << " utterances but "
                            << segs.size() << " segmentations";
  for (std::size_t i = 0; i < segs.size(); i++)
    if (segs[i].utterance_id != features[i].utterance_id ||
        segs[i].num_frames != features[i].NumFrames())
      WDISC_THROW(ValidationError)
          << "segmentation of '" << segs[i].utterance_id << "' ("
          << segs[i].num_frames << " frames) does not match features of '"
          << features[i].utterance_id << "' (" << features[i].NumFrames()
          << " frames)";
}

EsKMeansOptions TopDownOptions(const PipelineConfig &cfg) {
  EsKMeansOptions o = cfg.eskmeans;
  o.num_clusters = cfg.num_clusters;
  o.seed = cfg.seed;
  o.num_workers = cfg.num_workers;
  o.embedding = cfg.embedding;
  return o;
}

}  // namespace

CandidateSource ParseCandidateSource(const std::string &name) {
  if (name == "prominence") return CandidateSource::kProminence;
  if (name == "file") return CandidateSource::kFile;
  if (name == "max_recall_prominence" || name == "max-recall")
    return CandidateSource::kMaxRecallProminence;
  if (name == "union") return CandidateSource::kUnion;
  WDISC_THROW(ParameterError)
      << "unknown candidate source '" << name
      << "' (expected prominence|file|max_recall_prominence|union)";
}

NormalizationScope ParseNormalizationScope(const std::string &name) {
  if (name == "corpus") return NormalizationScope::kCorpus;
  if (name == "utterance") return NormalizationScope::kUtterance;
  WDISC_THROW(ParameterError) << "unknown normalization scope '" << name
                              << "' (expected corpus|utterance)";
}

LoadedCorpus LoadCorpus(const PipelineConfig &cfg) {
  LoadedCorpus c;
  c.manifest = ReadManifest(cfg.manifest);
  if (c.manifest.entries.empty())
    WDISC_THROW(ValidationError) << "manifest " << cfg.manifest << " is empty";
  c.boundary_features =
      ReadAll(c.manifest, cfg.boundary_feature_dir, cfg.num_workers);
  if (cfg.lexicon_feature_dir == cfg.boundary_feature_dir) {
    c.lexicon_features = c.boundary_features;
  } else {
    c.lexicon_features =
        ReadAll(c.manifest, cfg.lexicon_feature_dir, cfg.num_workers);
    for (std::size_t i = 0; i < c.boundary_features.size(); i++)
      if (c.boundary_features[i].NumFrames() !=
          c.lexicon_features[i].NumFrames())
        WDISC_THROW(ValidationError)
            << "boundary and lexicon features of '"
            << c.manifest.entries[i].utterance_id
            << "' differ in frame count";
  }
  return c;
}

std::vector<FeatureMatrix> NormalizeFeatures(
    const std::vector<FeatureMatrix> &features, NormalizationScope scope,
    int32 num_workers) {
  std::vector<FeatureMatrix> out(features.size());
  if (scope == NormalizationScope::kCorpus) {
    Normalizer n = FitNormalizer(std::span<const FeatureMatrix>(features));
    ParallelFor(features.size(), num_workers, [&](std::size_t i) {
      out[i] = ApplyNormalizer(n, features[i]);
    });
  } else {
    ParallelFor(features.size(), num_workers, [&](std::size_t i) {
      out[i] = ApplyNormalizer(FitNormalizer(features[i].data), features[i]);
    });
  }
  return out;
}

std::vector<Segmentation> SegmentCorpus(
    const std::vector<FeatureMatrix> &boundary_features,
    const PromSegOptions &opts, NormalizationScope scope, int32 num_workers) {
  std::vector<FeatureMatrix> normed =
      NormalizeFeatures(boundary_features, scope, num_workers);
  std::vector<Segmentation> out(normed.size());
  ParallelFor(normed.size(), num_workers, [&](std::size_t i) {
    out[i] = ProminenceSegment(normed[i], opts);
  });
  return out;
}

std::vector<FeatureMatrix> ProjectLexiconFeatures(
    const std::vector<FeatureMatrix> &lexicon_features, int32 pca_dim,
    int64_t max_frames, uint64_t seed, int32 num_workers) {
  if (pca_dim == 0) return lexicon_features;
  PcaModel pca = FitPca(
      SampleFrames(std::span<const FeatureMatrix>(lexicon_features),
                   max_frames, seed),
      pca_dim);
  std::vector<FeatureMatrix> out(lexicon_features.size());
  ParallelFor(out.size(), num_workers, [&](std::size_t i) {
    out[i] = ApplyPca(pca, lexicon_features[i]);
  });
  return out;
}

ClassFile MakeClassFile(const std::vector<SegmentEmbedding> &segments,
                        const std::vector<int32> &assignment,
                        const std::vector<FeatureMatrix> &features) {
  if (segments.size() != assignment.size())
    WDISC_THROW(ShapeError) << segments.size() << " segments but "
                            << assignment.size() << " assignments";
  std::map<std::string, double> rate;
  for (const FeatureMatrix &f : features) rate[f.utterance_id] = f.frame_rate_hz;
  ClassFile out;
  for (std::size_t i = 0; i < segments.size(); i++) {
    const SegmentEmbedding &z = segments[i];
    auto it = rate.find(z.utterance_id);
    if (it == rate.end())
      WDISC_THROW(ValidationError) << "segment of unknown utterance '"
                                   << z.utterance_id << "'";
    out.classes[assignment[i]].push_back(
        {z.utterance_id, z.start / it->second, z.end / it->second});
  }
  return out;
}

LexiconResult BuildLexicon(const std::vector<FeatureMatrix> &features,
                           const std::vector<Segmentation> &segmentations,
                           const PipelineConfig &cfg) {
  CheckAligned(features, segmentations);
  std::vector<std::vector<SegmentEmbedding>> per_utt(features.size());
  ParallelFor(features.size(), cfg.num_workers, [&](std::size_t i) {
    per_utt[i] = EmbedSegmentation(features[i], segmentations[i], cfg.embedding);
  });
  LexiconResult r;
  for (auto &v : per_utt)
    r.segments.insert(r.segments.end(), std::make_move_iterator(v.begin()),
                      std::make_move_iterator(v.end()));
  if (r.segments.empty())
    WDISC_THROW(ValidationError) << "no segments to cluster";
  DoubleMatrix points(static_cast<Eigen::Index>(r.segments.size()),
                      r.segments.front().vector.size());
  for (std::size_t i = 0; i < r.segments.size(); i++)
    points.row(i) = r.segments[i].vector.transpose();
  KMeansOptions km;
  km.num_clusters = cfg.num_clusters;
  km.max_iters = cfg.cluster_max_iters;
  km.seed = cfg.seed;
  km.num_restarts = cfg.cluster_restarts;
  km.num_workers = cfg.num_workers;
  r.model = KMeansFit(points, km);
  r.classes = MakeClassFile(r.segments, r.model.assignment, features);
  return r;
}

BottomUpResult RunPromSegClus(const LoadedCorpus &corpus,
                              const PipelineConfig &cfg,
                              const std::vector<Segmentation> *fixed) {
  BottomUpResult r;
  PhaseTimer timer(&r.timings);
  r.segmentations =
      fixed != nullptr
          ? OrderByManifest(*fixed, corpus.manifest)
          : SegmentCorpus(corpus.boundary_features, cfg.promseg,
                          cfg.normalization, cfg.num_workers);
  timer.Mark("segment");
  std::vector<FeatureMatrix> projected = ProjectLexiconFeatures(
      corpus.lexicon_features, cfg.pca_dim, cfg.pca_max_frames, cfg.seed,
      cfg.num_workers);
  timer.Mark("pca");
  r.lexicon = BuildLexicon(projected, r.segmentations, cfg);
  timer.Mark("cluster");
  return r;
}

std::vector<CandidateSet> ResolveCandidates(
    const LoadedCorpus &corpus, const PipelineConfig &cfg,
    const std::vector<CandidateSet> *file_candidates) {
  auto from_prominence = [&](const PromSegOptions &opts) {
    std::vector<CandidateSet> out;
    for (Segmentation &s : SegmentCorpus(corpus.boundary_features, opts,
                                         cfg.normalization, cfg.num_workers)) {
      CandidateSet c;
      static_cast<BoundarySet &>(c) = std::move(s);
      out.push_back(std::move(c));
    }
    return out;
  };
  auto from_file = [&]() {
    if (file_candidates == nullptr)
      WDISC_THROW(ParameterError) << "candidate source needs a candidate file";
    return OrderByManifest(*file_candidates, corpus.manifest);
  };
  std::vector<CandidateSet> out;
  switch (cfg.candidate_source) {
    case CandidateSource::kProminence:
      out = from_prominence(cfg.candidate_promseg);
      break;
    case CandidateSource::kMaxRecallProminence:
      out = from_prominence(MaxRecallPromSegOptions());
      break;
    case CandidateSource::kFile:
      out = from_file();
      break;
    case CandidateSource::kUnion: {
      std::vector<CandidateSet> file = from_file();
      std::vector<CandidateSet> prom = from_prominence(cfg.candidate_promseg);
      for (std::size_t i = 0; i < file.size(); i++)
        out.push_back(UnionCandidates(file[i], prom[i]));
      break;
    }
  }
  for (std::size_t i = 0; i < out.size(); i++)
    if (out[i].num_frames != corpus.lexicon_features[i].NumFrames())
      WDISC_THROW(ValidationError)
          << "candidates of '" << out[i].utterance_id << "' cover "
          << out[i].num_frames << " frames, features have "
          << corpus.lexicon_features[i].NumFrames();
  return out;
}

TopDownResult RunEsKMeansPlus(const LoadedCorpus &corpus,
                              const PipelineConfig &cfg,
                              const std::vector<CandidateSet> *file_candidates) {
  TopDownResult r;
  PhaseTimer timer(&r.timings);
  r.candidates = ResolveCandidates(corpus, cfg, file_candidates);
  timer.Mark("candidates");
  std::vector<FeatureMatrix> projected = ProjectLexiconFeatures(
      corpus.lexicon_features, cfg.pca_dim, cfg.pca_max_frames, cfg.seed,
      cfg.num_workers);
  timer.Mark("pca");
  r.fit = EsKMeansFit(projected, r.candidates, TopDownOptions(cfg));
  timer.Mark("eskmeans");
  r.segmentations = r.fit.segmentations;
  r.classes = MakeClassFile(r.fit.segments, r.fit.model.assignment, projected);
  return r;
}

template <class Set>
std::vector<Set> OrderByManifest(const std::vector<Set> &sets,
                                 const CorpusManifest &manifest) {
  std::map<std::string, const Set *> by_id;
  for (const Set &s : sets) {
    if (manifest.Find(s.utterance_id) == nullptr)
      WDISC_THROW(ValidationError) << "utterance '" << s.utterance_id
                                   << "' is not in the manifest";
    by_id[s.utterance_id] = &s;
  }
  std::vector<Set> out;
  for (const ManifestEntry &e : manifest.entries) {
    auto it = by_id.find(e.utterance_id);
    if (it == by_id.end())
      WDISC_THROW(ValidationError) << "no boundaries for utterance '"
                                   << e.utterance_id << "'";
    out.push_back(*it->second);
  }
  return out;
}

template std::vector<Segmentation> OrderByManifest(
    const std::vector<Segmentation> &, const CorpusManifest &);
template std::vector<CandidateSet> OrderByManifest(
    const std::vector<CandidateSet> &, const CorpusManifest &);

EvalReport RunEval(const std::vector<Segmentation> *hyp,
                   const ClassFile *classes, const AlignmentMap *ref,
                   const AlignmentMap *phones, double total_duration_s,
                   const EvalOptions &opts) {
  EvalReport r;
  r.tier = TierName(opts.tier);
  r.tolerance_s = opts.tolerance_s;
  if (hyp != nullptr && ref != nullptr) {
    r.boundary =
        ScoreBoundaries(*hyp, *ref, opts.tolerance_s, opts.frame_rate_hz);
    r.token = ScoreTokens(*hyp, *ref, opts.tolerance_s, opts.frame_rate_hz);
  }
  if (classes != nullptr) {
    r.bitrate = Bitrate(*classes, total_duration_s);
    if (phones != nullptr) {
      try {
        r.lexicon =
            ScoreLexicon(*classes, *phones, total_duration_s, opts.ned_pooling);
      } catch (const UndefinedMetricError &e) {
        r.ned_error = e.what();
      }
    }
  }
  return r;
}

namespace {

std::string Fixed(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

}  // namespace

std::string FormatEvalReport(const EvalReport &r, bool json) {
  if (json) {
    nlohmann::ordered_json j;
    j["tier"] = r.tier;
    j["tolerance_ms"] = r.tolerance_s * 1000.0;
    if (r.boundary) {
      const BoundaryScore &b = *r.boundary;
      j["boundary_precision"] = b.precision;
      j["boundary_recall"] = b.recall;
      j["boundary_f1"] = b.f1;
      j["over_segmentation"] = b.over_segmentation;
      j["r_value"] = b.r_value;
      j["n_hyp"] = b.n_hyp;
      j["n_ref"] = b.n_ref;
      j["n_hits"] = b.n_hits;
    }
    if (r.token) {
      j["token_precision"] = r.token->precision;
      j["token_recall"] = r.token->recall;
      j["token_f1"] = r.token->f1;
      j["n_hit_tokens"] = r.token->n_hit_tokens;
      j["n_hyp_tokens"] = r.token->n_hyp_tokens;
      j["n_ref_tokens"] = r.token->n_ref_tokens;
    }
    if (r.lexicon) {
      j["ned"] = r.lexicon->ned;
      j["n_pairs"] = r.lexicon->n_pairs;
    }
    if (r.ned_error) j["ned_error"] = *r.ned_error;
    if (r.bitrate) j["bitrate"] = *r.bitrate;
    return j.dump() + "\n";
  }
  std::ostringstream os;
  os << "tier=" << r.tier << " tolerance_ms=" << Fixed(r.tolerance_s * 1000.0, 1)
     << '\n';
  if (r.boundary) {
    const BoundaryScore &b = *r.boundary;
    os << "boundary precision=" << Fixed(b.precision)
       << " recall=" << Fixed(b.recall) << " f1=" << Fixed(b.f1)
       << " os=" << Fixed(b.over_segmentation)
       << " r_value=" << Fixed(b.r_value) << " hits=" << b.n_hits
       << " hyp=" << b.n_hyp << " ref=" << b.n_ref << '\n';
  }
  if (r.token) {
    os << "token precision=" << Fixed(r.token->precision)
       << " recall=" << Fixed(r.token->recall) << " f1=" << Fixed(r.token->f1)
       << " hits=" << r.token->n_hit_tokens << " hyp=" << r.token->n_hyp_tokens
       << " ref=" << r.token->n_ref_tokens << '\n';
  }
  if (r.lexicon)
    os << "lexicon ned=" << Fixed(r.lexicon->ned)
       << " pairs=" << r.lexicon->n_pairs << '\n';
  if (r.ned_error) os << "lexicon ned=undefined (" << *r.ned_error << ")\n";
  if (r.bitrate) os << "bitrate bits_per_s=" << Fixed(*r.bitrate) << '\n';
  return os.str();
}

std::string FormatNedBitratePoint(const EvalReport &r,
                                  const std::string &label) {
  nlohmann::ordered_json j;
  j["label"] = label;
  if (r.lexicon) j["ned"] = r.lexicon->ned;
  else j["ned"] = nullptr;
  if (r.bitrate) j["bitrate"] = *r.bitrate;
  else j["bitrate"] = nullptr;
  return j.dump() + "\n";
}

std::string FormatClusterReport(const std::vector<ClusterSummary> &clusters,
                                bool json) {
  std::ostringstream os;
  for (const ClusterSummary &c : clusters) {
    if (json) {
      nlohmann::ordered_json j;
      j["cluster"] = c.cluster_id;
      j["tokens"] = c.num_tokens;
      if (c.num_speakers) j["speakers"] = *c.num_speakers;
      j["mean_duration_s"] = c.mean_duration_s;
      nlohmann::ordered_json hist = nlohmann::ordered_json::object();
      for (const auto &[label, n] : c.label_histogram) hist[label] = n;
      j["labels"] = hist;
      os << j.dump() << '\n';
    } else {
      os << "cluster " << c.cluster_id << ": tokens=" << c.num_tokens;
      if (c.num_speakers) os << " speakers=" << *c.num_speakers;
      os << " mean_duration_s=" << Fixed(c.mean_duration_s, 3) << '\n';
      for (const auto &[label, n] : c.label_histogram)
        os << "  " << label << ' ' << n << '\n';
    }
  }
  return os.str();
}

}  // namespace wdisc
