// tools/wdisc-cli.cc

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

#include "wdisc-cli.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wdisc/base.h"
#include "wdisc/corpus-io.h"
#include "wdisc/kmeans.h"
#include "wdisc/pipeline.h"
#include "wdisc/synth-corpus.h"

namespace wdisc {

namespace {

const char *kUsage =
    "Full-coverage unsupervised word discovery on precomputed speech "
    "features.\n"
    "Bottom-up: prominence-based boundaries, then mean-pooled embeddings\n"
    "clustered with K-means.  Top-down: ES-KMeans+ alternates Viterbi\n"
    "segmentation over candidate boundaries with K-means refits.\n"
    "\n"
    "Usage:  wdisc [global options] <subcommand> [options]\n"
    "e.g.:\n"
    "  wdisc --seed 1 synth --out synth_dir\n"
    "  wdisc promseg --manifest m.txt --out hyp.bnd --classes hyp.cls "
    "--clusters 20\n"
    "  wdisc eskmeans --manifest m.txt --candidates c.txt --clusters 20 "
    "--out hyp.bnd --classes hyp.cls\n"
    "  wdisc eval --manifest m.txt --boundaries hyp.bnd --classes hyp.cls\n"
    "Options may also come from an INI file (--config) with one [section]\n"
    "per subcommand and `long-option-name = value` lines.";

struct GlobalOptions {
  uint64_t seed = 0;
  int32 workers = 0;
  int verbose = 0;
};

// Options shared by the subcommands that load a corpus and cluster.
struct CorpusOptions {
  std::string manifest;
  std::string boundary_feats;
  std::string lexicon_feats;
  std::string normalize = "corpus";
  int32 pca_dim = 250;
  int64_t pca_max_frames = 100000;
  int32 clusters = 0;
  std::string embedding = "mean";
  int32 samples = 10;
};

void AddCorpusOptions(CLI::App *app, CorpusOptions *o) {
  app->add_option("--manifest", o->manifest,
                  "Corpus manifest: <utt> <feature-path> <duration-s> lines")
      ->required();
  app->add_option("--boundary-feats", o->boundary_feats,
                  "Directory with the features used for boundary detection "
                  "(default: manifest paths)");
  app->add_option("--lexicon-feats", o->lexicon_feats,
                  "Directory with the features used for embeddings "
                  "(default: manifest paths)");
  app->add_option("--normalize", o->normalize,
                  "Mean-variance statistics scope")
      ->capture_default_str()
      ->check(CLI::IsMember({"corpus", "utterance"}));
  app->add_option("--pca-dim", o->pca_dim,
                  "PCA output dimension of the lexicon features; 0 disables "
                  "PCA")
      ->capture_default_str();
  app->add_option("--pca-max-frames", o->pca_max_frames,
                  "Frames sampled for the PCA fit")
      ->capture_default_str();
  app->add_option("--embedding", o->embedding,
                  "Segment embedding: mean or subsample")
      ->capture_default_str()
      ->check(CLI::IsMember({"mean", "subsample"}));
  app->add_option("--samples", o->samples,
                  "Frames kept by the subsample embedding")
      ->capture_default_str();
}

PipelineConfig MakeConfig(const CorpusOptions &o, const GlobalOptions &g) {
  PipelineConfig cfg;
  cfg.manifest = o.manifest;
  cfg.boundary_feature_dir = o.boundary_feats;
  cfg.lexicon_feature_dir = o.lexicon_feats;
  cfg.normalization = ParseNormalizationScope(o.normalize);
  cfg.pca_dim = o.pca_dim;
  cfg.pca_max_frames = o.pca_max_frames;
  cfg.num_clusters = o.clusters;
  cfg.embedding.kind = ParseEmbeddingKind(o.embedding);
  cfg.embedding.num_samples = o.samples;
  cfg.seed = g.seed;
  cfg.num_workers = g.workers;
  if (cfg.pca_dim < 0)
    WDISC_THROW(ParameterError) << "--pca-dim must be >= 0";
  return cfg;
}

void LogTimings(const std::vector<PhaseTiming> &timings) {
  for (const PhaseTiming &t : timings) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "timing phase=%s seconds=%.3f",
                  t.phase.c_str(), t.seconds);
    WDISC_LOG << buf;
  }
}

void RequireClusters(int32 k) {
  if (k < 1) WDISC_THROW(ParameterError) << "--clusters must be >= 1";
}

// ---------------------------------------------------------------- synth

struct SynthCmd {
  SynthOptions opts;
  std::string out;
  bool no_adjacent_repeats = false;

  void Register(CLI::App *app) {
    app->add_option("--out", out, "Output directory")->required();
    app->add_option("--vocab", opts.vocab_size, "Word types")
        ->capture_default_str();
    app->add_option("--dim", opts.dim, "Feature dimension")
        ->capture_default_str();
    app->add_option("--min-frames", opts.min_frames_per_word,
                    "Minimum frames per word token")
        ->capture_default_str();
    app->add_option("--max-frames", opts.max_frames_per_word,
                    "Maximum frames per word token")
        ->capture_default_str();
    app->add_option("--min-words", opts.min_words, "Minimum words/utterance")
        ->capture_default_str();
    app->add_option("--max-words", opts.max_words, "Maximum words/utterance")
        ->capture_default_str();
    app->add_option("--utterances", opts.num_utterances, "Utterances")
        ->capture_default_str();
    app->add_option("--noise", opts.noise_sigma,
                    "Standard deviation of the frame noise")
        ->capture_default_str();
    app->add_option("--distractor-rate", opts.distractor_rate,
                    "Spurious candidates per true word")
        ->capture_default_str();
    app->add_flag("--no-adjacent-repeats", no_adjacent_repeats,
                  "Never repeat a word type back to back");
    app->add_option("--phones-per-word", opts.phones_per_word,
                    "Phones in each word's transcription")
        ->capture_default_str();
    app->add_option("--num-phones", opts.num_phones, "Phone inventory size")
        ->capture_default_str();
    app->add_option("--speakers", opts.num_speakers, "Speakers")
        ->capture_default_str();
    app->add_option("--frame-rate", opts.frame_rate_hz, "Frames per second")
        ->capture_default_str();
  }

  void Run(const GlobalOptions &g) {
    opts.seed = g.seed;
    opts.allow_adjacent_repeats = !no_adjacent_repeats;
    SynthCorpus c = GenerateSynthCorpus(opts);
    WriteSynthCorpus(c, out);
    WDISC_LOG << "wrote " << c.features.size() << " utterances to " << out;
  }
};

// ---------------------------------------------------------------- promseg

struct PromSegCmd {
  CorpusOptions corpus;
  PromSegOptions promseg;
  std::string out;
  std::string classes;
  std::string centroids;
  int32 restarts = 1;
  int32 kmeans_iters = 25;

  void Register(CLI::App *app) {
    AddCorpusOptions(app, &corpus);
    app->add_option("--window", promseg.window_frames,
                    "Moving-average window (frames) on the dissimilarity "
                    "curve")
        ->capture_default_str();
    app->add_option("--prominence", promseg.prominence_threshold,
                    "Minimum peak prominence")
        ->capture_default_str();
    app->add_option("--out", out, "Output boundary file")->required();
    app->add_option("--classes", classes,
                    "Also cluster the segments and write this class file");
    app->add_option("--clusters", corpus.clusters, "K (with --classes)");
    app->add_option("--centroids", centroids,
                    "Write the K-means centroids (with --classes)");
    app->add_option("--kmeans-iters", kmeans_iters, "Lloyd iterations")
        ->capture_default_str();
    app->add_option("--restarts", restarts, "K-means restarts")
        ->capture_default_str();
  }

  void Run(const GlobalOptions &g) {
    PipelineConfig cfg = MakeConfig(corpus, g);
    cfg.promseg = promseg;
    cfg.cluster_max_iters = kmeans_iters;
    cfg.cluster_restarts = restarts;
    LoadedCorpus c = LoadCorpus(cfg);
    if (classes.empty()) {
      auto segs = SegmentCorpus(c.boundary_features, cfg.promseg,
                                cfg.normalization, cfg.num_workers);
      WriteBoundaryFile(segs, out);
      return;
    }
    RequireClusters(cfg.num_clusters);
    BottomUpResult r = RunPromSegClus(c, cfg);
    WriteBoundaryFile(r.segmentations, out);
    WriteClassFile(r.lexicon.classes, classes);
    if (!centroids.empty()) WriteCentroids(r.lexicon.model.centroids, centroids);
    LogTimings(r.timings);
  }
};

// ---------------------------------------------------------------- cluster

struct ClusterCmd {
  CorpusOptions corpus;
  std::string boundaries;
  std::string classes;
  std::string centroids;
  int32 restarts = 1;
  int32 kmeans_iters = 25;

  void Register(CLI::App *app) {
    AddCorpusOptions(app, &corpus);
    app->add_option("--boundaries", boundaries,
                    "Fixed segmentation (boundary file) to cluster")
        ->required();
    app->add_option("--clusters", corpus.clusters, "K")->required();
    app->add_option("--classes", classes, "Output class file")->required();
    app->add_option("--centroids", centroids, "Write the K-means centroids");
    app->add_option("--kmeans-iters", kmeans_iters, "Lloyd iterations")
        ->capture_default_str();
    app->add_option("--restarts", restarts, "K-means restarts")
        ->capture_default_str();
  }

  void Run(const GlobalOptions &g) {
    PipelineConfig cfg = MakeConfig(corpus, g);
    cfg.cluster_max_iters = kmeans_iters;
    cfg.cluster_restarts = restarts;
    RequireClusters(cfg.num_clusters);
    LoadedCorpus c = LoadCorpus(cfg);
    std::vector<Segmentation> fixed = ReadBoundaryFile(boundaries);
    BottomUpResult r = RunPromSegClus(c, cfg, &fixed);
    WriteClassFile(r.lexicon.classes, classes);
    if (!centroids.empty()) WriteCentroids(r.lexicon.model.centroids, centroids);
    LogTimings(r.timings);
  }
};

// ---------------------------------------------------------------- eskmeans

struct EsKMeansCmd {
  CorpusOptions corpus;
  EsKMeansOptions es;
  PromSegOptions cand = CandidatePromSegOptions();
  std::string candidates;
  std::string source = "auto";
  std::string out;
  std::string classes;
  std::string centroids;
  std::string log = "-";

  void Register(CLI::App *app) {
    AddCorpusOptions(app, &corpus);
    app->add_option("--clusters", corpus.clusters, "K")->required();
    app->add_option("--candidates", candidates, "Candidate boundary file");
    app->add_option("--candidate-source", source,
                    "auto (file if --candidates is given, else prominence), "
                    "prominence, file, max_recall_prominence or union")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "prominence", "file",
                               "max_recall_prominence", "union"}));
    app->add_option("--cand-window", cand.window_frames,
                    "Smoothing window for prominence candidates")
        ->capture_default_str();
    app->add_option("--cand-prominence", cand.prominence_threshold,
                    "Prominence threshold for prominence candidates")
        ->capture_default_str();
    app->add_option("--iterations", es.num_iterations,
                    "Segmentation/clustering iterations")
        ->capture_default_str();
    app->add_option("--keep-prob", es.init_keep_prob,
                    "Probability that a candidate is kept at initialisation")
        ->capture_default_str();
    app->add_option("--min-frames", es.min_segment_frames,
                    "Minimum segment duration in frames")
        ->capture_default_str();
    app->add_option("--max-span", es.max_span_candidates,
                    "Maximum number of candidate intervals in one segment")
        ->capture_default_str();
    app->add_option("--kmeans-iters", es.kmeans_max_iters,
                    "Lloyd iterations per refit")
        ->capture_default_str();
    app->add_option("--restarts", es.kmeans_restarts,
                    "K-means restarts of the initial fit")
        ->capture_default_str();
    app->add_flag("--weighted-centroids", es.weighted_centroids,
                  "Weight segments by duration when computing centroids");
    app->add_option("--out", out, "Output boundary file")->required();
    app->add_option("--classes", classes, "Output class file")->required();
    app->add_option("--centroids", centroids, "Write the final centroids");
    app->add_option("--log", log, "Iteration log file ('-' for stdout)")
        ->capture_default_str();
  }

  void Run(const GlobalOptions &g) {
    PipelineConfig cfg = MakeConfig(corpus, g);
    cfg.eskmeans = es;
    cfg.candidate_promseg = cand;
    cfg.candidate_file = candidates;
    cfg.candidate_source =
        source == "auto" ? (candidates.empty() ? CandidateSource::kProminence
                                               : CandidateSource::kFile)
                         : ParseCandidateSource(source);
    RequireClusters(cfg.num_clusters);
    LoadedCorpus c = LoadCorpus(cfg);
    std::optional<std::vector<CandidateSet>> file;
    if (!candidates.empty()) file = ReadCandidateFile(candidates);
    TopDownResult r = RunEsKMeansPlus(c, cfg, file ? &*file : nullptr);
    WriteBoundaryFile(r.segmentations, out);
    WriteClassFile(r.classes, classes);
    if (!centroids.empty()) WriteCentroids(r.fit.model.centroids, centroids);
    std::string text;
    for (const IterationRecord &rec : r.fit.log)
      text += FormatIterationRecord(rec) + "\n";
    if (log == "-") {
      std::cout << text << std::flush;
    } else {
      std::ofstream os(log);
      if (!(os << text)) WDISC_THROW(IoError) << "cannot write " << log;
    }
    if (r.fit.num_relaxed > 0)
      WDISC_WARN << r.fit.num_relaxed
                 << " utterance(s) had no segmentation meeting the minimum "
                    "duration; one frame was allowed there";
    LogTimings(r.timings);
  }
};

// ---------------------------------------------------------------- eval

struct EvalCmd {
  std::string manifest;
  std::string boundaries;
  std::string classes;
  std::string ref;
  std::string phones;
  std::string tier = "word";
  double tolerance_ms = 20.0;
  double frame_rate = 50.0;
  std::string pooling = "pooled";
  std::string point;
  bool json = false;

  void Register(CLI::App *app) {
    app->add_option("--manifest", manifest,
                    "Corpus manifest (durations and #alignment paths)")
        ->required();
    app->add_option("--boundaries", boundaries, "Hypothesis boundary file");
    app->add_option("--classes", classes, "Hypothesis class file");
    app->add_option("--ref", ref,
                    "Reference alignment of --tier (default: from manifest)");
    app->add_option("--phones", phones,
                    "Phone alignment for NED (default: from manifest)");
    app->add_option("--tier", tier, "Reference tier for boundary scores")
        ->capture_default_str()
        ->check(CLI::IsMember({"word", "syllable", "phone"}));
    app->add_option("--tolerance-ms", tolerance_ms, "Boundary tolerance")
        ->capture_default_str();
    app->add_option("--frame-rate", frame_rate,
                    "Frames per second of the boundary file")
        ->capture_default_str();
    app->add_option("--ned-pooling", pooling,
                    "pooled: average over all same-class pairs; "
                    "per-cluster: average of per-cluster averages")
        ->capture_default_str()
        ->check(CLI::IsMember({"pooled", "per-cluster"}));
    app->add_option("--point", point,
                    "Also print a NED-vs-bitrate JSON line with this label");
    app->add_flag("--json", json, "Print the report as one JSON line");
  }

  void Run(const GlobalOptions &) {
    if (boundaries.empty() && classes.empty())
      WDISC_THROW(ValidationError)
          << "nothing to evaluate: give --boundaries and/or --classes";
    CorpusManifest m = ReadManifest(manifest);
    EvalOptions opts;
    opts.tier = ParseTier(tier);
    opts.tolerance_s = tolerance_ms / 1000.0;
    opts.frame_rate_hz = frame_rate;
    opts.ned_pooling =
        pooling == "pooled" ? NedPooling::kPooled : NedPooling::kPerCluster;

    auto alignment_path = [&](Tier t, const std::string &override_path) {
      if (!override_path.empty()) return override_path;
      auto it = m.alignment_paths.find(t);
      if (it == m.alignment_paths.end())
        WDISC_THROW(ValidationError)
            << "no " << TierName(t) << " alignment: pass it explicitly or add "
            << "'#alignment " << TierName(t) << " <path>' to the manifest";
      return it->second;
    };

    std::optional<std::vector<Segmentation>> hyp;
    std::optional<AlignmentMap> ref_map, phone_map;
    std::optional<ClassFile> cls;
    if (!boundaries.empty()) {
      hyp = OrderByManifest(ReadBoundaryFile(boundaries), m);
      ref_map = ReadAlignmentMap(alignment_path(opts.tier, ref), opts.tier);
    }
    if (!classes.empty()) {
      cls = ReadClassFile(classes, &m);
      if (!phones.empty() || m.alignment_paths.count(Tier::kPhone))
        phone_map =
            ReadAlignmentMap(alignment_path(Tier::kPhone, phones), Tier::kPhone);
    }
    EvalReport r = RunEval(hyp ? &*hyp : nullptr, cls ? &*cls : nullptr,
                           ref_map ? &*ref_map : nullptr,
                           phone_map ? &*phone_map : nullptr,
                           m.TotalDuration(), opts);
    std::cout << FormatEvalReport(r, json);
    if (!point.empty()) std::cout << FormatNedBitratePoint(r, point);
    std::cout << std::flush;
  }
};

// ---------------------------------------------------------------- report

struct ReportCmd {
  std::string manifest;
  std::string classes;
  std::string words;
  std::string speakers;
  int32 top = 20;
  bool json = false;

  void Register(CLI::App *app) {
    app->add_option("--classes", classes, "Class file")->required();
    app->add_option("--manifest", manifest,
                    "Manifest; supplies the word alignment when --words is "
                    "not given");
    app->add_option("--words", words, "Word alignment file");
    app->add_option("--speakers", speakers,
                    "Speaker map: <utt> <speaker> lines");
    app->add_option("--top", top, "Largest clusters to list")
        ->capture_default_str();
    app->add_flag("--json", json, "One JSON line per cluster");
  }

  void Run(const GlobalOptions &) {
    std::optional<CorpusManifest> m;
    if (!manifest.empty()) m = ReadManifest(manifest);
    std::string words_path = words;
    if (words_path.empty() && m) {
      auto it = m->alignment_paths.find(Tier::kWord);
      if (it != m->alignment_paths.end()) words_path = it->second;
    }
    if (words_path.empty())
      WDISC_THROW(ValidationError)
          << "no word alignment: give --words or a manifest with one";
    ClassFile cls = ReadClassFile(classes, m ? &*m : nullptr);
    AlignmentMap w = ReadAlignmentMap(words_path, Tier::kWord);
    std::optional<std::map<std::string, std::string>> spk;
    if (!speakers.empty()) spk = ReadSpeakerMap(speakers);
    std::cout << FormatClusterReport(
                     ClusterReport(cls, w, spk ? &*spk : nullptr, top), json)
              << std::flush;
  }
};

}  // namespace

int RunCli(int argc, char **argv) {
  CLI::App app(kUsage, "wdisc");
  app.set_config("--config", "", "INI file with one section per subcommand");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random choice")
      ->capture_default_str();
  app.add_option("--workers", g.workers,
                 "Worker threads (0 = available parallelism)")
      ->capture_default_str();
  app.add_option("-v,--verbose", g.verbose, "Verbosity of progress logging")
      ->capture_default_str();

  SynthCmd synth;
  PromSegCmd promseg;
  ClusterCmd cluster;
  EsKMeansCmd eskmeans;
  EvalCmd eval;
  ReportCmd report;
  CLI::App *synth_app =
      app.add_subcommand("synth", "Write a synthetic corpus with ground truth");
  CLI::App *promseg_app = app.add_subcommand(
      "promseg", "Prominence segmentation; with --classes, the whole "
                 "bottom-up system");
  CLI::App *cluster_app = app.add_subcommand(
      "cluster", "Cluster the segments of a fixed segmentation");
  CLI::App *eskmeans_app =
      app.add_subcommand("eskmeans", "Top-down ES-KMeans+ segmentation");
  CLI::App *eval_app =
      app.add_subcommand("eval", "Segmentation and lexicon metrics");
  CLI::App *report_app =
      app.add_subcommand("report", "Summary of the largest clusters");
  synth.Register(synth_app);
  promseg.Register(promseg_app);
  cluster.Register(cluster_app);
  eskmeans.Register(eskmeans_app);
  eval.Register(eval_app);
  report.Register(report_app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitValidation;
  }

  SetVerboseLevel(g.verbose);
  if (g.workers < 0) {
    std::cerr << "ERROR: --workers must be >= 0\n";
    return kExitValidation;
  }
  try {
    if (*synth_app) synth.Run(g);
    else if (*promseg_app) promseg.Run(g);
    else if (*cluster_app) cluster.Run(g);
    else if (*eskmeans_app) eskmeans.Run(g);
    else if (*eval_app) eval.Run(g);
    else if (*report_app) report.Run(g);
  } catch (const IoError &e) {
    std::cerr << "ERROR: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error &e) {
    std::cerr << "ERROR: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception &e) {
    std::cerr << "ERROR (internal): " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace wdisc
