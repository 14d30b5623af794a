// src/pipeline-test.cc

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

#include <filesystem>

#include "wdisc/synth-corpus.h"
#include "test-util.h"

namespace wdisc {

using test::Throws;

struct Fixture {
  SynthCorpus synth;
  std::string dir;
  PipelineConfig cfg;
  LoadedCorpus corpus;
  AlignmentMap words, phones;
};

static Fixture MakeFixture(const std::string &tag, double sigma,
                           double distractor_rate, int32 num_utterances,
                           uint64_t seed) {
  Fixture f;
  SynthOptions o;
  o.noise_sigma = sigma;
  o.distractor_rate = distractor_rate;
  o.allow_adjacent_repeats = false;
  o.num_utterances = num_utterances;
  o.seed = seed;
  f.synth = GenerateSynthCorpus(o);
  f.dir = test::TempDir(tag);
  WriteSynthCorpus(f.synth, f.dir);
  f.cfg.manifest = f.dir + "/manifest.txt";
  f.cfg.promseg = {1, 0.3};
  f.cfg.pca_dim = 16;
  f.cfg.num_clusters = o.vocab_size;
  f.cfg.cluster_restarts = 10;
  f.cfg.seed = seed;
  f.corpus = LoadCorpus(f.cfg);
  for (const AlignmentTrack &t : f.synth.words) f.words[t.utterance_id] = t;
  for (const AlignmentTrack &t : f.synth.phones) f.phones[t.utterance_id] = t;
  return f;
}

static EvalReport Evaluate(const Fixture &f, const std::vector<Segmentation> &segs,
                           const ClassFile &classes) {
  return RunEval(&segs, &classes, &f.words, &f.phones,
                 f.corpus.manifest.TotalDuration(), EvalOptions());
}

static void UnitTestNoiselessBottomUp() {
  Fixture f = MakeFixture("pipe-clean", 0.0, 0.0, 60, 1);
  BottomUpResult r = RunPromSegClus(f.corpus, f.cfg);
  EvalReport e = Evaluate(f, r.segmentations, r.lexicon.classes);
  WDISC_ASSERT(e.boundary->f1 == 100.0);
  WDISC_ASSERT(e.lexicon.has_value() && e.lexicon->ned == 0.0);
  WDISC_ASSERT(r.timings.size() == 3 && r.timings[0].phase == "segment");

  // Determinism: identical boundaries and class files.
  BottomUpResult again = RunPromSegClus(f.corpus, f.cfg);
  for (std::size_t u = 0; u < r.segmentations.size(); u++)
    WDISC_ASSERT(r.segmentations[u].boundaries == again.segmentations[u].boundaries);
  WDISC_ASSERT(r.lexicon.classes.classes == again.lexicon.classes.classes);

  // Clustering never moves a boundary: the lexicon tokens tile exactly the
  // segments of the prominence segmentation.
  std::vector<Segmentation> before =
      SegmentCorpus(f.corpus.boundary_features, f.cfg.promseg, f.cfg.normalization, 1);
  std::size_t n_segments = 0;
  for (std::size_t u = 0; u < before.size(); u++) {
    WDISC_ASSERT(before[u].boundaries == r.segmentations[u].boundaries);
    n_segments += before[u].boundaries.size();
  }
  WDISC_ASSERT(r.lexicon.classes.NumTokens() == n_segments);

  // One cluster per segment: zero inertia, and with only singleton
  // clusters NED is undefined.
  Fixture small = MakeFixture("pipe-small", 0.0, 0.0, 2, 9);
  std::size_t k = 0;
  for (const Segmentation &s : small.synth.true_segmentations) k += s.boundaries.size();
  small.cfg.num_clusters = static_cast<int32>(k);
  small.cfg.pca_dim = 0;
  BottomUpResult rs = RunPromSegClus(small.corpus, small.cfg);
  WDISC_ASSERT(rs.lexicon.model.inertia < 1e-9);
  WDISC_ASSERT(Throws<UndefinedMetricError>(
      [&] { Ned(rs.lexicon.classes, small.phones); }));
  EvalReport es = Evaluate(small, rs.segmentations, rs.lexicon.classes);
  WDISC_ASSERT(!es.lexicon.has_value() && es.ned_error.has_value());
  WDISC_ASSERT(es.bitrate.has_value());
  std::filesystem::remove_all(f.dir);
  std::filesystem::remove_all(small.dir);
}

static double Precision(const Fixture &f, const std::vector<Segmentation> &segs) {
  return ScoreBoundaries(segs, f.words, 0.02, 50).precision;
}

static void UnitTestCandidateStudy() {
  Fixture f = MakeFixture("pipe-cand", 0.01, 1.0, 60, 1);
  f.cfg.candidate_source = CandidateSource::kFile;
  f.cfg.eskmeans.num_iterations = 5;
  f.cfg.eskmeans.kmeans_restarts = 10;
  f.cfg.eskmeans.min_segment_frames = 2;
  TopDownResult td = RunEsKMeansPlus(f.corpus, f.cfg, &f.synth.candidates);
  for (std::size_t u = 0; u < td.segmentations.size(); u++)
    WDISC_ASSERT(IsSubsetOf(td.segmentations[u], f.synth.candidates[u]));
  std::vector<Segmentation> as_segs;
  for (const CandidateSet &c : f.synth.candidates)
    as_segs.push_back(MakeBoundarySet<Segmentation>(c.utterance_id, c.num_frames,
                                                    c.boundaries));
  BottomUpResult bu = RunPromSegClus(f.corpus, f.cfg, &as_segs);
  WDISC_ASSERT(Precision(f, td.segmentations) > Precision(f, bu.segmentations));
  WDISC_ASSERT(td.classes.NumTokens() == td.fit.segments.size());

  // Ground-truth candidates: the output is a subset of the true boundaries.
  std::vector<CandidateSet> truth;
  for (const Segmentation &s : f.synth.true_segmentations)
    truth.push_back(MakeBoundarySet<CandidateSet>(s.utterance_id, s.num_frames,
                                                  s.boundaries));
  TopDownResult tt = RunEsKMeansPlus(f.corpus, f.cfg, &truth);
  for (std::size_t u = 0; u < tt.segmentations.size(); u++)
    WDISC_ASSERT(IsSubsetOf(tt.segmentations[u], truth[u]));
  WDISC_ASSERT(Precision(f, tt.segmentations) == 100.0);

  // Union candidates contain both sources.
  f.cfg.candidate_source = CandidateSource::kUnion;
  std::vector<CandidateSet> u = ResolveCandidates(f.corpus, f.cfg, &truth);
  f.cfg.candidate_source = CandidateSource::kProminence;
  std::vector<CandidateSet> p = ResolveCandidates(f.corpus, f.cfg, nullptr);
  for (std::size_t i = 0; i < u.size(); i++)
    WDISC_ASSERT(IsSubsetOf(truth[i], u[i]) && IsSubsetOf(p[i], u[i]));
  f.cfg.candidate_source = CandidateSource::kFile;
  WDISC_ASSERT(Throws<ParameterError>([&] { ResolveCandidates(f.corpus, f.cfg, nullptr); }));
  std::filesystem::remove_all(f.dir);
}

static void UnitTestReports() {
  Fixture f = MakeFixture("pipe-report", 0.0, 0.0, 10, 2);
  EvalReport perfect = Evaluate(f, f.synth.true_segmentations, f.synth.true_classes);
  WDISC_ASSERT(perfect.boundary->f1 == 100 && perfect.token->f1 == 100);
  WDISC_ASSERT(perfect.lexicon->ned == 0.0);
  std::string text = FormatEvalReport(perfect, false);
  WDISC_ASSERT(text.find("boundary precision=100.00 recall=100.00 f1=100.00") !=
               std::string::npos);
  std::string json = FormatEvalReport(perfect, true);
  WDISC_ASSERT(json.front() == '{' && json.find("\"ned\"") != std::string::npos);

  std::vector<Segmentation> empty;
  for (const Segmentation &s : f.synth.true_segmentations)
    empty.push_back(MakeBoundarySet<Segmentation>(s.utterance_id, s.num_frames, {}));
  EvalReport e = RunEval(&empty, nullptr, &f.words, nullptr, 1.0, EvalOptions());
  WDISC_ASSERT(e.boundary->recall == 0 && e.boundary->over_segmentation == -100);
  WDISC_ASSERT(!e.lexicon && !e.bitrate);
  std::string point = FormatNedBitratePoint(perfect, "truth");
  WDISC_ASSERT(point.find("\"label\":\"truth\"") != std::string::npos);

  // Every missing feature file is listed in one error.
  std::filesystem::remove(f.dir + "/feats/synth_0002.wdf");
  std::filesystem::remove(f.dir + "/feats/synth_0007.wdf");
  try {
    LoadCorpus(f.cfg);
    WDISC_ASSERT(false);
  } catch (const ValidationError &err) {
    std::string msg = err.what();
    WDISC_ASSERT(msg.find("synth_0002") != std::string::npos &&
                 msg.find("synth_0007") != std::string::npos);
  }
  std::filesystem::remove_all(f.dir);
}

static void UnitTestParsing() {
  WDISC_ASSERT(ParseCandidateSource("union") == CandidateSource::kUnion);
  WDISC_ASSERT(ParseCandidateSource("max-recall") == CandidateSource::kMaxRecallProminence);
  WDISC_ASSERT(ParseNormalizationScope("utterance") == NormalizationScope::kUtterance);
  WDISC_ASSERT(Throws<ParameterError>([] { ParseCandidateSource("bogus"); }));
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestParsing();
  UnitTestNoiselessBottomUp();
  UnitTestCandidateStudy();
  UnitTestReports();
  std::cout << "Test OK.\n";
  return 0;
}
