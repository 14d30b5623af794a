// src/eval-metrics-test.cc

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

#include "wdisc/eval-metrics.h"

#include "test-oracles.h"
#include "test-util.h"

namespace wdisc {

using test::ApproxEqual;
using test::Throws;

static AlignmentTrack Track(const std::string &utt, Tier tier,
                            std::vector<AlignmentEntry> entries) {
  return {utt, tier, std::move(entries)};
}

static AlignmentMap Map(std::vector<AlignmentTrack> tracks) {
  AlignmentMap m;
  for (AlignmentTrack &t : tracks) m[t.utterance_id] = t;
  return m;
}

// Words at 50 Hz: [0,10) [10,25) [25,40) frames.
static AlignmentMap ThreeWords() {
  return Map({Track("u", Tier::kWord,
                    {{0.0, 0.2, "a"}, {0.2, 0.5, "b"}, {0.5, 0.8, "c"}})});
}

static void UnitTestBoundaries() {
  AlignmentMap ref = ThreeWords();
  std::vector<Segmentation> perfect = {MakeBoundarySet<Segmentation>("u", 40, {10, 25})};
  BoundaryScore s = ScoreBoundaries(perfect, ref, 0.02, 50);
  WDISC_ASSERT(s.precision == 100 && s.recall == 100 && s.f1 == 100);
  WDISC_ASSERT(s.over_segmentation == 0 && s.r_value == 100);
  WDISC_ASSERT(s.n_hyp == 2 && s.n_ref == 2 && s.n_hits == 2);

  // One frame (20 ms) off is still a hit, two frames are not.
  s = ScoreBoundaries({MakeBoundarySet<Segmentation>("u", 40, {11, 27})}, ref, 0.02, 50);
  WDISC_ASSERT(s.n_hits == 1);

  std::vector<Segmentation> none = {MakeBoundarySet<Segmentation>("u", 40, {})};
  s = ScoreBoundaries(none, ref, 0.02, 50);
  WDISC_ASSERT(s.recall == 0 && s.precision == 0 && s.over_segmentation == -100);

  // R-value worked by hand: r1 = r2 = 0.28284 for recall 80, OS 20.
  WDISC_ASSERT(std::abs(RValue(80, 20) - 71.7) <= 0.05);
  WDISC_ASSERT(ApproxEqual(RValue(80, 20),
                           100 * (1 - (std::sqrt(0.08) + 0.4 / std::sqrt(2.0)) / 2), 1e-9));
  WDISC_ASSERT(RValue(100, 0) == 100);
  WDISC_ASSERT(FScore(0, 0) == 0 && ApproxEqual(FScore(50, 100.0 / 3), 40));

  std::vector<double> hyp = {0.50}, refb = {0.49, 1.00};
  WDISC_ASSERT(CountBoundaryHits(hyp, refb, 0.02) == 1);  // P = 100, R = 50

  // A reference boundary is matched at most once.
  std::vector<double> two = {0.49, 0.50};
  std::vector<double> one = {0.495};
  WDISC_ASSERT(CountBoundaryHits(two, one, 0.02) == 1);

  // Interior reference boundaries: utterance edges excluded, gaps give
  // both edges.
  AlignmentTrack gap = Track("g", Tier::kWord, {{0.1, 0.3, "a"}, {0.5, 0.9, "b"}});
  WDISC_ASSERT((ReferenceBoundaries(gap) == std::vector<double>{0.3, 0.5}));
  WDISC_ASSERT((ReferenceBoundaries(ref.at("u")) == std::vector<double>{0.2, 0.5}));
  WDISC_ASSERT((HypothesisBoundaries(perfect[0], 50) == std::vector<double>{0.2, 0.5}));

  // Random properties.
  std::mt19937 rng(1);
  for (int trial = 0; trial < 300; trial++) {
    std::vector<double> h, r;
    for (int k = rng() % 12; k > 0; k--) h.push_back((rng() % 100) * 0.02);
    for (int k = rng() % 12; k > 0; k--) r.push_back((rng() % 100) * 0.02);
    std::sort(h.begin(), h.end());
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    int64_t hits = CountBoundaryHits(h, r, 0.02);
    WDISC_ASSERT(hits <= static_cast<int64_t>(std::min(h.size(), r.size())));
    WDISC_ASSERT(CountBoundaryHits(r, r, 0.0) == static_cast<int64_t>(r.size()));
  }

  WDISC_ASSERT(Throws<UndefinedMetricError>([&] {
    ScoreBoundaries({MakeBoundarySet<Segmentation>("x", 10, {})},
                    Map({Track("x", Tier::kWord, {{0, 0.2, "a"}})}), 0.02, 50);
  }));
  WDISC_ASSERT(Throws<ValidationError>([&] {
    ScoreBoundaries({MakeBoundarySet<Segmentation>("zz", 10, {})}, ref, 0.02, 50);
  }));
}

static void UnitTestTokens() {
  AlignmentMap ref = ThreeWords();
  TokenScore t = ScoreTokens({MakeBoundarySet<Segmentation>("u", 40, {10, 25})}, ref, 0.02, 50);
  WDISC_ASSERT(t.precision == 100 && t.recall == 100 && t.f1 == 100);
  // Merging "b" and "c": outer edges match but the token is not a hit.
  t = ScoreTokens({MakeBoundarySet<Segmentation>("u", 40, {10})}, ref, 0.02, 50);
  WDISC_ASSERT(t.n_hit_tokens == 1 && t.n_hyp_tokens == 2 && t.n_ref_tokens == 3);
  WDISC_ASSERT(t.precision == 50 && ApproxEqual(t.recall, 100.0 / 3) &&
               ApproxEqual(t.f1, 40.0));
  // Duplicate hypothesis tokens are credited once.
  AlignmentMap dup = Map({Track("d", Tier::kWord, {{0.0, 0.2, "a"}, {0.2, 0.22, "b"}})});
  t = ScoreTokens({MakeBoundarySet<Segmentation>("d", 11, {10})}, dup, 0.02, 50);
  WDISC_ASSERT(t.n_hit_tokens == 2);
}

static ClassFile Classes(std::vector<std::vector<ClassToken>> groups) {
  ClassFile c;
  for (std::size_t i = 0; i < groups.size(); i++) c.classes[i] = groups[i];
  return c;
}

static void UnitTestNed() {
  std::vector<std::string> a = SplitSymbols("a b c");
  WDISC_ASSERT(EditDistance(a, a) == 0);
  std::vector<std::string> empty, ab = SplitSymbols("a b");
  WDISC_ASSERT(EditDistance(empty, ab) == 2);
  std::mt19937 rng(2);
  const char *sym[] = {"x", "y", "z"};
  for (int trial = 0; trial < 500; trial++) {
    std::vector<std::string> p, q;
    for (int k = rng() % 9; k > 0; k--) p.push_back(sym[rng() % 3]);
    for (int k = rng() % 9; k > 0; k--) q.push_back(sym[rng() % 3]);
    WDISC_ASSERT(EditDistance(p, q) == oracle::EditDistance(p, q));
  }

  // Phones "k ae t" for utterance u1 and "b ae t" for u2, 0.1 s each.
  AlignmentMap phones = Map(
      {Track("u1", Tier::kPhone, {{0.0, 0.1, "k"}, {0.1, 0.2, "ae"}, {0.2, 0.3, "t"}}),
       Track("u2", Tier::kPhone, {{0.0, 0.1, "b"}, {0.1, 0.2, "ae"}, {0.2, 0.3, "t"}}),
       Track("u3", Tier::kPhone, {{0.0, 0.1, "k"}, {0.1, 0.2, "ih"}, {0.2, 0.3, "t"}}),
       Track("u4", Tier::kPhone, {{0.0, 0.1, "k"}, {0.1, 0.2, "uw"}, {0.2, 0.3, "t"}})});
  ClassFile same = Classes({{{"u1", 0.0, 0.3}, {"u1", 0.0, 0.3}}});
  WDISC_ASSERT(Ned(same, phones) == 0.0);
  ClassFile diff = Classes({{{"u1", 0.0, 0.3}, {"u2", 0.0, 0.3}}});
  WDISC_ASSERT(std::abs(Ned(diff, phones) - 100.0 / 3) <= 0.01);

  // Pooled: pairs {0} and {1/3, 1/3, 1/3} -> (0 + 1) / 4.
  ClassFile two = Classes({{{"u1", 0.0, 0.3}, {"u1", 0.0, 0.3}},
                           {{"u1", 0.0, 0.3}, {"u3", 0.0, 0.3}, {"u4", 0.0, 0.3}}});
  int64_t pairs = 0;
  WDISC_ASSERT(ApproxEqual(Ned(two, phones, NedPooling::kPooled, &pairs), 25.0));
  WDISC_ASSERT(pairs == 4);
  // Per cluster: the mean of the two cluster means.
  WDISC_ASSERT(ApproxEqual(Ned(two, phones, NedPooling::kPerCluster),
                           100.0 * (0.0 + 1.0 / 3.0) / 2.0));

  // Transcription rule: a phone counts if it overlaps by >= 50% of its
  // duration or >= 30 ms.
  AlignmentTrack long_phone = Track("p", Tier::kPhone, {{0.0, 0.2, "aa"}, {0.2, 0.25, "b"}});
  WDISC_ASSERT((TokenTranscription(long_phone, 0.17, 0.25) == std::vector<std::string>{"aa", "b"}));
  WDISC_ASSERT((TokenTranscription(long_phone, 0.18, 0.25) == std::vector<std::string>{"b"}));
  WDISC_ASSERT((TokenTranscription(long_phone, 0.0, 0.224) == std::vector<std::string>{"aa"}));
  WDISC_ASSERT((TokenTranscription(long_phone, 0.0, 0.226) == std::vector<std::string>{"aa", "b"}));

  // Brute-force pair average agrees on random class files.
  for (int trial = 0; trial < 50; trial++) {
    ClassFile c;
    std::vector<std::vector<std::string>> trans;
    for (int k = 0; k < 3; k++) {
      for (int n = 1 + rng() % 5; n > 0; n--) {
        std::string utt = rng() % 2 ? "u1" : "u2";
        int first = rng() % 3, last = first + 1 + rng() % (3 - first);
        double on = 0.1 * first, off = 0.1 * last;
        c.classes[k].push_back({utt, on, off});
      }
    }
    double sum = 0;
    int64_t n_pairs = 0;
    for (const auto &[id, tokens] : c.classes)
      for (std::size_t i = 0; i < tokens.size(); i++)
        for (std::size_t j = i + 1; j < tokens.size(); j++) {
          auto p = TokenTranscription(phones.at(tokens[i].utterance_id), tokens[i].onset_s, tokens[i].offset_s);
          auto q = TokenTranscription(phones.at(tokens[j].utterance_id), tokens[j].onset_s, tokens[j].offset_s);
          sum += double(oracle::EditDistance(p, q)) / std::max<std::size_t>(1, std::max(p.size(), q.size()));
          n_pairs++;
        }
    if (n_pairs == 0) continue;
    WDISC_ASSERT(ApproxEqual(Ned(c, phones), 100 * sum / n_pairs, 1e-9));
  }

  ClassFile singletons = Classes({{{"u1", 0.0, 0.3}}, {{"u2", 0.0, 0.3}}});
  WDISC_ASSERT(Throws<UndefinedMetricError>([&] { Ned(singletons, phones); }));
  ClassFile unknown = Classes({{{"zz", 0.0, 0.3}, {"u1", 0.0, 0.3}}});
  WDISC_ASSERT(Throws<ValidationError>([&] { Ned(unknown, phones); }));
}

static void UnitTestBitrate() {
  ClassFile one = Classes({{{"u", 0, 1}, {"u", 1, 2}, {"u", 2, 3}}});
  WDISC_ASSERT(Bitrate(one, 3.0) == 0.0);
  ClassFile two = Classes({{{"u", 0, 1}}, {{"u", 1, 2}}});
  WDISC_ASSERT(std::abs(Bitrate(two, 2.0) - 1.0) <= 1e-9);
  WDISC_ASSERT(ApproxEqual(Bitrate(two, 4.0), Bitrate(two, 2.0) / 2));
  WDISC_ASSERT(Bitrate(ClassFile{}, 1.0) == 0.0);
  WDISC_ASSERT(Throws<ParameterError>([&] { Bitrate(two, 0.0); }));
}

static void UnitTestClusterReport() {
  AlignmentMap words = Map({Track("u", Tier::kWord,
                                  {{0.0, 0.04, "the"}, {0.04, 0.16, "wait"},
                                   {0.16, 0.5, "wait"}, {0.5, 0.9, "go"}})});
  WDISC_ASSERT(MaxOverlapLabel(words.at("u"), 0.0, 0.16) == "wait");
  WDISC_ASSERT(MaxOverlapLabel(words.at("u"), 1.0, 1.2) == "<none>");
  ClassFile c;
  c.classes[3] = {{"u", 0.0, 0.16}, {"u", 0.05, 0.15}, {"u", 0.2, 0.5}};
  c.classes[1] = {{"u", 0.5, 0.6}, {"u", 0.5, 0.8}};
  c.classes[0] = {{"u", 0.5, 0.6}};
  std::map<std::string, std::string> spk = {{"u", "s1"}};
  auto report = ClusterReport(c, words, &spk, 2);
  WDISC_ASSERT(report.size() == 2 && report[0].cluster_id == 3 && report[1].cluster_id == 1);
  WDISC_ASSERT(report[0].num_tokens == 3 && *report[0].num_speakers == 1);
  WDISC_ASSERT((report[0].label_histogram ==
                std::vector<std::pair<std::string, int64_t>>{{"wait", 3}}));
  WDISC_ASSERT(ApproxEqual(report[1].mean_duration_s, 0.2));
  WDISC_ASSERT(!ClusterReport(c, words, nullptr, 10)[0].num_speakers.has_value());
  WDISC_ASSERT(ClusterReport(c, words, nullptr, 10).size() == 3);
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestBoundaries();
  UnitTestTokens();
  UnitTestNed();
  UnitTestBitrate();
  UnitTestClusterReport();
  std::cout << "Test OK.\n";
  return 0;
}
