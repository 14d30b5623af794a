// src/prom-seg-test.cc

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

#include "wdisc/prom-seg.h"

#include "test-oracles.h"
#include "test-util.h"

namespace wdisc {

using test::ApproxEqual;
using test::Throws;

static FeatureMatrix Frames(std::vector<std::vector<float>> rows) {
  FeatureMatrix m;
  m.utterance_id = "u";
  m.data.resize(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); r++)
    for (std::size_t c = 0; c < rows[r].size(); c++) m.data(r, c) = rows[r][c];
  return m;
}

// Random curve; small integer alphabets produce plateaus and exact ties.
static std::vector<double> RandomCurve(std::mt19937 *rng) {
  int32 n = 1 + (*rng)() % 64;
  std::vector<double> v(n);
  if ((*rng)() % 2) {
    int levels = 2 + (*rng)() % 5;
    for (double &x : v) x = (*rng)() % levels;
  } else {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (double &x : v) x = u(*rng);
  }
  return v;
}

static void UnitTestDissimilarity() {
  DissimilarityCurve c = ComputeDissimilarity(Frames({{1, 0}, {1, 0}, {0, 1}}));
  WDISC_ASSERT(c.values.size() == 2 && c.values[0] == 0.0 && c.values[1] == 1.0);
  c = ComputeDissimilarity(Frames({{1, 0}, {-1, 0}}));
  WDISC_ASSERT(c.values.size() == 1 && c.values[0] == 2.0);
  // Identical but non-unit frames give exactly zero.
  c = ComputeDissimilarity(Frames({{0.3f, 0.7f, 0.1f}, {0.3f, 0.7f, 0.1f}}));
  WDISC_ASSERT(c.values[0] == 0.0);

  std::mt19937 rng(1);
  std::normal_distribution<float> g;
  FeatureMatrix m;
  m.data.resize(10, 4);
  for (int32 i = 0; i < m.data.size(); i++) m.data.data()[i] = g(rng);
  c = ComputeDissimilarity(m);
  std::vector<double> ref = oracle::Dissimilarity(m);
  WDISC_ASSERT(c.values.size() == 9);
  for (int i = 0; i < 9; i++) WDISC_ASSERT(ApproxEqual(c.values[i], ref[i], 1e-9));

  WDISC_ASSERT(Throws<ParameterError>([] { ComputeDissimilarity(Frames({{1, 0}})); }));
  WDISC_ASSERT(Throws<DegenerateError>(
      [] { ComputeDissimilarity(Frames({{1, 0}, {0, 0}})); }));
}

static void UnitTestSmoothing() {
  DissimilarityCurve c{"u", {0, 1, 0}};
  WDISC_ASSERT(SmoothCurve(c, 1).values == c.values);
  std::vector<double> s = SmoothCurve(c, 3).values;
  WDISC_ASSERT(ApproxEqual(s[0], 0.5) && ApproxEqual(s[1], 1.0 / 3) &&
               ApproxEqual(s[2], 0.5));
  DissimilarityCurve flat{"u", std::vector<double>(9, 0.37)};
  for (int32 w : {1, 2, 3, 4, 7, 20})
    for (double x : SmoothCurve(flat, w).values) WDISC_ASSERT(ApproxEqual(x, 0.37));
  WDISC_ASSERT(Throws<ParameterError>([&] { SmoothCurve(c, 0); }));

  std::mt19937 rng(2);
  for (int trial = 0; trial < 300; trial++) {
    DissimilarityCurve r{"u", RandomCurve(&rng)};
    int32 w = 1 + rng() % 9;
    std::vector<double> got = SmoothCurve(r, w).values;
    std::vector<double> ref = oracle::Smooth(r.values, w);
    for (std::size_t i = 0; i < got.size(); i++)
      WDISC_ASSERT(ApproxEqual(got[i], ref[i], 1e-12));
  }
}

static void UnitTestPeaks() {
  std::vector<double> v = {0, 2, 1, 3, 0};
  WDISC_ASSERT((DetectProminentPeaks(v, 0.5) == std::vector<int32>{1, 3}));
  WDISC_ASSERT(PeakProminence(v, 1) == 1.0 && PeakProminence(v, 3) == 3.0);
  WDISC_ASSERT((DetectProminentPeaks(v, 1.5) == std::vector<int32>{3}));
  // The threshold is inclusive.
  WDISC_ASSERT((DetectProminentPeaks(v, 1.0) == std::vector<int32>{1, 3}));
  WDISC_ASSERT(DetectProminentPeaks({0, 1, 2, 3}, 0.0).empty());
  // Plateau: one peak at its leftmost index; edges never qualify.
  WDISC_ASSERT((DetectProminentPeaks({0, 2, 2, 2, 0}, 0.0) == std::vector<int32>{1}));
  WDISC_ASSERT(DetectProminentPeaks({3, 1, 3}, 0.0).empty());
  WDISC_ASSERT(DetectProminentPeaks({0, 2, 2}, 0.0).empty());
  WDISC_ASSERT(DetectProminentPeaks({}, 0.0).empty());
  WDISC_ASSERT(Throws<ParameterError>([] { DetectProminentPeaks({0, 1, 0}, -1); }));

  std::mt19937 rng(3);
  for (int trial = 0; trial < 1000; trial++) {
    std::vector<double> r = RandomCurve(&rng);
    double thr = (rng() % 3 == 0) ? double(rng() % 4) : std::uniform_real_distribution<double>(0, 2)(rng);
    WDISC_ASSERT(DetectProminentPeaks(r, thr) == oracle::Peaks(r, thr));
    for (int32 i = 0; i < static_cast<int32>(r.size()); i++)
      if (oracle::IsPeak(r, i))
        WDISC_ASSERT(PeakProminence(r, i) == oracle::Prominence(r, i));
  }
}

static void UnitTestSegment() {
  std::vector<std::vector<float>> rows;
  for (int i = 0; i < 5; i++) rows.push_back({1, 0});
  for (int i = 0; i < 5; i++) rows.push_back({0, 1});
  Segmentation s = ProminenceSegment(Frames(rows), {1, 0.5});
  WDISC_ASSERT((s.boundaries == std::vector<int32>{5, 10}));

  std::vector<std::vector<float>> flat(7, {0.2f, 0.5f});
  s = ProminenceSegment(Frames(flat), {4, 0.75});
  WDISC_ASSERT((s.boundaries == std::vector<int32>{7}));
  s = ProminenceSegment(Frames({{1, 1}}), {4, 0.75});
  WDISC_ASSERT((s.boundaries == std::vector<int32>{1}));

  // Alternating pairs of frames, threshold 0, no smoothing: every strict
  // local maximum of the curve becomes a boundary.
  std::vector<std::vector<float>> alt;
  for (int i = 0; i < 12; i++) alt.push_back((i / 2) % 2 ? std::vector<float>{0, 1}
                                                         : std::vector<float>{1, 0});
  FeatureMatrix am = Frames(alt);
  s = ProminenceSegment(am, {1, 0.0});
  std::vector<double> curve = oracle::Dissimilarity(am);
  std::vector<int32> expect;
  for (int32 i = 0; i < static_cast<int32>(curve.size()); i++)
    if (oracle::IsPeak(curve, i)) expect.push_back(i + 1);
  expect.push_back(12);
  WDISC_ASSERT(s.boundaries == expect);
  WDISC_ASSERT((expect == std::vector<int32>{2, 4, 6, 8, 10, 12}));

  // Composition with the oracles on random utterances.
  std::mt19937 rng(4);
  std::normal_distribution<float> g;
  for (int trial = 0; trial < 100; trial++) {
    FeatureMatrix m;
    m.data.resize(2 + rng() % 40, 3);
    for (int32 i = 0; i < m.data.size(); i++) m.data.data()[i] = g(rng);
    PromSegOptions o{1 + int32(rng() % 6), 0.05 * (rng() % 10)};
    std::vector<double> sm = oracle::Smooth(oracle::Dissimilarity(m), o.window_frames);
    // Round the oracle curve through the library curve to avoid ulp noise.
    std::vector<double> lib = SmoothCurve(ComputeDissimilarity(m), o.window_frames).values;
    for (std::size_t i = 0; i < sm.size(); i++) WDISC_ASSERT(ApproxEqual(sm[i], lib[i], 1e-9));
    std::vector<int32> want;
    for (int32 p : oracle::Peaks(lib, o.prominence_threshold)) want.push_back(p + 1);
    want.push_back(m.NumFrames());
    WDISC_ASSERT(ProminenceSegment(m, o).boundaries == want);
  }

  WDISC_ASSERT(CandidatePromSegOptions().window_frames == 5);
  WDISC_ASSERT(CandidatePromSegOptions().prominence_threshold == 0.3);
  PromSegOptions def;
  WDISC_ASSERT(def.window_frames == 4 && def.prominence_threshold == 0.75);
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestDissimilarity();
  UnitTestSmoothing();
  UnitTestPeaks();
  UnitTestSegment();
  std::cout << "Test OK.\n";
  return 0;
}
