// src/seg-embed-test.cc

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

#include "wdisc/seg-embed.h"

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

// Evenly spaced positions over [start, end - 1], computed in exact rational
// arithmetic: start + k (L - 1) / (n - 1), rounded half up.
static std::vector<int32> SpacingOracle(int32 start, int32 end, int32 n) {
  const int32 len = end - start;
  std::vector<int32> out;
  if (n == 1) {
    out.push_back(start + (len - 1) / 2);
    return out;
  }
  for (int32 k = 0; k < n; k++) {
    int64_t num = int64_t(k) * (len - 1);  // offset = num / (n - 1)
    int64_t den = n - 1;
    out.push_back(start + static_cast<int32>((2 * num + den) / (2 * den)));
  }
  return out;
}

static void UnitTestMean() {
  SegmentEmbedding z = EmbedMean(Frames({{1, 0}, {0, 1}}), 0, 2);
  WDISC_ASSERT(ApproxEqual(z.vector(0), std::sqrt(0.5)) &&
               ApproxEqual(z.vector(1), std::sqrt(0.5)));
  WDISC_ASSERT(z.start == 0 && z.end == 2 && z.LengthFrames() == 2);
  WDISC_ASSERT(z.utterance_id == "u");
  z = EmbedMean(Frames({{3, 4}}), 0, 1);
  WDISC_ASSERT(ApproxEqual(z.vector(0), 0.6) && ApproxEqual(z.vector(1), 0.8));
  float c = 1.0f / std::sqrt(3.0f);
  z = EmbedMean(Frames({{c, c, c}, {c, c, c}, {c, c, c}}), 0, 3);
  for (int d = 0; d < 3; d++) WDISC_ASSERT(ApproxEqual(z.vector(d), c, 1e-7));

  std::mt19937 rng(1);
  std::normal_distribution<float> g;
  FeatureMatrix m;
  m.data.resize(20, 5);
  for (int32 i = 0; i < m.data.size(); i++) m.data.data()[i] = g(rng);
  for (int trial = 0; trial < 50; trial++) {
    int32 a = rng() % 20, b = a + 1 + rng() % (20 - a);
    std::vector<double> ref = oracle::MeanEmbedding(m, a, b);
    z = EmbedMean(m, a, b);
    WDISC_ASSERT(ApproxEqual(z.vector.norm(), 1.0, 1e-12));
    for (int d = 0; d < 5; d++) WDISC_ASSERT(ApproxEqual(z.vector(d), ref[d], 1e-12));
  }

  WDISC_ASSERT(Throws<DegenerateError>([] { EmbedMean(Frames({{1, 0}, {-1, 0}}), 0, 2); }));
  WDISC_ASSERT(Throws<ParameterError>([] { EmbedMean(Frames({{1, 0}}), 0, 0); }));
  WDISC_ASSERT(Throws<ParameterError>([] { EmbedMean(Frames({{1, 0}}), 0, 2); }));
}

static void UnitTestSubsample() {
  FeatureMatrix one = Frames({{1, 2}, {3, 4}});
  SegmentEmbedding z = EmbedSubsampleFlatten(one, 1, 2, 3);
  WDISC_ASSERT(z.vector.size() == 6);
  for (int k = 0; k < 3; k++)
    WDISC_ASSERT(z.vector(2 * k) == 3 && z.vector(2 * k + 1) == 4);

  std::vector<std::vector<float>> rows;
  for (int i = 0; i < 6; i++) rows.push_back({float(i), float(10 * i)});
  FeatureMatrix six = Frames(rows);
  z = EmbedSubsampleFlatten(six, 0, 6, 2);
  WDISC_ASSERT(z.vector.size() == 4 && z.vector(0) == 0 && z.vector(1) == 0 &&
               z.vector(2) == 5 && z.vector(3) == 50);
  // Unnormalised concatenation.
  WDISC_ASSERT(z.vector.norm() > 1.0);

  for (int32 start = 0; start < 6; start++)
    for (int32 end = start + 1; end <= 30; end++)
      for (int32 n = 1; n <= 12; n++)
        WDISC_ASSERT(SubsampleIndices(start, end, n) == SpacingOracle(start, end, n));
  WDISC_ASSERT((SubsampleIndices(0, 6, 1) == std::vector<int32>{2}));
  WDISC_ASSERT((SubsampleIndices(4, 7, 1) == std::vector<int32>{5}));
  WDISC_ASSERT(Throws<ParameterError>([] { SubsampleIndices(0, 4, 0); }));

  EmbeddingOptions o{EmbeddingKind::kSubsampleFlatten, 4};
  WDISC_ASSERT(o.OutputDim(3) == 12);
  WDISC_ASSERT(EmbeddingOptions{}.OutputDim(3) == 3);
  WDISC_ASSERT(ParseEmbeddingKind("mean") == EmbeddingKind::kMean);
  WDISC_ASSERT(Throws<ParameterError>([] { ParseEmbeddingKind("max"); }));
}

static void UnitTestSegmentation() {
  FeatureMatrix m = Frames({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  EmbeddingOptions o;
  auto zs = EmbedSegmentation(m, MakeBoundarySet<Segmentation>("u", 4, {2}), o);
  WDISC_ASSERT(zs.size() == 2 && zs[0].start == 0 && zs[0].end == 2 &&
               zs[1].start == 2 && zs[1].end == 4);
  WDISC_ASSERT(zs[0].vector(0) == 1.0 && zs[1].vector(1) == 1.0);
  zs = EmbedSegmentation(m, MakeBoundarySet<Segmentation>("u", 4, {}), o);
  WDISC_ASSERT(zs.size() == 1 && zs[0].start == 0 && zs[0].end == 4);

  std::mt19937 rng(2);
  for (int trial = 0; trial < 50; trial++) {
    int32 t = 1 + rng() % 30;
    FeatureMatrix r;
    r.utterance_id = "r";
    r.data = FloatMatrix::Constant(t, 3, 1.0f) + FloatMatrix::Random(t, 3) * 0.1f;
    std::vector<int32> interior;
    for (int k = 0; k < 5; k++) interior.push_back(rng() % t);
    Segmentation s = MakeBoundarySet<Segmentation>("r", t, interior);
    int32 covered = 0;
    for (const SegmentEmbedding &z : EmbedSegmentation(r, s, o)) covered += z.LengthFrames();
    WDISC_ASSERT(covered == t);
  }
  WDISC_ASSERT(Throws<ShapeError>(
      [&] { EmbedSegmentation(m, MakeBoundarySet<Segmentation>("u", 5, {}), o); }));
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestMean();
  UnitTestSubsample();
  UnitTestSegmentation();
  std::cout << "Test OK.\n";
  return 0;
}
