// src/preprocess-test.cc

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

#include "wdisc/preprocess.h"

#include <algorithm>
#include <set>

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

static FeatureMatrix RandomFrames(int32 t, int32 d, std::mt19937 *rng,
                                  double scale = 1.0) {
  std::normal_distribution<float> g(0.0f, 1.0f);
  FeatureMatrix m;
  m.utterance_id = "r";
  m.data.resize(t, d);
  for (int32 i = 0; i < t; i++)
    for (int32 j = 0; j < d; j++) m.data(i, j) = scale * (j + 1) * g(*rng) + j;
  return m;
}

// Cyclic Jacobi eigendecomposition of a symmetric matrix; eigenvalues in
// `values`, eigenvectors in the columns of `vectors`.
static void JacobiEigen(std::vector<std::vector<double>> a,
                        std::vector<double> *values,
                        std::vector<std::vector<double>> *vectors) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; i++) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; sweep++) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; p++)
      for (std::size_t q = p + 1; q < n; q++) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; p++) {
      for (std::size_t q = p + 1; q < n; q++) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; k++) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; k++) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; k++) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  values->resize(n);
  for (std::size_t i = 0; i < n; i++) (*values)[i] = a[i][i];
  *vectors = v;
}

static void UnitTestNormalizer() {
  Normalizer n = FitNormalizer(Frames({{0, 0}, {2, 2}}).data);
  WDISC_ASSERT(ApproxEqual(n.mean(0), 1) && ApproxEqual(n.mean(1), 1));
  WDISC_ASSERT(ApproxEqual(n.stddev(0), 1) && ApproxEqual(n.stddev(1), 1));

  Normalizer c = FitNormalizer(Frames({{5, 0}, {5, 1}}).data);
  WDISC_ASSERT(c.stddev(0) == kStddevFloor);
  WDISC_ASSERT(ApproxEqual(c.stddev(1), 0.5));

  FeatureMatrix one = ApplyNormalizer(n, Frames({{1, 1}}));
  WDISC_ASSERT(one.data(0, 0) == 0.0f && one.data(0, 1) == 0.0f);
  Normalizer half;
  half.mean = VectorXd::Zero(2);
  half.stddev = VectorXd::Constant(2, 2.0);
  FeatureMatrix h = ApplyNormalizer(half, Frames({{2, 4}}));
  WDISC_ASSERT(h.data(0, 0) == 1.0f && h.data(0, 1) == 2.0f);

  // Standardising the training frames gives mean 0, variance 1.
  std::mt19937 rng(2);
  std::vector<FeatureMatrix> corpus;
  for (int u = 0; u < 5; u++) corpus.push_back(RandomFrames(30 + u, 6, &rng, 3.0));
  Normalizer fit = FitNormalizer(std::span<const FeatureMatrix>(corpus));
  std::vector<double> sum(6, 0.0), sq(6, 0.0);
  int64_t count = 0;
  for (const FeatureMatrix &m : corpus) {
    FeatureMatrix z = ApplyNormalizer(fit, m);
    WDISC_ASSERT(z.utterance_id == m.utterance_id);
    for (int32 i = 0; i < z.NumFrames(); i++, count++)
      for (int32 j = 0; j < 6; j++) {
        sum[j] += z.data(i, j);
        sq[j] += double(z.data(i, j)) * z.data(i, j);
      }
  }
  for (int32 j = 0; j < 6; j++) {
    double mean = sum[j] / count;
    WDISC_ASSERT(std::abs(mean) < 1e-5);
    WDISC_ASSERT(std::abs(sq[j] / count - mean * mean - 1.0) < 1e-4);
  }

  // Streaming in batches equals one pooled fit.
  NormalizerAccumulator acc;
  for (const FeatureMatrix &m : corpus) acc.Accumulate(m.data);
  Normalizer streamed = acc.Finish();
  FloatMatrix all(acc.NumFrames(), 6);
  int64_t r = 0;
  for (const FeatureMatrix &m : corpus)
    for (int32 i = 0; i < m.NumFrames(); i++) all.row(r++) = m.data.row(i);
  Normalizer pooled = FitNormalizer(all);
  WDISC_ASSERT((streamed.mean - pooled.mean).cwiseAbs().maxCoeff() < 1e-10);
  WDISC_ASSERT((streamed.stddev - pooled.stddev).cwiseAbs().maxCoeff() < 1e-10);

  // Normalising twice differs from once unless already standard.
  FeatureMatrix once = ApplyNormalizer(half, Frames({{2, 4}}));
  FeatureMatrix twice = ApplyNormalizer(half, once);
  WDISC_ASSERT(once.data != twice.data);

  WDISC_ASSERT(Throws<InsufficientDataError>(
      [] { FitNormalizer(Frames({{1, 2}}).data); }));
  WDISC_ASSERT(Throws<ShapeError>(
      [&] { ApplyNormalizer(n, Frames({{1, 2, 3}})); }));
}

static void UnitTestPcaSimple() {
  // Points on y = x: one component along (1, 1)/sqrt(2) explains everything.
  DoubleMatrix line(5, 2);
  for (int i = 0; i < 5; i++) line.row(i) << i - 2.0, i - 2.0;
  PcaModel p = FitPca(line, 1);
  WDISC_ASSERT(ApproxEqual(p.components(0, 0), std::sqrt(0.5), 1e-9));
  WDISC_ASSERT(ApproxEqual(p.components(0, 1), std::sqrt(0.5), 1e-9));
  double total = (line.rowwise() - line.colwise().mean()).squaredNorm() / 5;
  WDISC_ASSERT(ApproxEqual(p.explained_variance(0) / total, 1.0, 1e-9));

  // The mean projects to zero.
  FeatureMatrix mean_frame;
  mean_frame.data = p.mean.transpose().cast<float>();
  FeatureMatrix z = ApplyPca(p, mean_frame);
  WDISC_ASSERT(z.Dim() == 1 && std::abs(z.data(0, 0)) < 1e-6);

  WDISC_ASSERT(Throws<ParameterError>([&] { FitPca(line, 0); }));
  WDISC_ASSERT(Throws<ParameterError>([&] { FitPca(line, 3); }));
  WDISC_ASSERT(Throws<InsufficientDataError>([&] { FitPca(line.topRows(1), 2); }));
}

static void UnitTestPcaOracle() {
  std::mt19937 rng(11);
  FeatureMatrix raw = RandomFrames(50, 8, &rng);
  DoubleMatrix x = raw.data.cast<double>();
  const int32 m = 3;
  PcaModel p = FitPca(x, m);

  VectorXd mean = x.colwise().mean().transpose();
  DoubleMatrix c = x.rowwise() - mean.transpose();
  std::vector<std::vector<double>> cov(8, std::vector<double>(8, 0.0));
  for (int a = 0; a < 8; a++)
    for (int b = 0; b < 8; b++) {
      double s = 0.0;
      for (int i = 0; i < 50; i++) s += c(i, a) * c(i, b);
      cov[a][b] = s / 50;
    }
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
  JacobiEigen(cov, &values, &vectors);
  std::vector<int> order(8);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[a] > values[b]; });

  // Same variances and (up to sign) the same directions.
  for (int k = 0; k < m; k++) {
    WDISC_ASSERT(ApproxEqual(p.explained_variance(k), values[order[k]], 1e-9));
    double dot = 0.0;
    for (int d = 0; d < 8; d++) dot += p.components(k, d) * vectors[d][order[k]];
    WDISC_ASSERT(ApproxEqual(std::abs(dot), 1.0, 1e-6));
  }
  // Reconstruction error equals the discarded variance.
  double err = 0.0;
  for (int i = 0; i < 50; i++) {
    VectorXd ci = c.row(i).transpose();
    VectorXd rec = p.components.transpose() * (p.components * ci);
    err += (ci - rec).squaredNorm();
  }
  double discarded = 0.0;
  for (int k = m; k < 8; k++) discarded += values[order[k]];
  WDISC_ASSERT(ApproxEqual(err / 50, discarded, 1e-6));

  // Orthonormal rows, each with its largest-magnitude entry positive.
  DoubleMatrix gram = p.components * p.components.transpose();
  WDISC_ASSERT((gram - DoubleMatrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-9);
  for (int k = 0; k < m; k++) {
    Eigen::Index arg;
    p.components.row(k).cwiseAbs().maxCoeff(&arg);
    WDISC_ASSERT(p.components(k, arg) > 0);
  }

  // Spot check against an explicit matrix-vector product.
  FeatureMatrix y = ApplyPca(p, raw);
  for (int i : {0, 17, 49}) {
    for (int k = 0; k < m; k++) {
      double s = 0.0;
      for (int d = 0; d < 8; d++)
        s += p.components(k, d) * (double(raw.data(i, d)) - p.mean(d));
      WDISC_ASSERT(ApproxEqual(y.data(i, k), s, 1e-5 * (1 + std::abs(s))));
    }
  }
}

static void UnitTestPcaIsometry() {
  std::mt19937 rng(4);
  FeatureMatrix raw = RandomFrames(40, 5, &rng);
  PcaModel p = FitPca(raw.data.cast<double>(), 5);
  FeatureMatrix y = ApplyPca(p, raw);
  for (int i = 0; i < 40; i += 3)
    for (int j = i + 1; j < 40; j += 5) {
      double d0 = (raw.data.row(i) - raw.data.row(j)).cast<double>().norm();
      double d1 = (y.data.row(i) - y.data.row(j)).cast<double>().norm();
      WDISC_ASSERT(std::abs(d0 - d1) < 1e-5 * (1 + d0));
    }
  // Norms of centred frames are preserved as well.
  for (int i = 0; i < 40; i++) {
    double n0 = (raw.data.row(i).cast<double>() - p.mean.transpose()).norm();
    double n1 = y.data.row(i).cast<double>().norm();
    WDISC_ASSERT(std::abs(n0 - n1) < 1e-5 * (1 + n0));
  }
}

static void UnitTestSampleFrames() {
  std::mt19937 rng(8);
  std::vector<FeatureMatrix> corpus;
  for (int u = 0; u < 4; u++) {
    FeatureMatrix m = RandomFrames(10 + u, 2, &rng);
    for (int32 i = 0; i < m.NumFrames(); i++) m.data(i, 0) = 100 * u + i;
    corpus.push_back(m);
  }
  std::span<const FeatureMatrix> span(corpus);
  DoubleMatrix all = SampleFrames(span, 1000, 0);
  WDISC_ASSERT(all.rows() == 46);
  WDISC_ASSERT(all(0, 0) == 0 && all(10, 0) == 100 && all(45, 0) == 312);

  DoubleMatrix some = SampleFrames(span, 20, 5);
  WDISC_ASSERT(some.rows() == 20);
  std::set<double> distinct;
  for (int i = 0; i < 20; i++) distinct.insert(some(i, 0));
  WDISC_ASSERT(distinct.size() == 20);
  WDISC_ASSERT(SampleFrames(span, 20, 5) == some);
  WDISC_ASSERT(SampleFrames(span, 20, 6) != some);
}

static void UnitTestModelIo() {
  std::string dir = test::TempDir("preprocess-io");
  std::mt19937 rng(9);
  FeatureMatrix raw = RandomFrames(30, 4, &rng);
  Normalizer n = FitNormalizer(raw.data);
  WriteNormalizer(n, dir + "/norm.wdf");
  Normalizer n2 = ReadNormalizer(dir + "/norm.wdf");
  WDISC_ASSERT((n.mean - n2.mean).cwiseAbs().maxCoeff() < 1e-5);
  WDISC_ASSERT((n.stddev - n2.stddev).cwiseAbs().maxCoeff() < 1e-5);
  PcaModel p = FitPca(raw.data.cast<double>(), 2);
  WritePcaModel(p, dir + "/pca.wdf");
  PcaModel p2 = ReadPcaModel(dir + "/pca.wdf");
  WDISC_ASSERT(p2.OutputDim() == 2 && p2.InputDim() == 4);
  WDISC_ASSERT((p.components - p2.components).cwiseAbs().maxCoeff() < 1e-6);
  WDISC_ASSERT(Throws<IoError>([&] { ReadPcaModel(dir + "/none.wdf"); }));
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestNormalizer();
  UnitTestPcaSimple();
  UnitTestPcaOracle();
  UnitTestPcaIsometry();
  UnitTestSampleFrames();
  UnitTestModelIo();
  std::cout << "Test OK.\n";
  return 0;
}
