// src/preprocess.cc

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
#include <numeric>
#include <random>
#include <ranges>

namespace wdisc {

void NormalizerAccumulator::Accumulate(const FloatMatrix &frames) {
  if (frames.rows() == 0) return;
  if (count_ == 0) {
    mean_ = VectorXd::Zero(frames.cols());
    m2_ = VectorXd::Zero(frames.cols());
  } else if (frames.cols() != mean_.size()) {
    WDISC_THROW(ShapeError) << "normalizer expects dimension " << mean_.size()
                            << ", got " << frames.cols();
  }
  const int64_t n = frames.rows();
  VectorXd batch_mean = frames.cast<double>().colwise().mean().transpose();
  VectorXd batch_m2 = VectorXd::Zero(frames.cols());
  for (int64_t t = 0; t < n; t++) {
    VectorXd d = frames.row(t).cast<double>().transpose() - batch_mean;
    batch_m2 += d.cwiseProduct(d);
  }
  const double total = static_cast<double>(count_ + n);
  VectorXd delta = batch_mean - mean_;
  mean_ += delta * (static_cast<double>(n) / total);
  m2_ += batch_m2 +
         delta.cwiseProduct(delta) * (static_cast<double>(count_) * n / total);
  count_ += n;
}

Normalizer NormalizerAccumulator::Finish() const {
  if (count_ < 2)
    WDISC_THROW(InsufficientDataError)
        << "need at least 2 frames to fit a normalizer, got " << count_;
  Normalizer out;
  out.mean = mean_;
  out.stddev = (m2_ / static_cast<double>(count_))
                   .cwiseSqrt()
                   .cwiseMax(kStddevFloor);
  return out;
}

Normalizer FitNormalizer(std::span<const FeatureMatrix> corpus) {
  NormalizerAccumulator acc;
  for (const FeatureMatrix &m : corpus) acc.Accumulate(m.data);
  return acc.Finish();
}

Normalizer FitNormalizer(const FloatMatrix &frames) {
  NormalizerAccumulator acc;
  acc.Accumulate(frames);
  return acc.Finish();
}

FeatureMatrix ApplyNormalizer(const Normalizer &n, const FeatureMatrix &m) {
  if (m.Dim() != n.mean.size())
    WDISC_THROW(ShapeError) << "normalizer dimension " << n.mean.size()
                            << " does not match features of '"
                            << m.utterance_id << "' (" << m.Dim() << ")";
  FeatureMatrix out;
  out.utterance_id = m.utterance_id;
  out.frame_rate_hz = m.frame_rate_hz;
  out.data.resize(m.NumFrames(), m.Dim());
  for (int32 t = 0; t < m.NumFrames(); t++)
    for (int32 d = 0; d < m.Dim(); d++)
      out.data(t, d) =
          static_cast<float>((m.data(t, d) - n.mean[d]) / n.stddev[d]);
  return out;
}

PcaModel FitPca(const DoubleMatrix &sample, int32 target_dim) {
  const int64_t n = sample.rows(), dim = sample.cols();
  if (target_dim < 1 || target_dim > dim)
    WDISC_THROW(ParameterError) << "PCA dimension " << target_dim
                                << " must be in [1, " << dim << "]";
  if (n < target_dim)
    WDISC_THROW(InsufficientDataError)
        << "PCA to " << target_dim << " dimensions needs at least that many "
        << "frames, got " << n;
  PcaModel p;
  p.mean = sample.colwise().mean().transpose();
  DoubleMatrix centered = sample.rowwise() - p.mean.transpose();
  Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    WDISC_THROW(DegenerateError) << "eigendecomposition of covariance failed";
  // Eigen sorts eigenvalues ascending.
  p.components.resize(target_dim, dim);
  p.explained_variance.resize(target_dim);
  for (int32 i = 0; i < target_dim; i++) {
    int64_t col = dim - 1 - i;
    VectorXd v = eig.eigenvectors().col(col);
    Eigen::Index argmax;
    v.cwiseAbs().maxCoeff(&argmax);
    if (v[argmax] < 0) v = -v;
    p.components.row(i) = v.transpose();
    p.explained_variance[i] = std::max(0.0, eig.eigenvalues()[col]);
  }
  return p;
}

DoubleMatrix SampleFrames(std::span<const FeatureMatrix> corpus,
                          int64_t max_frames, uint64_t seed) {
  if (corpus.empty())
    WDISC_THROW(InsufficientDataError) << "empty corpus";
  const int64_t dim = corpus.front().Dim();
  std::vector<int64_t> offsets;  // cumulative frame counts
  int64_t total = 0;
  for (const FeatureMatrix &m : corpus) {
    if (m.Dim() != dim)
      WDISC_THROW(ShapeError) << "inconsistent feature dimension in '"
                              << m.utterance_id << "'";
    offsets.push_back(total);
    total += m.NumFrames();
  }
  std::vector<int64_t> picks;
  if (total <= max_frames) {
    picks.resize(total);
    std::iota(picks.begin(), picks.end(), int64_t{0});
  } else {
    std::mt19937_64 rng(seed);
    std::vector<int64_t> all(total);
    std::iota(all.begin(), all.end(), int64_t{0});
    picks.reserve(max_frames);
    std::sample(all.begin(), all.end(), std::back_inserter(picks), max_frames,
                rng);
  }
  DoubleMatrix out(static_cast<Eigen::Index>(picks.size()), dim);
  std::size_t u = 0;
  for (std::size_t i = 0; i < picks.size(); i++) {
    while (u + 1 < offsets.size() && offsets[u + 1] <= picks[i]) u++;
    out.row(i) =
        corpus[u].data.row(picks[i] - offsets[u]).cast<double>();
  }
  return out;
}

FeatureMatrix ApplyPca(const PcaModel &p, const FeatureMatrix &m) {
  if (m.Dim() != p.InputDim())
    WDISC_THROW(ShapeError) << "PCA expects dimension " << p.InputDim()
                            << ", features of '" << m.utterance_id
                            << "' have " << m.Dim();
  FeatureMatrix out;
  out.utterance_id = m.utterance_id;
  out.frame_rate_hz = m.frame_rate_hz;
  DoubleMatrix centered = m.data.cast<double>().rowwise() - p.mean.transpose();
  out.data = (centered * p.components.transpose()).cast<float>();
  return out;
}

namespace {

FeatureMatrix StackRows(std::initializer_list<const DoubleMatrix *> parts) {
  Eigen::Index rows = 0, cols = (*parts.begin())->cols();
  for (const DoubleMatrix *p : parts) rows += p->rows();
  FeatureMatrix m;
  m.frame_rate_hz = 1.0f;
  m.data.resize(rows, cols);
  Eigen::Index r = 0;
  for (const DoubleMatrix *p : parts) {
    m.data.middleRows(r, p->rows()) = p->cast<float>();
    r += p->rows();
  }
  return m;
}

}  // namespace

void WriteNormalizer(const Normalizer &n, const std::string &path) {
  DoubleMatrix mean = n.mean.transpose(), sd = n.stddev.transpose();
  WriteFeatureFile(StackRows({&mean, &sd}), path);
}

Normalizer ReadNormalizer(const std::string &path) {
  FeatureMatrix m = ReadFeatureFile(path);
  if (m.NumFrames() != 2)
    WDISC_THROW(FormatError) << path << ": normalizer file must have 2 rows";
  Normalizer n;
  n.mean = m.data.row(0).cast<double>().transpose();
  n.stddev = m.data.row(1).cast<double>().transpose();
  return n;
}

void WritePcaModel(const PcaModel &p, const std::string &path) {
  DoubleMatrix mean = p.mean.transpose();
  WriteFeatureFile(StackRows({&mean, &p.components}), path);
}

PcaModel ReadPcaModel(const std::string &path) {
  FeatureMatrix m = ReadFeatureFile(path);
  if (m.NumFrames() < 2)
    WDISC_THROW(FormatError) << path << ": PCA file needs a mean row and at "
                             << "least one component";
  PcaModel p;
  p.mean = m.data.row(0).cast<double>().transpose();
  p.components = m.data.bottomRows(m.NumFrames() - 1).cast<double>();
  return p;
}

}  // namespace wdisc
