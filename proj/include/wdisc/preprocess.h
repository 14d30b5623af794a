// include/wdisc/preprocess.h

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

#ifndef WDISC_PREPROCESS_H_
#define WDISC_PREPROCESS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wdisc/base.h"
#include "wdisc/feature-io.h"

namespace wdisc {

/// Per-dimension standardisation (population statistics).
struct Normalizer {
  VectorXd mean;
  VectorXd stddev;  // floored at kStddevFloor
};

inline constexpr double kStddevFloor = 1e-8;

/// Streams frames into pooled mean/variance statistics.  Each Accumulate()
/// call is reduced with a two-pass pass over its rows and merged into the
/// running totals (Chan et al. pairwise update), so long corpora do not
/// lose precision.
class NormalizerAccumulator {
 public:
  void Accumulate(const FloatMatrix &frames);
  int64_t NumFrames() const { return count_; }
  /// Throws InsufficientDataError if fewer than 2 frames were seen.
  Normalizer Finish() const;

 private:
  int64_t count_ = 0;
  VectorXd mean_;
  VectorXd m2_;
};

/// Fits over all frames of all matrices pooled together.
Normalizer FitNormalizer(std::span<const FeatureMatrix> corpus);
Normalizer FitNormalizer(const FloatMatrix &frames);

/// out[t][d] = (in[t][d] - mean[d]) / stddev[d].
FeatureMatrix ApplyNormalizer(const Normalizer &n, const FeatureMatrix &m);

struct PcaModel {
  VectorXd mean;                // D
  DoubleMatrix components;      // M x D, orthonormal rows
  VectorXd explained_variance;  // M, descending

  int32 InputDim() const { return static_cast<int32>(components.cols()); }
  int32 OutputDim() const { return static_cast<int32>(components.rows()); }
};

/// Rows of `sample` are frames.  Components are the top target_dim
/// eigenvectors of the population covariance of the centred sample, each
/// sign-fixed so that its largest-magnitude entry is positive.
PcaModel FitPca(const DoubleMatrix &sample, int32 target_dim);

/// Uniform sample of at most max_frames frames drawn without replacement
/// from the whole corpus; returns all frames, in order, when the corpus is
/// no larger than max_frames.
DoubleMatrix SampleFrames(std::span<const FeatureMatrix> corpus,
                          int64_t max_frames, uint64_t seed);

/// out row = components * (in row - mean).
FeatureMatrix ApplyPca(const PcaModel &p, const FeatureMatrix &m);

// Models persist through the feature-file format (frame rate field = 1):
// Normalizer as a 2 x D matrix [mean; stddev], PcaModel as (M+1) x D
// [mean; components].  Values are stored in single precision.
void WriteNormalizer(const Normalizer &n, const std::string &path);
Normalizer ReadNormalizer(const std::string &path);
void WritePcaModel(const PcaModel &p, const std::string &path);
PcaModel ReadPcaModel(const std::string &path);

}  // namespace wdisc

#endif  // WDISC_PREPROCESS_H_
