// include/wdisc/seg-embed.h

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

#ifndef WDISC_SEG_EMBED_H_
#define WDISC_SEG_EMBED_H_

#include <string>
#include <vector>

#include "wdisc/base.h"
#include "wdisc/feature-io.h"
#include "wdisc/segmentation.h"

namespace wdisc {

/// Fixed-dimensional representation of frames [start, end) of an utterance.
struct SegmentEmbedding {
  std::string utterance_id;
  int32 start = 0;
  int32 end = 0;
  VectorXd vector;

  int32 LengthFrames() const { return end - start; }
};

enum class EmbeddingKind {
  kMean,               // mean of the frames, scaled to unit L2 norm
  kSubsampleFlatten,   // n evenly spaced frames concatenated, unnormalised
};

EmbeddingKind ParseEmbeddingKind(const std::string &name);

struct EmbeddingOptions {
  EmbeddingKind kind = EmbeddingKind::kMean;
  int32 num_samples = 10;  // n for kSubsampleFlatten

  /// Output dimensionality for input dimension `dim`.
  int32 OutputDim(int32 dim) const {
    return kind == EmbeddingKind::kMean ? dim : num_samples * dim;
  }
};

/// Throws DegenerateError when the mean of the segment is the zero vector.
SegmentEmbedding EmbedMean(const FeatureMatrix &m, int32 start, int32 end);

/// Frame indices used by EmbedSubsampleFlatten: n positions evenly spaced
/// over [start, end - 1] inclusive, each rounded to the nearest index (half
/// rounds up).  With n = 1 the single position is the lower middle frame,
/// start + (end - 1 - start) / 2.
std::vector<int32> SubsampleIndices(int32 start, int32 end, int32 n);

SegmentEmbedding EmbedSubsampleFlatten(const FeatureMatrix &m, int32 start,
                                       int32 end, int32 n);

SegmentEmbedding EmbedSegment(const FeatureMatrix &m, int32 start, int32 end,
                              const EmbeddingOptions &opts);

/// One embedding per segment of s, in order.
std::vector<SegmentEmbedding> EmbedSegmentation(const FeatureMatrix &m,
                                                const BoundarySet &s,
                                                const EmbeddingOptions &opts);

}  // namespace wdisc

#endif  // WDISC_SEG_EMBED_H_
