// src/seg-embed.cc

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

namespace wdisc {

namespace {

void CheckRange(const FeatureMatrix &m, int32 start, int32 end) {
  if (start < 0 || end <= start || end > m.NumFrames())
    WDISC_THROW(ParameterError) << "segment [" << start << ", " << end
                                << ") invalid for '" << m.utterance_id
                                << "' with " << m.NumFrames() << " frames";
}

}  // namespace

EmbeddingKind ParseEmbeddingKind(const std::string &name) {
  if (name == "mean") return EmbeddingKind::kMean;
  if (name == "subsample") return EmbeddingKind::kSubsampleFlatten;
  WDISC_THROW(ParameterError) << "unknown embedding '" << name
                              << "' (expected mean|subsample)";
}

SegmentEmbedding EmbedMean(const FeatureMatrix &m, int32 start, int32 end) {
  CheckRange(m, start, end);
  SegmentEmbedding z;
  z.utterance_id = m.utterance_id;
  z.start = start;
  z.end = end;
  z.vector = VectorXd::Zero(m.Dim());
  for (int32 t = start; t < end; t++)
    z.vector += m.data.row(t).cast<double>().transpose();
  z.vector /= static_cast<double>(end - start);
  double norm = z.vector.norm();
  if (norm == 0.0)
    WDISC_THROW(DegenerateError) << "zero mean vector for segment [" << start
                                 << ", " << end << ") of '" << m.utterance_id
                                 << "'";
  z.vector /= norm;
  return z;
}

std::vector<int32> SubsampleIndices(int32 start, int32 end, int32 n) {
  if (n < 1) WDISC_THROW(ParameterError) << "need at least one sample";
  std::vector<int32> idx(n);
  const int64_t span = end - 1 - start;
  if (n == 1) {
    idx[0] = start + static_cast<int32>(span / 2);
    return idx;
  }
  // round(start + k * span / (n - 1)) with halves rounded up, in integers.
  for (int32 k = 0; k < n; k++)
    idx[k] = start + static_cast<int32>((2 * k * span + (n - 1)) /
                                        (2 * int64_t{n - 1}));
  return idx;
}

SegmentEmbedding EmbedSubsampleFlatten(const FeatureMatrix &m, int32 start,
                                       int32 end, int32 n) {
  CheckRange(m, start, end);
  const int32 dim = m.Dim();
  SegmentEmbedding z;
  z.utterance_id = m.utterance_id;
  z.start = start;
  z.end = end;
  z.vector.resize(static_cast<Eigen::Index>(n) * dim);
  std::vector<int32> idx = SubsampleIndices(start, end, n);
  for (int32 k = 0; k < n; k++)
    z.vector.segment(static_cast<Eigen::Index>(k) * dim, dim) =
        m.data.row(idx[k]).cast<double>().transpose();
  return z;
}

SegmentEmbedding EmbedSegment(const FeatureMatrix &m, int32 start, int32 end,
                              const EmbeddingOptions &opts) {
  if (opts.kind == EmbeddingKind::kMean) return EmbedMean(m, start, end);
  return EmbedSubsampleFlatten(m, start, end, opts.num_samples);
}

std::vector<SegmentEmbedding> EmbedSegmentation(const FeatureMatrix &m,
                                                const BoundarySet &s,
                                                const EmbeddingOptions &opts) {
  if (s.num_frames != m.NumFrames())
    WDISC_THROW(ShapeError) << "segmentation of '" << s.utterance_id
                            << "' covers " << s.num_frames
                            << " frames, features have " << m.NumFrames();
  std::vector<SegmentEmbedding> out;
  out.reserve(s.boundaries.size());
  for (int32 i = 0; i < s.NumSegments(); i++) {
    auto [start, end] = s.Segment(i);
    out.push_back(EmbedSegment(m, start, end, opts));
  }
  return out;
}

}  // namespace wdisc
