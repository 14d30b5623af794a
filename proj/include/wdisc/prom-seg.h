// include/wdisc/prom-seg.h

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

#ifndef WDISC_PROM_SEG_H_
#define WDISC_PROM_SEG_H_

#include <string>
#include <vector>

#include "wdisc/base.h"
#include "wdisc/feature-io.h"
#include "wdisc/segmentation.h"

namespace wdisc {

/// Cosine distance between adjacent frames; values[i] compares frames i and
/// i + 1, so the curve has T - 1 points in [0, 2].
struct DissimilarityCurve {
  std::string utterance_id;
  std::vector<double> values;
};

struct PromSegOptions {
  int32 window_frames = 4;
  double prominence_threshold = 0.75;
};

/// Settings used to produce ES-KMeans+ candidate boundaries.
inline PromSegOptions CandidatePromSegOptions() { return {5, 0.3}; }
/// Near-exhaustive setting that maximises candidate recall.
inline PromSegOptions MaxRecallPromSegOptions() { return {3, 1e-4}; }

/// Requires T >= 2.  Throws DegenerateError if a frame has zero norm.
DissimilarityCurve ComputeDissimilarity(const FeatureMatrix &m);

/// Centred moving average; the window covers
/// [i - (w-1)/2, i - (w-1)/2 + w - 1] and is clipped at the curve ends, the
/// mean taken over the indices that remain.
DissimilarityCurve SmoothCurve(const DissimilarityCurve &c,
                               int32 window_frames);

/// Topographic prominence of a peak with value v at index i: v minus the
/// larger of the two bases, where each base is the minimum encountered
/// walking outward from i until a value > v or the end of the curve.
double PeakProminence(const std::vector<double> &values, int32 index);

/// Strict local maxima (a plateau counts once, at its leftmost index; the
/// curve ends never qualify) whose prominence is >= threshold, ascending.
std::vector<int32> DetectProminentPeaks(const std::vector<double> &values,
                                        double prominence_threshold);

/// Dissimilarity -> smoothing -> peak picking.  A peak at curve index i
/// places a boundary at frame i + 1; T is always the final boundary.
Segmentation ProminenceSegment(const FeatureMatrix &m,
                               const PromSegOptions &opts);

}  // namespace wdisc

#endif  // WDISC_PROM_SEG_H_
