// src/prom-seg.cc

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

#include <algorithm>
#include <cmath>

namespace wdisc {

DissimilarityCurve ComputeDissimilarity(const FeatureMatrix &m) {
  const int32 num_frames = m.NumFrames();
  if (num_frames < 2)
    WDISC_THROW(ParameterError) << "dissimilarity needs at least 2 frames, '"
                                << m.utterance_id << "' has " << num_frames;
  std::vector<double> sq_norms(num_frames);
  for (int32 t = 0; t < num_frames; t++) {
    sq_norms[t] = m.data.row(t).cast<double>().squaredNorm();
    if (sq_norms[t] == 0.0)
      WDISC_THROW(DegenerateError) << "zero-norm frame " << t << " in '"
                                   << m.utterance_id << "'";
  }
  DissimilarityCurve c;
  c.utterance_id = m.utterance_id;
  c.values.resize(num_frames - 1);
  for (int32 t = 0; t + 1 < num_frames; t++) {
    double dot = m.data.row(t).cast<double>().dot(
        m.data.row(t + 1).cast<double>());
    // sqrt(a * b) rather than sqrt(a) * sqrt(b): identical frames then give
    // a distance of exactly 0.
    double cos =
        std::clamp(dot / std::sqrt(sq_norms[t] * sq_norms[t + 1]), -1.0, 1.0);
    c.values[t] = 1.0 - cos;
  }
  return c;
}

DissimilarityCurve SmoothCurve(const DissimilarityCurve &c,
                               int32 window_frames) {
  if (window_frames < 1)
    WDISC_THROW(ParameterError) << "smoothing window must be >= 1";
  const int32 n = static_cast<int32>(c.values.size());
  DissimilarityCurve out;
  out.utterance_id = c.utterance_id;
  if (window_frames == 1) {
    out.values = c.values;
    return out;
  }
  std::vector<double> prefix(n + 1, 0.0);
  for (int32 i = 0; i < n; i++) prefix[i + 1] = prefix[i] + c.values[i];
  out.values.resize(n);
  const int32 left = (window_frames - 1) / 2;
  for (int32 i = 0; i < n; i++) {
    int32 lo = std::max(0, i - left);
    int32 hi = std::min(n - 1, i - left + window_frames - 1);
    out.values[i] = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1);
  }
  return out;
}

double PeakProminence(const std::vector<double> &values, int32 index) {
  const int32 n = static_cast<int32>(values.size());
  const double v = values[index];
  double left_base = v;
  for (int32 j = index - 1; j >= 0 && values[j] <= v; j--)
    left_base = std::min(left_base, values[j]);
  double right_base = v;
  for (int32 j = index + 1; j < n && values[j] <= v; j++)
    right_base = std::min(right_base, values[j]);
  return v - std::max(left_base, right_base);
}

std::vector<int32> DetectProminentPeaks(const std::vector<double> &values,
                                        double prominence_threshold) {
  if (prominence_threshold < 0.0)
    WDISC_THROW(ParameterError) << "prominence threshold must be >= 0";
  const int32 n = static_cast<int32>(values.size());
  std::vector<int32> peaks;
  int32 i = 1;
  while (i < n - 1) {
    if (values[i] > values[i - 1]) {
      int32 j = i;  // end of the plateau starting at i
      while (j + 1 < n && values[j + 1] == values[i]) j++;
      if (j + 1 < n && values[j + 1] < values[i]) {
        if (PeakProminence(values, i) >= prominence_threshold)
          peaks.push_back(i);
      }
      i = j + 1;
    } else {
      i++;
    }
  }
  return peaks;
}

Segmentation ProminenceSegment(const FeatureMatrix &m,
                               const PromSegOptions &opts) {
  const int32 num_frames = m.NumFrames();
  std::vector<int32> interior;
  if (num_frames >= 2) {
    DissimilarityCurve c = SmoothCurve(ComputeDissimilarity(m),
                                       opts.window_frames);
    for (int32 peak : DetectProminentPeaks(c.values,
                                           opts.prominence_threshold))
      interior.push_back(peak + 1);
  }
  return MakeBoundarySet<Segmentation>(m.utterance_id, num_frames,
                                       std::move(interior));
}

}  // namespace wdisc
