// include/wdisc/segmentation.h

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

#ifndef WDISC_SEGMENTATION_H_
#define WDISC_SEGMENTATION_H_

#include <string>
#include <utility>
#include <vector>

#include "wdisc/base.h"

namespace wdisc {

/// Ordered frame positions in (0, T] that always end with T.  Frame 0 is the
/// implicit start of the first segment; segment i covers
/// [boundaries[i-1], boundaries[i]) with boundaries[-1] = 0.
struct BoundarySet {
  std::string utterance_id;
  int32 num_frames = 0;
  std::vector<int32> boundaries;

  int32 NumSegments() const { return static_cast<int32>(boundaries.size()); }
  /// [start, end) of segment i.
  std::pair<int32, int32> Segment(int32 i) const {
    return {i == 0 ? 0 : boundaries[i - 1], boundaries[i]};
  }
  /// Boundaries strictly inside (0, T).
  std::vector<int32> Interior() const {
    return {boundaries.begin(), boundaries.end() - (boundaries.empty() ? 0 : 1)};
  }
  bool operator==(const BoundarySet &other) const = default;
};

/// A chosen segmentation of one utterance.
struct Segmentation : BoundarySet {};

/// Positions a segmentation may place boundaries at.
struct CandidateSet : BoundarySet {};

/// Throws ValidationError unless the boundaries are strictly increasing,
/// lie in (0, T] and end with T.
void ValidateBoundarySet(const BoundarySet &b);

/// Builds a validated set from interior positions (sorted, deduplicated,
/// positions outside (0, T) dropped) plus the final boundary T.
template <class Set>
Set MakeBoundarySet(const std::string &utterance_id, int32 num_frames,
                    std::vector<int32> interior);

/// Union of the positions of two sets over the same utterance.
CandidateSet UnionCandidates(const CandidateSet &a, const CandidateSet &b);

/// True when every boundary of s is also in c.
bool IsSubsetOf(const BoundarySet &s, const BoundarySet &c);

}  // namespace wdisc

#endif  // WDISC_SEGMENTATION_H_
