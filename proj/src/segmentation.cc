// src/segmentation.cc

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

#include "wdisc/segmentation.h"

#include <algorithm>

namespace wdisc {

void ValidateBoundarySet(const BoundarySet &b) {
  if (b.num_frames < 1)
    WDISC_THROW(ValidationError) << "utterance '" << b.utterance_id
                                 << "' has no frames";
  if (b.boundaries.empty() || b.boundaries.back() != b.num_frames)
    WDISC_THROW(ValidationError) << "boundaries of '" << b.utterance_id
                                 << "' must end with T=" << b.num_frames;
  int32 prev = 0;
  for (int32 x : b.boundaries) {
    if (x <= prev)
      WDISC_THROW(ValidationError)
          << "boundaries of '" << b.utterance_id
          << "' are not strictly increasing in (0, T] at " << x;
    prev = x;
  }
}

template <class Set>
Set MakeBoundarySet(const std::string &utterance_id, int32 num_frames,
                    std::vector<int32> interior) {
  std::erase_if(interior, [&](int32 x) { return x <= 0 || x >= num_frames; });
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()),
                 interior.end());
  Set s;
  s.utterance_id = utterance_id;
  s.num_frames = num_frames;
  s.boundaries = std::move(interior);
  s.boundaries.push_back(num_frames);
  ValidateBoundarySet(s);
  return s;
}

template Segmentation MakeBoundarySet<Segmentation>(const std::string &, int32,
                                                    std::vector<int32>);
template CandidateSet MakeBoundarySet<CandidateSet>(const std::string &, int32,
                                                    std::vector<int32>);

CandidateSet UnionCandidates(const CandidateSet &a, const CandidateSet &b) {
  if (a.utterance_id != b.utterance_id)
    WDISC_THROW(ValidationError) << "cannot merge candidates of '"
                                 << a.utterance_id << "' and '"
                                 << b.utterance_id << "'";
  if (a.num_frames != b.num_frames)
    WDISC_THROW(ShapeError) << "candidate sets for '" << a.utterance_id
                            << "' disagree on T (" << a.num_frames << " vs "
                            << b.num_frames << ")";
  std::vector<int32> all = a.boundaries;
  all.insert(all.end(), b.boundaries.begin(), b.boundaries.end());
  return MakeBoundarySet<CandidateSet>(a.utterance_id, a.num_frames,
                                       std::move(all));
}

bool IsSubsetOf(const BoundarySet &s, const BoundarySet &c) {
  return std::includes(c.boundaries.begin(), c.boundaries.end(),
                       s.boundaries.begin(), s.boundaries.end());
}

}  // namespace wdisc
