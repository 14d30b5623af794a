// src/segmentation-test.cc

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

#include <atomic>
#include <set>

#include "test-util.h"
#include "wdisc/parallel.h"

namespace wdisc {

using test::Throws;

static void UnitTestBoundarySet() {
  Segmentation s = MakeBoundarySet<Segmentation>("u", 10, {7, 3, 3, 0, 10, 12});
  WDISC_ASSERT((s.boundaries == std::vector<int32>{3, 7, 10}));
  WDISC_ASSERT(s.NumSegments() == 3);
  WDISC_ASSERT(s.Segment(0) == std::make_pair(0, 3));
  WDISC_ASSERT(s.Segment(2) == std::make_pair(7, 10));
  WDISC_ASSERT((s.Interior() == std::vector<int32>{3, 7}));
  Segmentation whole = MakeBoundarySet<Segmentation>("u", 5, {});
  WDISC_ASSERT((whole.boundaries == std::vector<int32>{5}));
  WDISC_ASSERT(whole.Interior().empty());

  BoundarySet bad{"u", 10, {3, 3, 10}};
  WDISC_ASSERT(Throws<ValidationError>([&] { ValidateBoundarySet(bad); }));
  bad.boundaries = {3, 9};
  WDISC_ASSERT(Throws<ValidationError>([&] { ValidateBoundarySet(bad); }));
  bad.boundaries = {0, 10};
  WDISC_ASSERT(Throws<ValidationError>([&] { ValidateBoundarySet(bad); }));
  bad.boundaries = {};
  WDISC_ASSERT(Throws<ValidationError>([&] { ValidateBoundarySet(bad); }));
  WDISC_ASSERT(Throws<ValidationError>(
      [] { MakeBoundarySet<Segmentation>("u", 0, {}); }));

  // Segments always tile [0, T).
  std::mt19937 rng(1);
  for (int trial = 0; trial < 200; trial++) {
    int32 t = 1 + rng() % 50;
    std::vector<int32> interior;
    for (int k = 0; k < 10; k++) interior.push_back(rng() % (t + 2));
    Segmentation r = MakeBoundarySet<Segmentation>("r", t, interior);
    int32 covered = 0;
    for (int32 i = 0; i < r.NumSegments(); i++) {
      auto [a, b] = r.Segment(i);
      WDISC_ASSERT(a == covered && b > a);
      covered = b;
    }
    WDISC_ASSERT(covered == t);
  }
}

static void UnitTestUnionSubset() {
  CandidateSet a = MakeBoundarySet<CandidateSet>("u", 10, {2, 5});
  CandidateSet b = MakeBoundarySet<CandidateSet>("u", 10, {5, 8});
  CandidateSet u = UnionCandidates(a, b);
  WDISC_ASSERT((u.boundaries == std::vector<int32>{2, 5, 8, 10}));
  WDISC_ASSERT(IsSubsetOf(a, u) && IsSubsetOf(b, u) && !IsSubsetOf(u, a));
  CandidateSet other = MakeBoundarySet<CandidateSet>("v", 10, {});
  WDISC_ASSERT(Throws<ValidationError>([&] { UnionCandidates(a, other); }));
  CandidateSet longer = MakeBoundarySet<CandidateSet>("u", 12, {});
  WDISC_ASSERT(Throws<ShapeError>([&] { UnionCandidates(a, longer); }));
}

static void UnitTestParallelFor() {
  for (int workers : {0, 1, 3, 8}) {
    std::vector<int> hit(1000, 0);
    ParallelFor(hit.size(), workers, [&](std::size_t i) { hit[i]++; });
    for (int h : hit) WDISC_ASSERT(h == 1);
  }
  ParallelFor(0, 4, [](std::size_t) { WDISC_ASSERT(false); });
  std::atomic<int> calls{0};
  bool caught = Throws<ValidationError>([&] {
    ParallelFor(100, 4, [&](std::size_t i) {
      calls++;
      if (i == 42) WDISC_THROW(ValidationError) << "boom";
    });
  });
  WDISC_ASSERT(caught && calls > 0);
  WDISC_ASSERT(DefaultNumWorkers() >= 1);
}

static void UnitTestDeriveSeed() {
  std::set<uint64_t> seen;
  for (std::size_t i = 0; i < 1000; i++) seen.insert(DeriveSeed(7, i));
  WDISC_ASSERT(seen.size() == 1000);
  WDISC_ASSERT(DeriveSeed(7, 3) == DeriveSeed(7, 3));
  WDISC_ASSERT(DeriveSeed(7, 3) != DeriveSeed(8, 3));
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestBoundarySet();
  UnitTestUnionSubset();
  UnitTestParallelFor();
  UnitTestDeriveSeed();
  std::cout << "Test OK.\n";
  return 0;
}
