// include/wdisc/parallel.h

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

#ifndef WDISC_PARALLEL_H_
#define WDISC_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace wdisc {

/// Number of workers to use when the caller passes 0.
int DefaultNumWorkers();

/// Calls fn(i) for every i in [0, n) using up to num_workers threads
/// (0 means DefaultNumWorkers()).  Indices are handed out in contiguous
/// blocks, so fn must only write to per-index state.  The first exception
/// thrown by any call is rethrown on the calling thread after all workers
/// have joined.
void ParallelFor(std::size_t n, int num_workers,
                 const std::function<void(std::size_t)> &fn);

}  // namespace wdisc

#endif  // WDISC_PARALLEL_H_
