// src/base.cc

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

#include "wdisc/base.h"

#include <atomic>
#include <cstdlib>
#include <random>

namespace wdisc {

namespace {
std::atomic<int> g_verbose_level{0};
}

uint64_t DeriveSeed(uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<uint32>(seed), static_cast<uint32>(seed >> 32),
                    static_cast<uint32>(index),
                    static_cast<uint32>(uint64_t{index} >> 32)};
  std::mt19937_64 rng(seq);
  return rng();
}

int GetVerboseLevel() { return g_verbose_level.load(); }
void SetVerboseLevel(int level) { g_verbose_level.store(level); }

namespace internal {

LogMessage::~LogMessage() {
  ss_ << '\n';
  std::cerr << ss_.str();
}

void AssertFailure(const char *cond, const char *file, int line) {
  std::cerr << "ASSERTION_FAILED (" << file << ":" << line << ") " << cond
            << std::endl;
  std::abort();
}

}  // namespace internal
}  // namespace wdisc
