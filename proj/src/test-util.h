// src/test-util.h

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

#ifndef WDISC_TEST_UTIL_H_
#define WDISC_TEST_UTIL_H_

// Small helpers shared by the *-test.cc programs.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "wdisc/base.h"

namespace wdisc {
namespace test {

/// True when fn() throws exactly an E (or a subclass of E).
template <class E, class Fn>
bool Throws(Fn &&fn) {
  try {
    fn();
  } catch (const E &) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

inline bool ApproxEqual(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol;
}

/// Fresh empty directory under the system temp dir, named after `tag`.
inline std::string TempDir(const std::string &tag) {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / ("wdisc-test-" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

inline std::string ReadBytes(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline void WriteBytes(const std::string &path, const std::string &bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << bytes;
}

inline void WriteText(const std::string &path, const std::string &text) {
  WriteBytes(path, text);
}

}  // namespace test
}  // namespace wdisc

#endif  // WDISC_TEST_UTIL_H_
