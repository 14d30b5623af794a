// include/wdisc/base.h

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

#ifndef WDISC_BASE_H_
#define WDISC_BASE_H_

#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wdisc {

using int32 = std::int32_t;
using uint32 = std::uint32_t;

/// Row-major single-precision matrix; the in-memory form of a feature file.
using FloatMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
/// Row-major double matrix used for embeddings and centroids.
using DoubleMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::VectorXd;

// Error hierarchy.  The CLI maps IoError to exit code 3 and every other
// wdisc::Error to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

class IoError : public Error {
 public:
  using Error::Error;
};
class FormatError : public Error {
 public:
  using Error::Error;
};
class TruncationError : public FormatError {
 public:
  using FormatError::FormatError;
};
class ValidationError : public Error {
 public:
  using Error::Error;
};
class ShapeError : public Error {
 public:
  using Error::Error;
};
class ParameterError : public Error {
 public:
  using Error::Error;
};
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};
class DegenerateError : public Error {
 public:
  using Error::Error;
};
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

namespace internal {

// Accumulates a message and throws E on destruction of the full expression.
template <class E>
class ErrorStream {
 public:
  ErrorStream() = default;
  template <class T>
  ErrorStream &operator<<(const T &t) {
    ss_ << t;
    return *this;
  }
  [[noreturn]] void Throw() const { throw E(ss_.str()); }

 private:
  std::ostringstream ss_;
};

struct Thrower {
  template <class E>
  [[noreturn]] void operator&(const ErrorStream<E> &s) const {
    s.Throw();
  }
};

class LogMessage {
 public:
  explicit LogMessage(const char *level) { ss_ << level << ": "; }
  ~LogMessage();
  template <class T>
  LogMessage &operator<<(const T &t) {
    ss_ << t;
    return *this;
  }

 private:
  std::ostringstream ss_;
};

[[noreturn]] void AssertFailure(const char *cond, const char *file, int line);

}  // namespace internal

/// Independent seed for item `index` (e.g. an utterance) derived from a
/// run-level seed.
uint64_t DeriveSeed(uint64_t seed, std::size_t index);

/// Verbosity for WDISC_VLOG; 0 silences progress messages.
int GetVerboseLevel();
void SetVerboseLevel(int level);

}  // namespace wdisc

// Usage: WDISC_THROW(ValidationError) << "bad thing " << x;
#define WDISC_THROW(ErrType)      \
  ::wdisc::internal::Thrower() & \
      ::wdisc::internal::ErrorStream<::wdisc::ErrType>()

#define WDISC_LOG ::wdisc::internal::LogMessage("LOG")
#define WDISC_WARN ::wdisc::internal::LogMessage("WARNING")
#define WDISC_VLOG(v) \
  if ((v) <= ::wdisc::GetVerboseLevel()) ::wdisc::internal::LogMessage("VLOG")

#define WDISC_ASSERT(cond)                                         \
  do {                                                             \
    if (!(cond))                                                   \
      ::wdisc::internal::AssertFailure(#cond, __FILE__, __LINE__); \
  } while (0)

#endif  // WDISC_BASE_H_
