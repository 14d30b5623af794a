// include/wdisc/feature-io.h

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

#ifndef WDISC_FEATURE_IO_H_
#define WDISC_FEATURE_IO_H_

#include <string>

#include "wdisc/base.h"

namespace wdisc {

/// T x D per-frame features of one utterance at a fixed frame rate.
struct FeatureMatrix {
  std::string utterance_id;
  float frame_rate_hz = 50.0f;
  FloatMatrix data;

  int32 NumFrames() const { return static_cast<int32>(data.rows()); }
  int32 Dim() const { return static_cast<int32>(data.cols()); }
};

/// Throws ValidationError unless T >= 1, D >= 1, the frame rate is positive
/// and every value is finite.
void ValidateFeatureMatrix(const FeatureMatrix &m);

struct FeatureHeader {
  uint32 num_frames = 0;
  uint32 dim = 0;
  float frame_rate_hz = 0.0f;
};

// On-disk layout, all little-endian:
//   "WDF1" | T (u32) | D (u32) | frame_rate_hz (f32) | T*D f32, frame-major.
inline constexpr char kFeatureMagic[4] = {'W', 'D', 'F', '1'};
inline constexpr std::size_t kFeatureHeaderBytes = 16;

/// Reads only the 16-byte header.
FeatureHeader ReadFeatureHeader(const std::string &path);

/// Reads a feature file.  If utterance_id is empty the file stem is used.
/// Throws FormatError on a bad magic or trailing bytes, TruncationError on a
/// short payload, ValidationError on non-finite values and IoError when the
/// file cannot be opened.
FeatureMatrix ReadFeatureFile(const std::string &path,
                              const std::string &utterance_id = "");

/// Writes m; output bytes depend only on (data, frame_rate_hz).
void WriteFeatureFile(const FeatureMatrix &m, const std::string &path);

}  // namespace wdisc

#endif  // WDISC_FEATURE_IO_H_
