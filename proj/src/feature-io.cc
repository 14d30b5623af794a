// src/feature-io.cc

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

#include "wdisc/feature-io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

namespace wdisc {

namespace {

void PutU32(uint32 v, unsigned char *out) {
  for (int i = 0; i < 4; i++) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

uint32 GetU32(const unsigned char *in) {
  uint32 v = 0;
  for (int i = 0; i < 4; i++) v |= static_cast<uint32>(in[i]) << (8 * i);
  return v;
}

void PutF32(float f, unsigned char *out) { PutU32(std::bit_cast<uint32>(f), out); }
float GetF32(const unsigned char *in) { return std::bit_cast<float>(GetU32(in)); }

std::vector<unsigned char> ReadAllBytes(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) WDISC_THROW(IoError) << "cannot open feature file " << path;
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  if (is.bad()) WDISC_THROW(IoError) << "error reading " << path;
  return bytes;
}

FeatureHeader ParseHeader(const unsigned char *bytes, std::size_t size,
                          const std::string &path) {
  if (size < 4 || std::memcmp(bytes, kFeatureMagic, 4) != 0)
    WDISC_THROW(FormatError) << "bad magic in feature file " << path;
  if (size < kFeatureHeaderBytes)
    WDISC_THROW(TruncationError) << "truncated header in " << path;
  FeatureHeader h;
  h.num_frames = GetU32(bytes + 4);
  h.dim = GetU32(bytes + 8);
  h.frame_rate_hz = GetF32(bytes + 12);
  return h;
}

}  // namespace

void ValidateFeatureMatrix(const FeatureMatrix &m) {
  if (m.NumFrames() < 1 || m.Dim() < 1)
    WDISC_THROW(ValidationError) << "empty feature matrix for '"
                                 << m.utterance_id << "'";
  if (!(m.frame_rate_hz > 0.0f) || !std::isfinite(m.frame_rate_hz))
    WDISC_THROW(ValidationError) << "non-positive frame rate for '"
                                 << m.utterance_id << "'";
  if (!m.data.allFinite())
    WDISC_THROW(ValidationError) << "non-finite feature values in '"
                                 << m.utterance_id << "'";
}

FeatureHeader ReadFeatureHeader(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) WDISC_THROW(IoError) << "cannot open feature file " << path;
  unsigned char buf[kFeatureHeaderBytes];
  is.read(reinterpret_cast<char *>(buf), kFeatureHeaderBytes);
  return ParseHeader(buf, static_cast<std::size_t>(is.gcount()), path);
}

FeatureMatrix ReadFeatureFile(const std::string &path,
                              const std::string &utterance_id) {
  std::vector<unsigned char> bytes = ReadAllBytes(path);
  FeatureHeader h = ParseHeader(bytes.data(), bytes.size(), path);
  std::size_t expected = static_cast<std::size_t>(h.num_frames) * h.dim * 4;
  std::size_t payload = bytes.size() - kFeatureHeaderBytes;
  if (payload < expected)
    WDISC_THROW(TruncationError) << path << ": expected " << expected
                                 << " payload bytes, found " << payload;
  if (payload > expected)
    WDISC_THROW(FormatError) << path << ": " << (payload - expected)
                             << " trailing bytes after payload";
  FeatureMatrix m;
  m.utterance_id = utterance_id.empty()
                       ? std::filesystem::path(path).stem().string()
                       : utterance_id;
  m.frame_rate_hz = h.frame_rate_hz;
  m.data.resize(h.num_frames, h.dim);
  const unsigned char *p = bytes.data() + kFeatureHeaderBytes;
  float *out = m.data.data();
  for (std::size_t i = 0; i < static_cast<std::size_t>(h.num_frames) * h.dim;
       i++, p += 4)
    out[i] = GetF32(p);
  ValidateFeatureMatrix(m);
  return m;
}

void WriteFeatureFile(const FeatureMatrix &m, const std::string &path) {
  ValidateFeatureMatrix(m);
  std::size_t n = static_cast<std::size_t>(m.NumFrames()) * m.Dim();
  std::vector<unsigned char> bytes(kFeatureHeaderBytes + 4 * n);
  std::memcpy(bytes.data(), kFeatureMagic, 4);
  PutU32(static_cast<uint32>(m.NumFrames()), bytes.data() + 4);
  PutU32(static_cast<uint32>(m.Dim()), bytes.data() + 8);
  PutF32(m.frame_rate_hz, bytes.data() + 12);
  const float *in = m.data.data();
  for (std::size_t i = 0; i < n; i++)
    PutF32(in[i], bytes.data() + kFeatureHeaderBytes + 4 * i);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) WDISC_THROW(IoError) << "cannot open " << path << " for writing";
  os.write(reinterpret_cast<const char *>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) WDISC_THROW(IoError) << "error writing " << path;
}

}  // namespace wdisc
