// src/feature-io-test.cc

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

#include <cstring>
#include <limits>

#include "test-util.h"

namespace wdisc {

using test::ReadBytes;
using test::Throws;
using test::WriteBytes;

static FeatureMatrix MakeMatrix(std::initializer_list<std::initializer_list<float>> rows,
                                float rate = 50.0f) {
  FeatureMatrix m;
  m.utterance_id = "utt";
  m.frame_rate_hz = rate;
  m.data.resize(rows.size(), rows.begin()->size());
  int32 r = 0;
  for (auto row : rows) {
    int32 c = 0;
    for (float v : row) m.data(r, c++) = v;
    r++;
  }
  return m;
}

// Header for a file claiming T x D at 50 Hz.
static std::string Header(uint32 t, uint32 d) {
  std::string h(kFeatureMagic, 4);
  float rate = 50.0f;
  h.append(reinterpret_cast<const char *>(&t), 4);
  h.append(reinterpret_cast<const char *>(&d), 4);
  h.append(reinterpret_cast<const char *>(&rate), 4);
  return h;
}

static void UnitTestRoundTrip() {
  std::string dir = test::TempDir("feature-io");
  FeatureMatrix m = MakeMatrix({{1, 0}, {0, 1}, {1, 1}});
  WriteFeatureFile(m, dir + "/a.wdf");
  FeatureMatrix r = ReadFeatureFile(dir + "/a.wdf");
  WDISC_ASSERT(r.data == m.data);
  WDISC_ASSERT(r.frame_rate_hz == 50.0f);
  WDISC_ASSERT(r.utterance_id == "a");  // file stem
  WDISC_ASSERT(ReadFeatureFile(dir + "/a.wdf", "x").utterance_id == "x");

  FeatureHeader h = ReadFeatureHeader(dir + "/a.wdf");
  WDISC_ASSERT(h.num_frames == 3 && h.dim == 2 && h.frame_rate_hz == 50.0f);

  // Random matrices, including awkward values, come back bit-exact.
  std::mt19937 rng(3);
  std::normal_distribution<float> g(0.0f, 100.0f);
  for (int trial = 0; trial < 20; trial++) {
    FeatureMatrix x;
    x.frame_rate_hz = 100.0f;
    x.data.resize(1 + trial, 1 + trial % 7);
    for (int32 i = 0; i < x.data.size(); i++) x.data.data()[i] = g(rng);
    x.data(0, 0) = std::numeric_limits<float>::denorm_min();
    WriteFeatureFile(x, dir + "/r.wdf");
    FeatureMatrix y = ReadFeatureFile(dir + "/r.wdf");
    WDISC_ASSERT(std::memcmp(x.data.data(), y.data.data(),
                             sizeof(float) * x.data.size()) == 0);
    WDISC_ASSERT(y.frame_rate_hz == 100.0f);
  }
}

static void UnitTestPayloadSize() {
  std::string dir = test::TempDir("feature-io-size");
  WriteFeatureFile(MakeMatrix({{0}}), dir + "/one.wdf");
  WDISC_ASSERT(ReadBytes(dir + "/one.wdf").size() == kFeatureHeaderBytes + 4);
  WriteFeatureFile(MakeMatrix({{1, 2, 3}, {4, 5, 6}}), dir + "/two.wdf");
  WDISC_ASSERT(ReadBytes(dir + "/two.wdf").size() == kFeatureHeaderBytes + 24);

  // Byte layout: magic, little-endian T and D, then frame-major values.
  std::string b = ReadBytes(dir + "/two.wdf");
  WDISC_ASSERT(b.substr(0, 4) == "WDF1");
  WDISC_ASSERT(b[4] == 2 && b[5] == 0 && b[8] == 3 && b[9] == 0);
  float second;
  std::memcpy(&second, b.data() + kFeatureHeaderBytes + 4, 4);
  WDISC_ASSERT(second == 2.0f);
}

static void UnitTestDeterminism() {
  std::string dir = test::TempDir("feature-io-det");
  FeatureMatrix m = MakeMatrix({{0.1f, 0.2f}, {0.3f, 0.4f}});
  WriteFeatureFile(m, dir + "/a.wdf");
  m.utterance_id = "other";  // not part of the file
  WriteFeatureFile(m, dir + "/b.wdf");
  WDISC_ASSERT(ReadBytes(dir + "/a.wdf") == ReadBytes(dir + "/b.wdf"));
}

static void UnitTestErrors() {
  std::string dir = test::TempDir("feature-io-err");
  WriteFeatureFile(MakeMatrix({{1, 0}, {0, 1}}), dir + "/ok.wdf");
  std::string good = ReadBytes(dir + "/ok.wdf");

  std::string bad_magic = good;
  bad_magic[3] = '2';
  WriteBytes(dir + "/magic.wdf", bad_magic);
  WDISC_ASSERT(Throws<FormatError>([&] { ReadFeatureFile(dir + "/magic.wdf"); }));

  // T=5, D=4 needs 80 payload bytes; 70 are present.
  WriteBytes(dir + "/trunc.wdf", Header(5, 4) + std::string(70, '\0'));
  WDISC_ASSERT(
      Throws<TruncationError>([&] { ReadFeatureFile(dir + "/trunc.wdf"); }));
  WriteBytes(dir + "/short-header.wdf", good.substr(0, 10));
  WDISC_ASSERT(Throws<TruncationError>(
      [&] { ReadFeatureFile(dir + "/short-header.wdf"); }));

  WriteBytes(dir + "/trailing.wdf", good + "x");
  WDISC_ASSERT(Throws<FormatError>([&] { ReadFeatureFile(dir + "/trailing.wdf"); }));
  WDISC_ASSERT(!Throws<TruncationError>(
      [&] { ReadFeatureFile(dir + "/trailing.wdf"); }));

  FeatureMatrix nan = MakeMatrix({{1, std::numeric_limits<float>::quiet_NaN()}});
  WDISC_ASSERT(Throws<ValidationError>([&] { ValidateFeatureMatrix(nan); }));
  WDISC_ASSERT(
      Throws<ValidationError>([&] { WriteFeatureFile(nan, dir + "/nan.wdf"); }));
  std::string inf_file = Header(1, 1);
  float inf = std::numeric_limits<float>::infinity();
  inf_file.append(reinterpret_cast<const char *>(&inf), 4);
  WriteBytes(dir + "/inf.wdf", inf_file);
  WDISC_ASSERT(Throws<ValidationError>([&] { ReadFeatureFile(dir + "/inf.wdf"); }));

  WriteBytes(dir + "/empty.wdf", Header(0, 4));
  WDISC_ASSERT(Throws<ValidationError>([&] { ReadFeatureFile(dir + "/empty.wdf"); }));

  WDISC_ASSERT(Throws<IoError>([&] { ReadFeatureFile(dir + "/missing.wdf"); }));
  WDISC_ASSERT(Throws<IoError>(
      [&] { WriteFeatureFile(MakeMatrix({{1}}), dir + "/no/such/dir.wdf"); }));
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestRoundTrip();
  UnitTestPayloadSize();
  UnitTestDeterminism();
  UnitTestErrors();
  std::cout << "Test OK.\n";
  return 0;
}
