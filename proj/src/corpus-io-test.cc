// src/corpus-io-test.cc

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

#include "wdisc/corpus-io.h"

#include <algorithm>

#include "test-util.h"

namespace wdisc {

using test::ReadBytes;
using test::Throws;
using test::WriteText;

static void UnitTestAlignments() {
  std::string dir = test::TempDir("corpus-io-ali");
  WriteText(dir + "/one.txt", "utt1 0.00 0.50 cat\n");
  std::vector<AlignmentTrack> t = ReadAlignments(dir + "/one.txt", Tier::kWord);
  WDISC_ASSERT(t.size() == 1 && t[0].utterance_id == "utt1");
  WDISC_ASSERT(t[0].entries.size() == 1 && t[0].entries[0].label == "cat");
  WDISC_ASSERT(t[0].entries[0].start_s == 0.0 && t[0].entries[0].end_s == 0.5);
  WDISC_ASSERT(t[0].tier == Tier::kWord);

  WriteText(dir + "/overlap.txt", "u 0.0 0.5 a\nu 0.4 0.9 b\n");
  WDISC_ASSERT(Throws<ValidationError>(
      [&] { ReadAlignments(dir + "/overlap.txt", Tier::kWord); }));
  WriteText(dir + "/backwards.txt", "u 0.5 0.5 a\n");
  WDISC_ASSERT(Throws<ValidationError>(
      [&] { ReadAlignments(dir + "/backwards.txt", Tier::kWord); }));
  WriteText(dir + "/short.txt", "u 0.5 0.6\n");
  WDISC_ASSERT(
      Throws<FormatError>([&] { ReadAlignments(dir + "/short.txt", Tier::kWord); }));
  WriteText(dir + "/nan.txt", "u x 0.6 a\n");
  WDISC_ASSERT(
      Throws<FormatError>([&] { ReadAlignments(dir + "/nan.txt", Tier::kWord); }));

  // Multi-token labels are phone transcriptions and only allowed there.
  WriteText(dir + "/multi.txt", "u 0.0 0.3 k ae t\n");
  WDISC_ASSERT(
      Throws<FormatError>([&] { ReadAlignments(dir + "/multi.txt", Tier::kWord); }));
  WDISC_ASSERT(ReadAlignments(dir + "/multi.txt", Tier::kPhone)[0]
                   .entries[0]
                   .label == "k ae t");

  // Interleaved utterances: grouped, each track sorted by start time; the
  // oracle sorts all lines by (utt, start) and groups consecutive runs.
  std::mt19937 rng(5);
  std::vector<std::tuple<std::string, double, double, std::string>> lines;
  for (int u = 0; u < 4; u++)
    for (int k = 0; k < 6; k++)
      lines.emplace_back("utt" + std::to_string(u), 0.25 * k, 0.25 * (k + 1),
                         "w" + std::to_string(u * 10 + k));
  std::shuffle(lines.begin(), lines.end(), rng);
  std::string text;
  for (auto &[u, s, e, l] : lines) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s %.2f %.2f %s\n", u.c_str(), s, e,
                  l.c_str());
    text += buf;
  }
  WriteText(dir + "/mixed.txt", text);
  AlignmentMap m = ReadAlignmentMap(dir + "/mixed.txt", Tier::kWord);
  std::sort(lines.begin(), lines.end());
  WDISC_ASSERT(m.size() == 4);
  std::size_t i = 0;
  for (const auto &[id, track] : m) {
    for (const AlignmentEntry &e : track.entries) {
      WDISC_ASSERT(std::get<0>(lines[i]) == id);
      WDISC_ASSERT(std::get<1>(lines[i]) == e.start_s);
      WDISC_ASSERT(std::get<3>(lines[i]) == e.label);
      i++;
    }
  }
  WDISC_ASSERT(i == lines.size());

  // Write -> read round trip.
  std::vector<AlignmentTrack> tracks;
  for (const auto &[id, track] : m) tracks.push_back(track);
  WriteAlignments(tracks, dir + "/rt.txt");
  std::vector<AlignmentTrack> back = ReadAlignments(dir + "/rt.txt", Tier::kWord);
  WDISC_ASSERT(back.size() == tracks.size());
  for (std::size_t k = 0; k < back.size(); k++) {
    WDISC_ASSERT(back[k].utterance_id == tracks[k].utterance_id);
    WDISC_ASSERT(back[k].entries.size() == tracks[k].entries.size());
  }

  WDISC_ASSERT(ParseTier("syllable") == Tier::kSyllable);
  WDISC_ASSERT(TierName(Tier::kPhone) == "phone");
  WDISC_ASSERT(Throws<ParameterError>([] { ParseTier("letter"); }));
  WDISC_ASSERT(
      Throws<IoError>([&] { ReadAlignments(dir + "/missing.txt", Tier::kWord); }));
}

static void UnitTestClassFile() {
  std::string dir = test::TempDir("corpus-io-cls");
  ClassFile one;
  one.classes[0].push_back({"utt1", 0.10, 0.50});
  WriteClassFile(one, dir + "/one.cls");
  WDISC_ASSERT(ReadBytes(dir + "/one.cls") == "Class 0\nutt1 0.10 0.50\n");

  ClassFile three;
  three.classes[0] = {{"a", 0.0, 0.3}, {"b", 1.2, 1.5}};
  three.classes[4] = {{"a", 0.3, 0.62}};
  three.classes[7] = {{"c", 0.0, 0.1}, {"a", 0.62, 0.9}};
  WDISC_ASSERT(three.NumTokens() == 5);
  WriteClassFile(three, dir + "/three.cls");
  ClassFile back = ReadClassFile(dir + "/three.cls");
  WDISC_ASSERT(back.classes == three.classes);
  WDISC_ASSERT(ReadBytes(dir + "/three.cls").find("\n\nClass 4\n") !=
               std::string::npos);

  ClassFile rounding;
  rounding.classes[2].push_back({"u", 0.0, 0.499999});
  WriteClassFile(rounding, dir + "/round.cls");
  WDISC_ASSERT(ReadBytes(dir + "/round.cls") == "Class 2\nu 0.00 0.50\n");
  WDISC_ASSERT(ReadClassFile(dir + "/round.cls").classes.at(2)[0].offset_s == 0.5);
  WDISC_ASSERT(FormatTime(0.125) == "0.12" || FormatTime(0.125) == "0.13");
  WDISC_ASSERT(FormatTime(1.0) == "1.00");

  WriteText(dir + "/orphan.cls", "u 0.0 0.5\n");
  WDISC_ASSERT(Throws<FormatError>([&] { ReadClassFile(dir + "/orphan.cls"); }));
  WriteText(dir + "/dup.cls", "Class 1\nu 0 1\n\nClass 1\nu 1 2\n");
  WDISC_ASSERT(Throws<FormatError>([&] { ReadClassFile(dir + "/dup.cls"); }));
  WriteText(dir + "/inv.cls", "Class 1\nu 0.5 0.5\n");
  WDISC_ASSERT(Throws<ValidationError>([&] { ReadClassFile(dir + "/inv.cls"); }));

  CorpusManifest m;
  m.entries.push_back({"a", "a.wdf", 2.0});
  WriteText(dir + "/unknown.cls", "Class 0\nzzz 0.0 0.5\n");
  WDISC_ASSERT(
      Throws<ValidationError>([&] { ReadClassFile(dir + "/unknown.cls", &m); }));
  WDISC_ASSERT(ReadClassFile(dir + "/unknown.cls").NumTokens() == 1);
}

static void UnitTestManifest() {
  std::string dir = test::TempDir("corpus-io-man");
  WriteText(dir + "/m.txt",
            "#alignment word words.txt\n"
            "# a comment\n"
            "u1 feats/u1.wdf 1.5\n"
            "u2 /abs/u2.wdf 2.25\n");
  CorpusManifest m = ReadManifest(dir + "/m.txt");
  WDISC_ASSERT(m.entries.size() == 2);
  WDISC_ASSERT(m.entries[0].feature_path == dir + "/feats/u1.wdf");
  WDISC_ASSERT(m.entries[1].feature_path == "/abs/u2.wdf");
  WDISC_ASSERT(m.alignment_paths.at(Tier::kWord) == dir + "/words.txt");
  WDISC_ASSERT(test::ApproxEqual(m.TotalDuration(), 3.75));
  WDISC_ASSERT(m.Find("u2") == &m.entries[1] && m.Find("u3") == nullptr);

  WriteManifest(m, dir + "/m2.txt");
  CorpusManifest m2 = ReadManifest(dir + "/m2.txt");
  WDISC_ASSERT(m2.entries.size() == 2 && m2.entries[0].feature_path ==
                                             m.entries[0].feature_path);

  WriteText(dir + "/dup.txt", "u a.wdf 1\nu b.wdf 1\n");
  WDISC_ASSERT(Throws<ValidationError>([&] { ReadManifest(dir + "/dup.txt"); }));
  WriteText(dir + "/zero.txt", "u a.wdf 0\n");
  WDISC_ASSERT(Throws<ValidationError>([&] { ReadManifest(dir + "/zero.txt"); }));
  WriteText(dir + "/bad.txt", "u a.wdf\n");
  WDISC_ASSERT(Throws<FormatError>([&] { ReadManifest(dir + "/bad.txt"); }));
  WriteText(dir + "/tier.txt", "#alignment letters l.txt\n");
  WDISC_ASSERT(Throws<ParameterError>([&] { ReadManifest(dir + "/tier.txt"); }));
}

static void UnitTestBoundaryFiles() {
  std::string dir = test::TempDir("corpus-io-bnd");
  std::vector<Segmentation> segs = {
      MakeBoundarySet<Segmentation>("a", 10, {3, 7}),
      MakeBoundarySet<Segmentation>("b", 4, {})};
  WriteBoundaryFile(segs, dir + "/h.bnd");
  WDISC_ASSERT(ReadBytes(dir + "/h.bnd") == "a 3 7 10\nb 4\n");
  WDISC_ASSERT(ReadBoundaryFile(dir + "/h.bnd") == segs);

  std::vector<CandidateSet> cands = {
      MakeBoundarySet<CandidateSet>("a", 10, {1, 2, 3})};
  WriteCandidateFile(cands, dir + "/c.txt");
  WDISC_ASSERT(ReadCandidateFile(dir + "/c.txt") == cands);

  WriteText(dir + "/unsorted.bnd", "a 5 3 10\n");
  WDISC_ASSERT(
      Throws<ValidationError>([&] { ReadBoundaryFile(dir + "/unsorted.bnd"); }));
  WriteText(dir + "/dup.bnd", "a 5 10\na 10\n");
  WDISC_ASSERT(Throws<ValidationError>([&] { ReadBoundaryFile(dir + "/dup.bnd"); }));
  WriteText(dir + "/word.bnd", "a 5 x\n");
  WDISC_ASSERT(Throws<FormatError>([&] { ReadBoundaryFile(dir + "/word.bnd"); }));

  WriteText(dir + "/spk.txt", "a s1\nb s2\n");
  auto spk = ReadSpeakerMap(dir + "/spk.txt");
  WDISC_ASSERT(spk.size() == 2 && spk.at("b") == "s2");
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestAlignments();
  UnitTestClassFile();
  UnitTestManifest();
  UnitTestBoundaryFiles();
  std::cout << "Test OK.\n";
  return 0;
}
