// src/corpus-io.cc

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
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace wdisc {

namespace {

std::ifstream OpenForRead(const std::string &path, const char *what) {
  std::ifstream is(path);
  if (!is) WDISC_THROW(IoError) << "cannot open " << what << " " << path;
  return is;
}

std::ofstream OpenForWrite(const std::string &path, const char *what) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) WDISC_THROW(IoError) << "cannot open " << what << " " << path
                                << " for writing";
  return os;
}

void CheckWritten(const std::ofstream &os, const std::string &path) {
  if (!os) WDISC_THROW(IoError) << "error writing " << path;
}

std::vector<std::string> SplitWhitespace(const std::string &line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool IsBlank(const std::string &line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

double ParseDouble(const std::string &s, const std::string &path, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    WDISC_THROW(FormatError) << path << ":" << line << ": bad number '" << s
                             << "'";
  return v;
}

int32 ParseInt(const std::string &s, const std::string &path, int line) {
  int32 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    WDISC_THROW(FormatError) << path << ":" << line << ": bad integer '" << s
                             << "'";
  return v;
}

// Tolerance for comparing times that went through 2-decimal text.
constexpr double kTimeEps = 1e-9;

template <class Set>
void WriteBoundarySets(const std::vector<Set> &sets, const std::string &path) {
  std::ofstream os = OpenForWrite(path, "boundary file");
  for (const Set &s : sets) {
    ValidateBoundarySet(s);
    os << s.utterance_id;
    for (int32 b : s.boundaries) os << ' ' << b;
    os << '\n';
  }
  CheckWritten(os, path);
}

template <class Set>
std::vector<Set> ReadBoundarySets(const std::string &path) {
  std::ifstream is = OpenForRead(path, "boundary file");
  std::vector<Set> out;
  std::set<std::string> seen;
  std::string line;
  for (int n = 1; std::getline(is, line); n++) {
    if (IsBlank(line) || line[0] == '#') continue;
    std::vector<std::string> toks = SplitWhitespace(line);
    if (toks.size() < 2)
      WDISC_THROW(FormatError) << path << ":" << n
                               << ": expected '<utt> <b1> ... <T>'";
    if (!seen.insert(toks[0]).second)
      WDISC_THROW(ValidationError) << path << ":" << n
                                   << ": duplicate utterance " << toks[0];
    Set s;
    s.utterance_id = toks[0];
    for (std::size_t i = 1; i < toks.size(); i++)
      s.boundaries.push_back(ParseInt(toks[i], path, n));
    s.num_frames = s.boundaries.back();
    ValidateBoundarySet(s);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

Tier ParseTier(const std::string &name) {
  if (name == "word") return Tier::kWord;
  if (name == "phone") return Tier::kPhone;
  if (name == "syllable") return Tier::kSyllable;
  WDISC_THROW(ParameterError) << "unknown tier '" << name
                              << "' (expected word|phone|syllable)";
}

std::string TierName(Tier tier) {
  switch (tier) {
    case Tier::kWord: return "word";
    case Tier::kPhone: return "phone";
    case Tier::kSyllable: return "syllable";
  }
  return "word";
}

std::vector<AlignmentTrack> ReadAlignments(const std::string &path,
                                           Tier tier) {
  std::ifstream is = OpenForRead(path, "alignment file");
  std::vector<AlignmentTrack> tracks;
  std::map<std::string, std::size_t> index;
  std::string line;
  for (int n = 1; std::getline(is, line); n++) {
    if (IsBlank(line) || line[0] == '#') continue;
    std::vector<std::string> toks = SplitWhitespace(line);
    if (toks.size() < 4)
      WDISC_THROW(FormatError) << path << ":" << n
                               << ": expected '<utt> <start> <end> <label>'";
    if (tier != Tier::kPhone && toks.size() > 4)
      WDISC_THROW(FormatError) << path << ":" << n << ": " << TierName(tier)
                               << " labels must be a single token";
    AlignmentEntry e;
    e.start_s = ParseDouble(toks[1], path, n);
    e.end_s = ParseDouble(toks[2], path, n);
    if (e.end_s <= e.start_s)
      WDISC_THROW(ValidationError) << path << ":" << n
                                   << ": interval end <= start";
    e.label = toks[3];
    for (std::size_t i = 4; i < toks.size(); i++) e.label += " " + toks[i];
    auto [it, inserted] = index.try_emplace(toks[0], tracks.size());
    if (inserted) {
      AlignmentTrack t;
      t.utterance_id = toks[0];
      t.tier = tier;
      tracks.push_back(std::move(t));
    }
    tracks[it->second].entries.push_back(std::move(e));
  }
  for (AlignmentTrack &t : tracks) {
    std::stable_sort(t.entries.begin(), t.entries.end(),
                     [](const AlignmentEntry &a, const AlignmentEntry &b) {
                       return a.start_s < b.start_s;
                     });
    for (std::size_t i = 1; i < t.entries.size(); i++) {
      if (t.entries[i].start_s < t.entries[i - 1].end_s - kTimeEps)
        WDISC_THROW(ValidationError)
            << path << ": overlapping intervals in '" << t.utterance_id
            << "' at " << t.entries[i].start_s << "s";
    }
  }
  return tracks;
}

AlignmentMap ReadAlignmentMap(const std::string &path, Tier tier) {
  AlignmentMap out;
  for (AlignmentTrack &t : ReadAlignments(path, tier)) {
    std::string id = t.utterance_id;
    out.emplace(std::move(id), std::move(t));
  }
  return out;
}

void WriteAlignments(const std::vector<AlignmentTrack> &tracks,
                     const std::string &path) {
  std::ofstream os = OpenForWrite(path, "alignment file");
  for (const AlignmentTrack &t : tracks)
    for (const AlignmentEntry &e : t.entries)
      os << t.utterance_id << ' ' << FormatTime(e.start_s) << ' '
         << FormatTime(e.end_s) << ' ' << e.label << '\n';
  CheckWritten(os, path);
}

const ManifestEntry *CorpusManifest::Find(const std::string &id) const {
  for (const ManifestEntry &e : entries)
    if (e.utterance_id == id) return &e;
  return nullptr;
}

double CorpusManifest::TotalDuration() const {
  double total = 0.0;
  for (const ManifestEntry &e : entries) total += e.duration_s;
  return total;
}

CorpusManifest ReadManifest(const std::string &path) {
  std::ifstream is = OpenForRead(path, "manifest");
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string &p) {
    std::filesystem::path fp(p);
    return (fp.is_absolute() || dir.empty() ? fp : dir / fp).string();
  };
  CorpusManifest m;
  std::set<std::string> seen;
  std::string line;
  for (int n = 1; std::getline(is, line); n++) {
    if (IsBlank(line)) continue;
    std::vector<std::string> toks = SplitWhitespace(line);
    if (toks[0] == "#alignment") {
      if (toks.size() != 3)
        WDISC_THROW(FormatError) << path << ":" << n
                                 << ": expected '#alignment <tier> <path>'";
      m.alignment_paths[ParseTier(toks[1])] = resolve(toks[2]);
      continue;
    }
    if (toks[0][0] == '#') continue;
    if (toks.size() != 3)
      WDISC_THROW(FormatError) << path << ":" << n
                               << ": expected '<utt> <feature_path> <duration_s>'";
    ManifestEntry e;
    e.utterance_id = toks[0];
    e.feature_path = resolve(toks[1]);
    e.duration_s = ParseDouble(toks[2], path, n);
    if (!(e.duration_s > 0.0))
      WDISC_THROW(ValidationError) << path << ":" << n
                                   << ": duration must be positive";
    if (!seen.insert(e.utterance_id).second)
      WDISC_THROW(ValidationError) << path << ":" << n
                                   << ": duplicate utterance " << e.utterance_id;
    m.entries.push_back(std::move(e));
  }
  return m;
}

void WriteManifest(const CorpusManifest &m, const std::string &path) {
  std::ofstream os = OpenForWrite(path, "manifest");
  for (const auto &[tier, p] : m.alignment_paths)
    os << "#alignment " << TierName(tier) << ' ' << p << '\n';
  char buf[64];
  for (const ManifestEntry &e : m.entries) {
    std::snprintf(buf, sizeof(buf), "%.6f", e.duration_s);
    os << e.utterance_id << ' ' << e.feature_path << ' ' << buf << '\n';
  }
  CheckWritten(os, path);
}

std::size_t ClassFile::NumTokens() const {
  std::size_t n = 0;
  for (const auto &[id, tokens] : classes) n += tokens.size();
  return n;
}

std::string FormatTime(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", seconds);
  return buf;
}

void WriteClassFile(const ClassFile &classes, const std::string &path) {
  std::ofstream os = OpenForWrite(path, "class file");
  bool first = true;
  for (const auto &[id, tokens] : classes.classes) {
    if (!first) os << '\n';
    first = false;
    os << "Class " << id << '\n';
    for (const ClassToken &t : tokens) {
      if (!(t.onset_s < t.offset_s))
        WDISC_THROW(ValidationError) << "class " << id << " token in '"
                                     << t.utterance_id
                                     << "' has onset >= offset";
      os << t.utterance_id << ' ' << FormatTime(t.onset_s) << ' '
         << FormatTime(t.offset_s) << '\n';
    }
  }
  CheckWritten(os, path);
}

ClassFile ReadClassFile(const std::string &path,
                        const CorpusManifest *manifest) {
  std::ifstream is = OpenForRead(path, "class file");
  ClassFile out;
  std::vector<ClassToken> *current = nullptr;
  std::string line;
  for (int n = 1; std::getline(is, line); n++) {
    if (IsBlank(line)) continue;
    std::vector<std::string> toks = SplitWhitespace(line);
    if (toks[0] == "Class") {
      if (toks.size() != 2)
        WDISC_THROW(FormatError) << path << ":" << n
                                 << ": expected 'Class <int>'";
      int32 id = ParseInt(toks[1], path, n);
      if (out.classes.count(id))
        WDISC_THROW(FormatError) << path << ":" << n << ": class " << id
                                 << " appears twice";
      current = &out.classes[id];
      continue;
    }
    if (current == nullptr)
      WDISC_THROW(FormatError) << path << ":" << n
                               << ": token line before any 'Class' header";
    if (toks.size() != 3)
      WDISC_THROW(FormatError) << path << ":" << n
                               << ": expected '<utt> <onset> <offset>'";
    ClassToken t;
    t.utterance_id = toks[0];
    t.onset_s = ParseDouble(toks[1], path, n);
    t.offset_s = ParseDouble(toks[2], path, n);
    if (!(t.onset_s < t.offset_s))
      WDISC_THROW(ValidationError) << path << ":" << n
                                   << ": onset must precede offset";
    if (manifest != nullptr && manifest->Find(t.utterance_id) == nullptr)
      WDISC_THROW(ValidationError) << path << ":" << n << ": utterance '"
                                   << t.utterance_id << "' not in manifest";
    current->push_back(std::move(t));
  }
  return out;
}

void WriteBoundaryFile(const std::vector<Segmentation> &segs,
                       const std::string &path) {
  WriteBoundarySets(segs, path);
}

std::vector<Segmentation> ReadBoundaryFile(const std::string &path) {
  return ReadBoundarySets<Segmentation>(path);
}

void WriteCandidateFile(const std::vector<CandidateSet> &cands,
                        const std::string &path) {
  WriteBoundarySets(cands, path);
}

std::vector<CandidateSet> ReadCandidateFile(const std::string &path) {
  return ReadBoundarySets<CandidateSet>(path);
}

std::map<std::string, std::string> ReadSpeakerMap(const std::string &path) {
  std::ifstream is = OpenForRead(path, "speaker map");
  std::map<std::string, std::string> out;
  std::string line;
  for (int n = 1; std::getline(is, line); n++) {
    if (IsBlank(line) || line[0] == '#') continue;
    std::vector<std::string> toks = SplitWhitespace(line);
    if (toks.size() != 2)
      WDISC_THROW(FormatError) << path << ":" << n
                               << ": expected '<utt> <speaker>'";
    out[toks[0]] = toks[1];
  }
  return out;
}

}  // namespace wdisc
