// src/eval-metrics.cc

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

#include "wdisc/eval-metrics.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace wdisc {

namespace {

const AlignmentTrack &FindTrack(const AlignmentMap &ref,
                                const std::string &utterance_id,
                                const char *what) {
  auto it = ref.find(utterance_id);
  if (it == ref.end())
    WDISC_THROW(ValidationError) << "no " << what << " alignment for '"
                                 << utterance_id << "'";
  return it->second;
}

bool Within(double a, double b, double tolerance_s) {
  return std::abs(a - b) <= tolerance_s + kToleranceSlack;
}

double Overlap(const AlignmentEntry &e, double onset_s, double offset_s) {
  return std::min(e.end_s, offset_s) - std::max(e.start_s, onset_s);
}

}  // namespace

double FScore(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double RValue(double recall, double over_segmentation) {
  double r = recall / 100.0, os = over_segmentation / 100.0;
  double r1 = std::sqrt((1.0 - r) * (1.0 - r) + os * os);
  double r2 = (-os + r - 1.0) / std::sqrt(2.0);
  return 100.0 * (1.0 - (std::abs(r1) + std::abs(r2)) / 2.0);
}

std::vector<double> ReferenceBoundaries(const AlignmentTrack &track) {
  std::vector<double> out;
  if (track.entries.empty()) return out;
  const double first = track.entries.front().start_s;
  const double last = track.entries.back().end_s;
  for (const AlignmentEntry &e : track.entries) {
    for (double t : {e.start_s, e.end_s})
      if (t > first + kToleranceSlack && t < last - kToleranceSlack)
        out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) {
                          return std::abs(a - b) <= kToleranceSlack;
                        }),
            out.end());
  return out;
}

std::vector<double> HypothesisBoundaries(const BoundarySet &s,
                                         double frame_rate_hz) {
  std::vector<double> out;
  for (int32 b : s.Interior()) out.push_back(b / frame_rate_hz);
  return out;
}

int64_t CountBoundaryHits(std::span<const double> hyp,
                          std::span<const double> ref, double tolerance_s) {
  std::vector<bool> used(ref.size(), false);
  int64_t hits = 0;
  std::size_t lo = 0;  // first ref that can still be within tolerance
  for (double h : hyp) {
    while (lo < ref.size() && ref[lo] < h - tolerance_s - kToleranceSlack)
      lo++;
    std::size_t best = ref.size();
    for (std::size_t j = lo; j < ref.size() && Within(ref[j], h, tolerance_s);
         j++) {
      if (used[j]) continue;
      if (best == ref.size() ||
          std::abs(ref[j] - h) < std::abs(ref[best] - h))
        best = j;
    }
    if (best != ref.size()) {
      used[best] = true;
      hits++;
    }
  }
  return hits;
}

BoundaryScore ScoreBoundaries(const std::vector<Segmentation> &hyp,
                              const AlignmentMap &ref, double tolerance_s,
                              double frame_rate_hz) {
  if (tolerance_s < 0.0)
    WDISC_THROW(ParameterError) << "tolerance must be non-negative";
  BoundaryScore s;
  for (const Segmentation &seg : hyp) {
    const AlignmentTrack &track = FindTrack(ref, seg.utterance_id, "reference");
    std::vector<double> h = HypothesisBoundaries(seg, frame_rate_hz);
    std::vector<double> r = ReferenceBoundaries(track);
    s.n_hyp += static_cast<int64_t>(h.size());
    s.n_ref += static_cast<int64_t>(r.size());
    s.n_hits += CountBoundaryHits(h, r, tolerance_s);
  }
  if (s.n_ref == 0)
    WDISC_THROW(UndefinedMetricError)
        << "reference has no interior boundaries";
  s.precision = s.n_hyp > 0 ? 100.0 * s.n_hits / s.n_hyp : 0.0;
  s.recall = 100.0 * s.n_hits / s.n_ref;
  s.f1 = FScore(s.precision, s.recall);
  s.over_segmentation =
      100.0 * (static_cast<double>(s.n_hyp) / s.n_ref - 1.0);
  s.r_value = RValue(s.recall, s.over_segmentation);
  return s;
}

TokenScore ScoreTokens(const std::vector<Segmentation> &hyp,
                       const AlignmentMap &ref, double tolerance_s,
                       double frame_rate_hz) {
  if (tolerance_s < 0.0)
    WDISC_THROW(ParameterError) << "tolerance must be non-negative";
  TokenScore s;
  for (const Segmentation &seg : hyp) {
    const AlignmentTrack &track = FindTrack(ref, seg.utterance_id, "reference");
    const auto &entries = track.entries;
    std::vector<bool> credited(entries.size(), false);
    s.n_ref_tokens += static_cast<int64_t>(entries.size());
    s.n_hyp_tokens += seg.NumSegments();
    for (int32 i = 0; i < seg.NumSegments(); i++) {
      auto [start, end] = seg.Segment(i);
      double onset = start / frame_rate_hz, offset = end / frame_rate_hz;
      for (std::size_t j = 0; j < entries.size(); j++) {
        if (credited[j]) continue;
        if (Within(entries[j].start_s, onset, tolerance_s) &&
            Within(entries[j].end_s, offset, tolerance_s)) {
          credited[j] = true;
          s.n_hit_tokens++;
          break;
        }
      }
    }
  }
  if (s.n_ref_tokens == 0)
    WDISC_THROW(UndefinedMetricError) << "reference has no tokens";
  s.precision =
      s.n_hyp_tokens > 0 ? 100.0 * s.n_hit_tokens / s.n_hyp_tokens : 0.0;
  s.recall = 100.0 * s.n_hit_tokens / s.n_ref_tokens;
  s.f1 = FScore(s.precision, s.recall);
  return s;
}

int32 EditDistance(std::span<const std::string> a,
                   std::span<const std::string> b) {
  std::vector<int32> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); j++) prev[j] = static_cast<int32>(j);
  for (std::size_t i = 1; i <= a.size(); i++) {
    cur[0] = static_cast<int32>(i);
    for (std::size_t j = 1; j <= b.size(); j++) {
      int32 sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> SplitSymbols(const std::string &s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> TokenTranscription(const AlignmentTrack &phones,
                                            double onset_s, double offset_s) {
  std::vector<std::string> out;
  for (const AlignmentEntry &e : phones.entries) {
    double overlap = Overlap(e, onset_s, offset_s);
    if (overlap <= kToleranceSlack) continue;
    double dur = e.end_s - e.start_s;
    if (overlap >= 0.5 * dur - kToleranceSlack ||
        overlap >= 0.030 - kToleranceSlack) {
      for (std::string &p : SplitSymbols(e.label)) out.push_back(std::move(p));
    }
  }
  return out;
}

double Ned(const ClassFile &classes, const AlignmentMap &phones,
           NedPooling pooling, int64_t *num_pairs) {
  double pooled_sum = 0.0;
  int64_t pooled_pairs = 0;
  double cluster_mean_sum = 0.0;
  int64_t clusters_with_pairs = 0;
  for (const auto &[id, tokens] : classes.classes) {
    if (tokens.size() < 2) continue;
    // Identical transcriptions are grouped so each distinct pair is aligned
    // once and weighted by its multiplicity.
    std::map<std::vector<std::string>, int64_t> counts;
    for (const ClassToken &t : tokens) {
      const AlignmentTrack &track = FindTrack(phones, t.utterance_id, "phone");
      counts[TokenTranscription(track, t.onset_s, t.offset_s)]++;
    }
    std::vector<std::pair<const std::vector<std::string> *, int64_t>> distinct;
    for (const auto &[seq, n] : counts) distinct.push_back({&seq, n});
    double sum = 0.0;
    int64_t pairs = 0;
    for (std::size_t i = 0; i < distinct.size(); i++) {
      int64_t ni = distinct[i].second;
      pairs += ni * (ni - 1) / 2;  // identical pairs contribute 0
      for (std::size_t j = i + 1; j < distinct.size(); j++) {
        const auto &a = *distinct[i].first, &b = *distinct[j].first;
        std::size_t longest = std::max(a.size(), b.size());
        double d = longest == 0 ? 0.0
                                : static_cast<double>(EditDistance(a, b)) /
                                      static_cast<double>(longest);
        int64_t w = ni * distinct[j].second;
        sum += d * static_cast<double>(w);
        pairs += w;
      }
    }
    pooled_sum += sum;
    pooled_pairs += pairs;
    cluster_mean_sum += sum / static_cast<double>(pairs);
    clusters_with_pairs++;
  }
  if (num_pairs != nullptr) *num_pairs = pooled_pairs;
  if (pooled_pairs == 0)
    WDISC_THROW(UndefinedMetricError)
        << "NED undefined: no cluster has two or more tokens";
  if (pooling == NedPooling::kPooled)
    return 100.0 * pooled_sum / static_cast<double>(pooled_pairs);
  return 100.0 * cluster_mean_sum / static_cast<double>(clusters_with_pairs);
}

double Bitrate(const ClassFile &classes, double total_duration_s) {
  if (!(total_duration_s > 0.0))
    WDISC_THROW(ParameterError) << "total duration must be positive";
  const double n = static_cast<double>(classes.NumTokens());
  if (n == 0.0) return 0.0;
  double entropy = 0.0;
  for (const auto &[id, tokens] : classes.classes) {
    if (tokens.empty()) continue;
    double p = static_cast<double>(tokens.size()) / n;
    entropy -= p * std::log2(p);
  }
  return n / total_duration_s * entropy;
}

LexiconScore ScoreLexicon(const ClassFile &classes, const AlignmentMap &phones,
                          double total_duration_s, NedPooling pooling) {
  LexiconScore s;
  s.ned = Ned(classes, phones, pooling, &s.n_pairs);
  s.bitrate_bits_per_s = Bitrate(classes, total_duration_s);
  return s;
}

std::string MaxOverlapLabel(const AlignmentTrack &track, double onset_s,
                            double offset_s) {
  const AlignmentEntry *best = nullptr;
  double best_overlap = 0.0;
  for (const AlignmentEntry &e : track.entries) {
    double o = Overlap(e, onset_s, offset_s);
    if (o > best_overlap) {
      best_overlap = o;
      best = &e;
    }
  }
  return best == nullptr ? "<none>" : best->label;
}

std::vector<ClusterSummary> ClusterReport(
    const ClassFile &classes, const AlignmentMap &words,
    const std::map<std::string, std::string> *speakers, int32 top_n) {
  std::vector<std::pair<int32, const std::vector<ClassToken> *>> order;
  for (const auto &[id, tokens] : classes.classes) order.push_back({id, &tokens});
  std::stable_sort(order.begin(), order.end(), [](const auto &a, const auto &b) {
    return a.second->size() > b.second->size();
  });
  if (top_n >= 0 && order.size() > static_cast<std::size_t>(top_n))
    order.resize(top_n);

  std::vector<ClusterSummary> out;
  for (const auto &[id, tokens] : order) {
    ClusterSummary c;
    c.cluster_id = id;
    c.num_tokens = static_cast<int64_t>(tokens->size());
    std::map<std::string, int64_t> hist;
    std::set<std::string> spk;
    double total = 0.0;
    for (const ClassToken &t : *tokens) {
      total += t.offset_s - t.onset_s;
      const AlignmentTrack &track = FindTrack(words, t.utterance_id, "word");
      hist[MaxOverlapLabel(track, t.onset_s, t.offset_s)]++;
      if (speakers != nullptr) {
        auto it = speakers->find(t.utterance_id);
        if (it != speakers->end()) spk.insert(it->second);
      }
    }
    if (c.num_tokens > 0) c.mean_duration_s = total / c.num_tokens;
    if (speakers != nullptr) c.num_speakers = static_cast<int64_t>(spk.size());
    c.label_histogram.assign(hist.begin(), hist.end());
    std::stable_sort(c.label_histogram.begin(), c.label_histogram.end(),
                     [](const auto &a, const auto &b) {
                       return a.second > b.second;
                     });
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace wdisc
