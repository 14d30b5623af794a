// src/test-oracles.h

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

#ifndef WDISC_TEST_ORACLES_H_
#define WDISC_TEST_ORACLES_H_

// Slow, deliberately naive reference implementations.  They share no code
// with the library beyond plain data types, so agreement with them is
// evidence that the optimised versions are right.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "wdisc/base.h"
#include "wdisc/feature-io.h"

namespace wdisc {
namespace oracle {

/// 1 - cos between frames i and i + 1, straight from the definition.
inline std::vector<double> Dissimilarity(const FeatureMatrix &m) {
  std::vector<double> out;
  for (int32 t = 0; t + 1 < m.NumFrames(); t++) {
    double dot = 0, a = 0, b = 0;
    for (int32 d = 0; d < m.Dim(); d++) {
      dot += double(m.data(t, d)) * m.data(t + 1, d);
      a += double(m.data(t, d)) * m.data(t, d);
      b += double(m.data(t + 1, d)) * m.data(t + 1, d);
    }
    out.push_back(1.0 - dot / (std::sqrt(a) * std::sqrt(b)));
  }
  return out;
}

/// Window of w values starting (w-1)/2 before i, clipped, averaged.
inline std::vector<double> Smooth(const std::vector<double> &v, int32 w) {
  const int32 n = static_cast<int32>(v.size());
  std::vector<double> out(n);
  for (int32 i = 0; i < n; i++) {
    double sum = 0;
    int32 count = 0;
    for (int32 k = 0; k < w; k++) {
      int32 j = i - (w - 1) / 2 + k;
      if (j >= 0 && j < n) {
        sum += v[j];
        count++;
      }
    }
    out[i] = sum / count;
  }
  return out;
}

/// Peak test: i is the first index of a run of equal values that is
/// bordered on both sides by strictly lower values.
inline bool IsPeak(const std::vector<double> &v, int32 i) {
  const int32 n = static_cast<int32>(v.size());
  if (i <= 0 || i >= n - 1) return false;
  if (!(v[i - 1] < v[i])) return false;
  int32 j = i;
  while (j < n && v[j] == v[i]) j++;
  return j < n && v[j] < v[i];
}

/// Prominence by exhaustive search: on each side, over every strictly
/// higher point h, the deepest dip between the peak and h; the best such
/// "col" (highest dip) is that side's base.  Without a higher point the
/// base is the minimum of the whole side.  The prominence is the peak
/// height minus the higher of the two bases.
inline double Prominence(const std::vector<double> &v, int32 i) {
  const int32 n = static_cast<int32>(v.size());
  auto side_base = [&](int32 step) {
    double best = -std::numeric_limits<double>::infinity();
    bool found_higher = false;
    for (int32 h = i + step; h >= 0 && h < n; h += step) {
      if (v[h] <= v[i]) continue;
      found_higher = true;
      double dip = v[i];
      for (int32 k = i; k != h; k += step) dip = std::min(dip, v[k]);
      best = std::max(best, dip);
    }
    if (found_higher) return best;
    double dip = v[i];
    for (int32 k = i; k >= 0 && k < n; k += step) dip = std::min(dip, v[k]);
    return dip;
  };
  return v[i] - std::max(side_base(-1), side_base(+1));
}

inline std::vector<int32> Peaks(const std::vector<double> &v,
                                double threshold) {
  std::vector<int32> out;
  for (int32 i = 0; i < static_cast<int32>(v.size()); i++)
    if (IsPeak(v, i) && Prominence(v, i) >= threshold) out.push_back(i);
  return out;
}

/// Unit-norm mean of frames [start, end); empty vector when the mean is 0.
inline std::vector<double> MeanEmbedding(const FeatureMatrix &m, int32 start,
                                         int32 end) {
  std::vector<double> mean(m.Dim(), 0.0);
  for (int32 t = start; t < end; t++)
    for (int32 d = 0; d < m.Dim(); d++) mean[d] += m.data(t, d);
  double norm = 0;
  for (double &x : mean) {
    x /= (end - start);
    norm += x * x;
  }
  if (norm == 0) return {};
  for (double &x : mean) x /= std::sqrt(norm);
  return mean;
}

/// Nearest centroid by linear scan; the first index wins ties.
inline std::pair<int32, double> Nearest(const DoubleMatrix &centroids,
                                        const std::vector<double> &z) {
  int32 best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int32 k = 0; k < centroids.rows(); k++) {
    double d = 0;
    for (int32 j = 0; j < centroids.cols(); j++)
      d += (z[j] - centroids(k, j)) * (z[j] - centroids(k, j));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return {best, best_d};
}

struct BestSegmentation {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int32> boundaries;  // ends with T; empty if none feasible
  bool relaxed = false;
};

/// Minimum of sum(len * min_k |z - mu_k|^2) over every subset of the
/// interior candidates.  Segments must be at least min_frames long and cover
/// at most max_span candidate intervals; when no subset satisfies the
/// minimum length it is dropped to one frame.
inline BestSegmentation EnumerateSegmentations(
    const FeatureMatrix &m, const std::vector<int32> &interior,
    const DoubleMatrix &centroids, int32 min_frames, int32 max_span) {
  const int32 t = m.NumFrames();
  const int32 c = static_cast<int32>(interior.size());
  std::vector<int32> positions = {0};
  positions.insert(positions.end(), interior.begin(), interior.end());
  positions.push_back(t);
  auto run = [&](int32 min_len) {
    BestSegmentation best;
    for (uint32 mask = 0; mask < (1u << c); mask++) {
      std::vector<int32> chosen = {0};
      for (int32 k = 0; k < c; k++)
        if (mask & (1u << k)) chosen.push_back(k + 1);
      chosen.push_back(c + 1);
      double cost = 0;
      bool ok = true;
      for (std::size_t s = 1; s < chosen.size() && ok; s++) {
        int32 a = positions[chosen[s - 1]], b = positions[chosen[s]];
        if (b - a < min_len || chosen[s] - chosen[s - 1] > max_span) {
          ok = false;
          break;
        }
        std::vector<double> z = MeanEmbedding(m, a, b);
        if (z.empty()) {
          ok = false;
          break;
        }
        cost += (b - a) * Nearest(centroids, z).second;
      }
      if (!ok) continue;
      // Strictly lower cost wins; equal cost prefers fewer segments.
      if (cost < best.cost ||
          (cost == best.cost && chosen.size() - 1 < best.boundaries.size())) {
        best.cost = cost;
        best.boundaries.clear();
        for (std::size_t s = 1; s < chosen.size(); s++)
          best.boundaries.push_back(positions[chosen[s]]);
      }
    }
    return best;
  };
  BestSegmentation best = run(min_frames);
  if (best.boundaries.empty() && min_frames > 1) {
    best = run(1);
    best.relaxed = true;
  }
  return best;
}

/// Levenshtein distance by plain memoised recursion.
inline int32 EditDistance(const std::vector<std::string> &a,
                          const std::vector<std::string> &b) {
  std::map<std::pair<std::size_t, std::size_t>, int32> memo;
  std::function<int32(std::size_t, std::size_t)> d = [&](std::size_t i,
                                                          std::size_t j) {
    if (i == a.size()) return static_cast<int32>(b.size() - j);
    if (j == b.size()) return static_cast<int32>(a.size() - i);
    auto key = std::make_pair(i, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int32 r = std::min({d(i + 1, j) + 1, d(i, j + 1) + 1,
                        d(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1)});
    memo[key] = r;
    return r;
  };
  return d(0, 0);
}

/// Minimum K-means inertia over every assignment of points to K labels
/// (each label used at least once).
inline double BestInertia(const DoubleMatrix &points, int32 k) {
  const int32 n = static_cast<int32>(points.rows());
  std::vector<int32> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int32> count(k, 0);
    for (int32 l : label) count[l]++;
    if (std::all_of(count.begin(), count.end(), [](int32 x) { return x > 0; })) {
      double inertia = 0;
      for (int32 c = 0; c < k; c++) {
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(points.cols());
        for (int32 i = 0; i < n; i++)
          if (label[i] == c) mean += points.row(i);
        mean /= count[c];
        for (int32 i = 0; i < n; i++)
          if (label[i] == c) inertia += (points.row(i) - mean).squaredNorm();
      }
      best = std::min(best, inertia);
    }
    int32 pos = 0;
    while (pos < n && ++label[pos] == k) label[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

}  // namespace oracle
}  // namespace wdisc

#endif  // WDISC_TEST_ORACLES_H_
