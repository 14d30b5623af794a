// src/kmeans.cc

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

#include "wdisc/kmeans.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "wdisc/feature-io.h"
#include "wdisc/parallel.h"

namespace wdisc {

namespace {

double WeightOf(std::span<const double> weights, std::size_t i) {
  return weights.empty() ? 1.0 : weights[i];
}

void CheckPoints(const DoubleMatrix &points, std::span<const double> weights,
                 int32 dim) {
  if (points.cols() != dim)
    WDISC_THROW(ShapeError) << "points have dimension " << points.cols()
                            << ", centroids " << dim;
  if (!weights.empty() &&
      weights.size() != static_cast<std::size_t>(points.rows()))
    WDISC_THROW(ShapeError) << "expected " << points.rows() << " weights, got "
                            << weights.size();
}

std::vector<Assignment> AssignAll(const DoubleMatrix &centroids,
                                  const DoubleMatrix &points,
                                  int32 num_workers) {
  std::vector<Assignment> out(points.rows());
  ParallelFor(out.size(), num_workers, [&](std::size_t i) {
    out[i] = Assign(centroids, points.row(i).transpose());
  });
  return out;
}

double Inertia(const DoubleMatrix &centroids, const DoubleMatrix &points,
               const std::vector<int32> &assignment,
               std::span<const double> weights) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); i++)
    total += WeightOf(weights, i) *
             (points.row(i) - centroids.row(assignment[i])).squaredNorm();
  return total;
}

DoubleMatrix RandomInitialCentroids(const DoubleMatrix &points,
                                    int32 num_clusters, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int64_t n = points.rows();
  std::vector<int64_t> all(n), picks;
  std::iota(all.begin(), all.end(), int64_t{0});
  std::sample(all.begin(), all.end(), std::back_inserter(picks),
              std::min<int64_t>(n, num_clusters), rng);
  std::shuffle(picks.begin(), picks.end(), rng);
  // More clusters than points: the surplus duplicates random points and is
  // sorted out by empty-cluster re-seeding.
  std::uniform_int_distribution<int64_t> any(0, n - 1);
  while (static_cast<int64_t>(picks.size()) < num_clusters)
    picks.push_back(any(rng));
  DoubleMatrix c(num_clusters, points.cols());
  for (int32 k = 0; k < num_clusters; k++) c.row(k) = points.row(picks[k]);
  return c;
}

}  // namespace

Assignment Assign(const DoubleMatrix &centroids,
                  const Eigen::Ref<const VectorXd> &point) {
  if (point.size() != centroids.cols())
    WDISC_THROW(ShapeError) << "point has dimension " << point.size()
                            << ", centroids " << centroids.cols();
  if (centroids.rows() == 0)
    WDISC_THROW(ParameterError) << "cluster model has no centroids";
  Assignment best{0, (centroids.row(0).transpose() - point).squaredNorm()};
  for (Eigen::Index k = 1; k < centroids.rows(); k++) {
    double d = (centroids.row(k).transpose() - point).squaredNorm();
    if (d < best.sq_dist) best = {static_cast<int32>(k), d};
  }
  return best;
}

Assignment Assign(const ClusterModel &model,
                  const Eigen::Ref<const VectorXd> &point) {
  return Assign(model.centroids, point);
}

ClusterModel MakeClusterModel(const DoubleMatrix &centroids,
                              const DoubleMatrix &points,
                              std::span<const double> weights,
                              int32 num_workers) {
  CheckPoints(points, weights, static_cast<int32>(centroids.cols()));
  ClusterModel m;
  m.centroids = centroids;
  std::vector<Assignment> a = AssignAll(centroids, points, num_workers);
  m.assignment.resize(a.size());
  for (std::size_t i = 0; i < a.size(); i++) {
    m.assignment[i] = a[i].cluster;
    m.inertia += WeightOf(weights, i) * a[i].sq_dist;
  }
  return m;
}

ClusterModel KMeansStep(const ClusterModel &model, const DoubleMatrix &points,
                        std::span<const double> weights, int32 num_workers) {
  CheckPoints(points, weights, model.Dim());
  const int32 num_clusters = model.NumClusters();
  const Eigen::Index n = points.rows();
  ClusterModel next;
  next.assignment.resize(n);
  std::vector<Assignment> a = AssignAll(model.centroids, points, num_workers);
  for (Eigen::Index i = 0; i < n; i++) next.assignment[i] = a[i].cluster;

  next.centroids = DoubleMatrix::Zero(num_clusters, model.Dim());
  std::vector<double> mass(num_clusters, 0.0);
  std::vector<int64_t> count(num_clusters, 0);
  for (Eigen::Index i = 0; i < n; i++) {
    int32 k = next.assignment[i];
    double w = WeightOf(weights, i);
    next.centroids.row(k) += w * points.row(i);
    mass[k] += w;
    count[k]++;
  }
  std::vector<int32> empty;
  for (int32 k = 0; k < num_clusters; k++) {
    if (count[k] > 0 && mass[k] > 0.0) {
      next.centroids.row(k) /= mass[k];
    } else {
      next.centroids.row(k) = model.centroids.row(k);
      if (count[k] == 0) empty.push_back(k);
    }
  }

  if (!empty.empty()) {
    std::vector<double> dist(n);
    for (Eigen::Index i = 0; i < n; i++)
      dist[i] =
          (points.row(i) - next.centroids.row(next.assignment[i])).squaredNorm();
    std::vector<bool> used(n, false);
    for (int32 k : empty) {
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < n; i++) {
        if (used[i] || count[next.assignment[i]] < 2) continue;
        if (far < 0 || dist[i] > dist[far]) far = i;
      }
      if (far < 0) break;  // every remaining point is alone in its cluster
      used[far] = true;
      count[next.assignment[far]]--;
      next.assignment[far] = k;
      count[k] = 1;
      next.centroids.row(k) = points.row(far);
      dist[far] = 0.0;
    }
  }
  next.inertia = Inertia(next.centroids, points, next.assignment, weights);
  return next;
}

ClusterModel KMeansFit(const DoubleMatrix &points, const KMeansOptions &opts,
                       const DoubleMatrix *init_centroids,
                       std::span<const double> weights) {
  if (opts.num_clusters < 1)
    WDISC_THROW(ParameterError) << "number of clusters must be >= 1";
  if (opts.max_iters < 1)
    WDISC_THROW(ParameterError) << "max_iters must be >= 1";
  if (points.rows() == 0)
    WDISC_THROW(InsufficientDataError) << "no points to cluster";
  if (init_centroids != nullptr &&
      init_centroids->rows() != opts.num_clusters)
    WDISC_THROW(ShapeError) << "initial centroids have "
                            << init_centroids->rows() << " rows, expected "
                            << opts.num_clusters;
  const int32 restarts =
      init_centroids != nullptr ? 1 : std::max(1, opts.num_restarts);
  ClusterModel best;
  for (int32 r = 0; r < restarts; r++) {
    DoubleMatrix c =
        init_centroids != nullptr
            ? *init_centroids
            : RandomInitialCentroids(points, opts.num_clusters,
                                     opts.seed + static_cast<uint64_t>(r));
    ClusterModel m = MakeClusterModel(c, points, weights, opts.num_workers);
    for (int32 it = 0; it < opts.max_iters; it++) {
      ClusterModel next = KMeansStep(m, points, weights, opts.num_workers);
      bool converged = next.assignment == m.assignment &&
                       next.centroids == m.centroids;
      m = std::move(next);
      if (converged) break;
    }
    if (r == 0 || m.inertia < best.inertia) best = std::move(m);
  }
  return best;
}

void WriteCentroids(const DoubleMatrix &centroids, const std::string &path) {
  FeatureMatrix m;
  m.frame_rate_hz = 1.0f;
  m.data = centroids.cast<float>();
  WriteFeatureFile(m, path);
}

DoubleMatrix ReadCentroids(const std::string &path) {
  return ReadFeatureFile(path).data.cast<double>();
}

}  // namespace wdisc
