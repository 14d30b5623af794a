// include/wdisc/kmeans.h

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

#ifndef WDISC_KMEANS_H_
#define WDISC_KMEANS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wdisc/base.h"

namespace wdisc {

/// K centroids plus the assignment of the points they were fitted on.
struct ClusterModel {
  DoubleMatrix centroids;       // K x M
  std::vector<int32> assignment;
  /// Sum over points of weight * squared distance to the assigned centroid.
  double inertia = 0.0;

  int32 NumClusters() const { return static_cast<int32>(centroids.rows()); }
  int32 Dim() const { return static_cast<int32>(centroids.cols()); }
};

struct KMeansOptions {
  int32 num_clusters = 1;
  int32 max_iters = 10;
  uint64_t seed = 0;
  /// Independent initialisations; the lowest-inertia fit is kept.  Ignored
  /// when initial centroids are supplied.
  int32 num_restarts = 1;
  int32 num_workers = 1;
};

struct Assignment {
  int32 cluster = 0;
  double sq_dist = 0.0;
};

/// Nearest centroid by squared Euclidean distance, ties to the lowest index.
Assignment Assign(const DoubleMatrix &centroids,
                  const Eigen::Ref<const VectorXd> &point);
Assignment Assign(const ClusterModel &model,
                  const Eigen::Ref<const VectorXd> &point);

/// Builds a model from given centroids: nearest-centroid assignment of every
/// point and the resulting inertia.  `weights` is empty or one per point.
ClusterModel MakeClusterModel(const DoubleMatrix &centroids,
                              const DoubleMatrix &points,
                              std::span<const double> weights = {},
                              int32 num_workers = 1);

/// One Lloyd iteration: reassign every point to its nearest centroid, move
/// each centroid to the (weighted) mean of its points, then re-seed every
/// cluster left empty at the point farthest from its centroid (that point
/// moves into the re-seeded cluster).  The returned inertia never exceeds
/// the input model's.
ClusterModel KMeansStep(const ClusterModel &model, const DoubleMatrix &points,
                        std::span<const double> weights = {},
                        int32 num_workers = 1);

/// Lloyd's algorithm until the assignment stops changing or max_iters.
/// Without `init_centroids`, each restart seeds the centroids with
/// num_clusters distinct points chosen uniformly at random.
ClusterModel KMeansFit(const DoubleMatrix &points, const KMeansOptions &opts,
                       const DoubleMatrix *init_centroids = nullptr,
                       std::span<const double> weights = {});

/// Centroids persist as a feature file with frame rate 1.
void WriteCentroids(const DoubleMatrix &centroids, const std::string &path);
DoubleMatrix ReadCentroids(const std::string &path);

}  // namespace wdisc

#endif  // WDISC_KMEANS_H_
