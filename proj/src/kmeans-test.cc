// src/kmeans-test.cc

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

#include "test-oracles.h"
#include "test-util.h"

namespace wdisc {

using test::ApproxEqual;
using test::Throws;

static DoubleMatrix Points(std::vector<std::vector<double>> rows) {
  DoubleMatrix p(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); r++)
    for (std::size_t c = 0; c < rows[r].size(); c++) p(r, c) = rows[r][c];
  return p;
}

static DoubleMatrix RandomPoints(int32 n, int32 d, std::mt19937 *rng) {
  std::normal_distribution<double> g;
  DoubleMatrix p(n, d);
  for (int32 i = 0; i < n; i++)
    for (int32 j = 0; j < d; j++) p(i, j) = g(*rng) + 4.0 * ((i % 3) == j % 3);
  return p;
}

static void UnitTestAssign() {
  DoubleMatrix c = Points({{0, 0}, {2, 0}, {5, 5}, {1, 1}});
  VectorXd p(2);
  p << 1, 1;
  Assignment a = Assign(c, p);
  WDISC_ASSERT(a.cluster == 3 && a.sq_dist == 0.0);
  p << 1, 0;  // equidistant to 0 and 1
  a = Assign(c, p);
  WDISC_ASSERT(a.cluster == 0 && a.sq_dist == 1.0);

  std::mt19937 rng(1);
  for (int trial = 0; trial < 500; trial++) {
    DoubleMatrix cent = RandomPoints(1 + rng() % 10, 4, &rng);
    // Duplicate centroids exercise the tie rule.
    if (cent.rows() > 2) cent.row(cent.rows() - 1) = cent.row(0);
    std::vector<double> z(4);
    for (double &x : z) x = std::normal_distribution<double>()(rng);
    VectorXd zv = Eigen::Map<VectorXd>(z.data(), 4);
    auto [k, d] = oracle::Nearest(cent, z);
    Assignment got = Assign(cent, zv);
    WDISC_ASSERT(got.cluster == k);
    WDISC_ASSERT(ApproxEqual(got.sq_dist, d, 1e-12 * (1 + d)));
  }
  WDISC_ASSERT(Throws<ShapeError>([&] { Assign(c, VectorXd::Zero(3)); }));
}

static void UnitTestSmallInstances() {
  KMeansOptions o;
  o.num_clusters = 2;
  ClusterModel m = KMeansFit(Points({{0, 0}, {0, 1}}), o);
  WDISC_ASSERT(m.inertia == 0.0);
  WDISC_ASSERT(m.assignment[0] != m.assignment[1]);

  // Four points, two clusters: the optimum pairs the close points.
  DoubleMatrix four = Points({{0, 0}, {0, 2}, {10, 0}, {10, 2}});
  WDISC_ASSERT(oracle::BestInertia(four, 2) == 4.0);
  int reached = 0;
  for (uint64_t seed = 0; seed < 60; seed++) {
    o.seed = seed;
    o.num_restarts = 1;
    ClusterModel r = KMeansFit(four, o);
    WDISC_ASSERT(r.inertia >= 4.0);
    reached += r.inertia == 4.0;
    o.num_restarts = 10;
    ClusterModel best = KMeansFit(four, o);
    WDISC_ASSERT(best.inertia <= r.inertia);
  }
  // Uniform seeding picks a good pair of points in 2/3 of the cases.
  WDISC_ASSERT(reached > 25 && reached < 60);
  o.seed = 0;
  o.num_restarts = 10;
  ClusterModel best = KMeansFit(four, o);
  WDISC_ASSERT(best.inertia == 4.0);
  DoubleMatrix sorted = best.centroids;
  if (sorted(0, 0) > sorted(1, 0)) sorted.row(0).swap(sorted.row(1));
  WDISC_ASSERT(sorted == Points({{0, 1}, {10, 1}}));

  // K = 1: the centroid is the mean.
  std::mt19937 rng(2);
  DoubleMatrix p = RandomPoints(37, 3, &rng);
  o.num_clusters = 1;
  o.num_restarts = 1;
  m = KMeansFit(p, o);
  WDISC_ASSERT((m.centroids.row(0) - p.colwise().mean()).cwiseAbs().maxCoeff() < 1e-12);
}

static void UnitTestMonotone() {
  std::mt19937 rng(3);
  for (int run = 0; run < 100; run++) {
    DoubleMatrix p = RandomPoints(20 + rng() % 80, 2 + rng() % 5, &rng);
    int32 k = 1 + rng() % 8;
    KMeansOptions o;
    o.num_clusters = k;
    o.seed = run;
    DoubleMatrix init = KMeansFit(p, {k, 1, uint64_t(run)}).centroids;
    ClusterModel m = MakeClusterModel(init, p);
    for (int it = 0; it < 20; it++) {
      ClusterModel next = KMeansStep(m, p);
      WDISC_ASSERT(next.inertia <= m.inertia * (1 + 1e-9) + 1e-12);
      m = next;
    }
  }
  // A converged model is a fixpoint.
  DoubleMatrix p = RandomPoints(50, 3, &rng);
  ClusterModel m = KMeansFit(p, {3, 100, 1});
  ClusterModel again = KMeansStep(MakeClusterModel(m.centroids, p), p);
  WDISC_ASSERT(again.centroids == m.centroids && again.assignment == m.assignment);
}

static void UnitTestEmptyCluster() {
  // The far centroid attracts nobody and is re-seeded at the point farthest
  // from its centroid, which moves into the re-seeded cluster.
  DoubleMatrix p = Points({{0}, {1}, {10}});
  ClusterModel m = MakeClusterModel(Points({{0}, {100}}), p);
  WDISC_ASSERT((m.assignment == std::vector<int32>{0, 0, 0}));
  ClusterModel next = KMeansStep(m, p);
  WDISC_ASSERT((next.assignment == std::vector<int32>{0, 0, 1}));
  WDISC_ASSERT(next.centroids(1, 0) == 10.0);
  WDISC_ASSERT(ApproxEqual(next.centroids(0, 0), 11.0 / 3));
  WDISC_ASSERT(next.inertia <= m.inertia);
  ClusterModel after = KMeansStep(next, p);
  WDISC_ASSERT(after.inertia <= next.inertia);
  ClusterModel fixed = KMeansStep(after, p);
  WDISC_ASSERT(ApproxEqual(fixed.inertia, 0.5) && fixed.centroids(0, 0) == 0.5);

  // More clusters than points: every point ends up alone.
  ClusterModel all = KMeansFit(p, {3, 10, 0});
  WDISC_ASSERT(all.inertia == 0.0);
}

static void UnitTestWeightsAndErrors() {
  DoubleMatrix p = Points({{0}, {4}});
  std::vector<double> w = {3, 1};
  ClusterModel m = KMeansFit(p, {1, 5, 0}, nullptr, w);
  WDISC_ASSERT(m.centroids(0, 0) == 1.0);
  WDISC_ASSERT(ApproxEqual(m.inertia, 3 * 1 + 1 * 9));

  DoubleMatrix init = Points({{7}});
  m = KMeansFit(p, {1, 1, 0}, &init);
  WDISC_ASSERT(m.centroids(0, 0) == 2.0);

  WDISC_ASSERT(Throws<ParameterError>([&] { KMeansFit(p, {0, 5, 0}); }));
  WDISC_ASSERT(Throws<ShapeError>([&] { KMeansFit(p, {2, 5, 0}, &init); }));
  WDISC_ASSERT(Throws<InsufficientDataError>([] { KMeansFit(DoubleMatrix(0, 2), {1, 5, 0}); }));
  std::vector<double> bad = {1};
  WDISC_ASSERT(Throws<ShapeError>([&] { KMeansFit(p, {1, 5, 0}, nullptr, bad); }));

  std::string dir = test::TempDir("kmeans");
  WriteCentroids(Points({{0.5, 1}, {2, 3}}), dir + "/c.wdf");
  WDISC_ASSERT(ReadCentroids(dir + "/c.wdf") == Points({{0.5, 1}, {2, 3}}));

  // Determinism and worker independence.
  std::mt19937 rng(5);
  DoubleMatrix q = RandomPoints(200, 4, &rng);
  KMeansOptions o{5, 20, 9, 2, 1};
  ClusterModel a = KMeansFit(q, o);
  o.num_workers = 4;
  ClusterModel b = KMeansFit(q, o);
  WDISC_ASSERT(a.centroids == b.centroids && a.assignment == b.assignment);
}

}  // namespace wdisc

int main() {
  using namespace wdisc;
  UnitTestAssign();
  UnitTestSmallInstances();
  UnitTestMonotone();
  UnitTestEmptyCluster();
  UnitTestWeightsAndErrors();
  std::cout << "Test OK.\n";
  return 0;
}
