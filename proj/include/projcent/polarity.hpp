#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "projcent/geometry.hpp"
#include "projcent/types.hpp"

namespace projcent {

// Polar of the covector [rho] with respect to the union of hyperplanes dual to
// the lifted points: the point proportional to sum_i lift(p_i) / rho(lift(p_i)).
// It is the point that becomes the centroid of {p_i} when {rho = 0} is sent to
// infinity.
inline Vec polar_point(const std::vector<Vec>& points, const Vec& rho) {
  if (points.empty()) throw DegenerateInput("empty point set");
  const int d = static_cast<int>(points[0].size());
  if (rho.size() != d + 1) throw DegenerateInput("rho must be a (d+1)-covector");
  Vec sum = Vec::Zero(d + 1);
  for (const auto& p : points) {
    const Vec pl = lift(p);
    const double r = rho.dot(pl);
    if (std::abs(r) <= kTauGeo * rho.norm() * pl.norm()) {
      throw OnArrangement("rho vanishes on a lifted point");
    }
    sum += pl / r;
  }
  return dehomogenize(sum);
}

// Brute-force count of the chambers of the dual hyperplane arrangement in which
// the centering condition admits a solution. A chamber admits one exactly when
// it is disjoint from ker of the lifted q, i.e. when rho(lift(q)) keeps a
// constant sign over the chamber. Restricted to d = 2, where the
// general-position chamber count n(n-1)/2 + 1 applies.
struct ChamberCount {
  int admissible = 0;
  int total = 0;
};

inline ChamberCount count_centering_chambers(const std::vector<Vec>& points, const Vec& q,
                                             int n_samples = 200000, std::uint64_t seed = 0) {
  const int d = static_cast<int>(q.size());
  if (d != 2) throw UnsupportedDimension("chamber counting supports d = 2 only");
  const int n = static_cast<int>(points.size());

  // General position: every 4 of the n+1 points affinely independent, i.e. no
  // 3 collinear among points+q and no duplicate points.
  {
    std::vector<Vec> all = points;
    all.push_back(q);
    for (size_t i = 0; i < all.size(); ++i) {
      for (size_t j = i + 1; j < all.size(); ++j) {
        if ((all[i] - all[j]).norm() < 1e-9) throw NotGeneralPosition("duplicate points");
        for (size_t k = j + 1; k < all.size(); ++k) {
          const Vec u = all[j] - all[i];
          const Vec v = all[k] - all[i];
          if (std::abs(u[0] * v[1] - u[1] * v[0]) < 1e-9) {
            throw NotGeneralPosition("three points collinear");
          }
        }
      }
    }
  }

  std::vector<Vec> lifted;
  for (const auto& p : points) lifted.push_back(lift(p));
  const Vec ql = lift(q);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::map<std::vector<int>, int> chambers;  // sign vector -> bitmask of q signs seen

  for (int s = 0; s < n_samples; ++s) {
    Vec rho(3);
    for (int i = 0; i < 3; ++i) rho[i] = gauss(rng);
    rho.normalize();
    std::vector<int> signs(n);
    bool near_wall = false;
    for (int i = 0; i < n; ++i) {
      const double v = rho.dot(lifted[i]);
      if (std::abs(v) < 1e-6) { near_wall = true; break; }
      signs[i] = v > 0.0 ? 1 : -1;
    }
    if (near_wall) continue;
    double rq = rho.dot(ql);
    if (std::abs(rq) < 1e-6) continue;
    if (signs[0] < 0) {  // quotient by the global sign flip
      for (auto& sg : signs) sg = -sg;
      rq = -rq;
    }
    chambers[signs] |= rq > 0.0 ? 1 : 2;
  }

  ChamberCount out;
  out.total = static_cast<int>(chambers.size());
  for (const auto& [sig, qmask] : chambers) {
    // ker of lifted q misses the chamber iff rho(lift(q)) never changed sign.
    if (qmask != 3) ++out.admissible;
  }
  return out;
}

inline int count_centering_classes(const std::vector<Vec>& points, const Vec& q,
                                   int n_samples = 200000, std::uint64_t seed = 0) {
  return count_centering_chambers(points, q, n_samples, seed).admissible;
}

}  // namespace projcent
