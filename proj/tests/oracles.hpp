#pragma once

// Independent reference computations used by the test suite only. Everything
// here deliberately avoids the code paths of the library implementation:
// brute-force enumerations, Monte-Carlo integration, finite differences, and
// direct geometric constructions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "projcent/functionals.hpp"
#include "projcent/geometry.hpp"
#include "projcent/moments.hpp"
#include "projcent/projective.hpp"
#include "projcent/types.hpp"

namespace oracles {

using projcent::Mat;
using projcent::Polytope;
using projcent::SimplicialBody;
using projcent::Vec;

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

inline Vec vec1(double x) { return Vec::Constant(1, x); }

// Random convex polygon containing the origin: evenly spaced jittered angles
// with radii in [radius/2, radius].
inline Polytope random_polygon(std::mt19937_64& rng, int n, double radius = 1.0) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * (i + 0.8 * U(rng)) / n;
    const double r = radius * (0.5 + 0.5 * U(rng));
    pts.push_back(vec2(r * std::cos(a), r * std::sin(a)));
  }
  return projcent::convex_hull(pts);
}

// Random convex 3-polytope containing the origin: jittered octahedron vertices
// plus random sphere points.
inline Polytope random_polytope3(std::mt19937_64& rng, int n, double radius = 1.0) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> G;
  std::vector<Vec> pts;
  for (int i = 0; i < 3; ++i) {
    for (double s : {1.0, -1.0}) {
      Vec v = Vec::Zero(3);
      v[i] = s * radius * (0.6 + 0.4 * U(rng));
      pts.push_back(v);
    }
  }
  for (int i = 6; i < n; ++i) {
    Vec u = vec3(G(rng), G(rng), G(rng));
    u.normalize();
    pts.push_back(Vec(radius * (0.5 + 0.5 * U(rng)) * u));
  }
  return projcent::convex_hull(pts);
}

// O(n^3) planar hull by edge testing: indices of extreme points.
inline std::vector<Vec> brute_hull_vertices_2d(const std::vector<Vec>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) {
    bool extreme = false;
    for (int j = 0; j < n && !extreme; ++j) {
      if (j == i) continue;
      // Edge i-j supporting: all points on one side.
      const Vec e = pts[j] - pts[i];
      bool pos = false, neg = false;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double c = e[0] * (pts[k][1] - pts[i][1]) - e[1] * (pts[k][0] - pts[i][0]);
        if (c > 1e-12) pos = true;
        if (c < -1e-12) neg = true;
      }
      if (!(pos && neg)) extreme = true;
    }
    if (extreme) out.push_back(pts[i]);
  }
  return out;
}

// Polar dual vertex set by brute force over d-subsets of the per-vertex dual
// constraints <-(v_i - c), w> <= 1, feasibility-filtered.
inline std::vector<Vec> brute_polar_vertices(const Polytope& P, const Vec& c) {
  const int d = P.dim;
  const int n = static_cast<int>(P.vertices.size());
  std::vector<Vec> normals;
  for (const auto& v : P.vertices) normals.push_back(Vec(-(v - c)));
  std::vector<Vec> out;
  std::vector<int> subset(d);
  std::function<void(int, int)> rec = [&](int depth, int start) {
    if (depth == d) {
      Mat A(d, d);
      for (int i = 0; i < d; ++i) A.row(i) = normals[subset[i]].transpose();
      Eigen::FullPivLU<Mat> lu(A);
      if (!lu.isInvertible()) return;
      const Vec w = lu.solve(Vec::Ones(d));
      for (const auto& nrm : normals) {
        if (nrm.dot(w) > 1.0 + 1e-9) return;
      }
      for (const auto& prev : out) {
        if ((prev - Vec(c + w)).norm() < 1e-9) return;
      }
      out.push_back(Vec(c + w));
      return;
    }
    for (int i = start; i < n; ++i) {
      subset[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  return out;
}

inline bool same_vertex_set(const std::vector<Vec>& a, const std::vector<Vec>& b,
                            double tol = 1e-8) {
  if (a.size() != b.size()) return false;
  for (const auto& u : a) {
    bool found = false;
    for (const auto& v : b) {
      if ((u - v).norm() < tol) { found = true; break; }
    }
    if (!found) return false;
  }
  return true;
}

// Divergence-theorem volume: vol = (1/d) sum_f offset_f * measure(facet_f).
inline double divergence_volume(const Polytope& P) {
  const int d = P.dim;
  double vol = 0.0;
  for (const auto& f : P.facets) {
    double measure = 0.0;
    if (d == 1) {
      measure = 1.0;
    } else if (d == 2) {
      measure = (P.vertices[f.vertex_ids[0]] - P.vertices[f.vertex_ids[1]]).norm();
    } else if (d == 3) {
      // Area of the planar facet polygon: project to an in-plane basis.
      std::vector<Vec> fv;
      Vec mean = Vec::Zero(3);
      for (int id : f.vertex_ids) mean += P.vertices[id];
      mean /= static_cast<double>(f.vertex_ids.size());
      Mat basis(3, 2);
      {
        Eigen::JacobiSVD<Mat> svd(f.normal.transpose(), Eigen::ComputeFullV);
        basis = svd.matrixV().rightCols(2);
      }
      std::vector<Vec> proj;
      for (int id : f.vertex_ids) proj.push_back(basis.transpose() * Vec(P.vertices[id] - mean));
      // Order by angle and apply the shoelace formula.
      std::sort(proj.begin(), proj.end(), [](const Vec& a, const Vec& b) {
        return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
      });
      for (size_t i = 0; i < proj.size(); ++i) {
        const Vec& a = proj[i];
        const Vec& b = proj[(i + 1) % proj.size()];
        measure += 0.5 * (a[0] * b[1] - a[1] * b[0]);
      }
      measure = std::abs(measure);
    }
    vol += f.offset * measure;
  }
  return vol / d;
}

// Membership in a union of simplices via barycentric coordinates.
inline bool in_body(const SimplicialBody& K, const Vec& x, double tol = 1e-12) {
  const int d = K.dim;
  for (const auto& s : K.simplices) {
    Mat A(d, d);
    for (int j = 0; j < d; ++j) A.col(j) = s.vertices[j + 1] - s.vertices[0];
    const Vec lam = A.fullPivLu().solve(Vec(x - s.vertices[0]));
    double sum = 0.0;
    bool ok = true;
    for (int j = 0; j < d; ++j) {
      if (lam[j] < -tol) { ok = false; break; }
      sum += lam[j];
    }
    if (ok && sum <= 1.0 + tol) return true;
  }
  return false;
}

struct McMoments {
  double volume = 0.0;
  Vec centroid;
  Vec centroid_se;  // per-coordinate standard error of the centroid estimate
};

// Monte-Carlo moments of phi_y(K): uniform samples in the bounding box of K,
// weighted by the Jacobian (1+<x,y>)^-(d+1) and pushed through the map.
inline McMoments mc_mapped_moments(const SimplicialBody& K, const Vec& y, int n_samples,
                                   std::uint64_t seed) {
  const int d = K.dim;
  Vec lo = Vec::Constant(d, std::numeric_limits<double>::infinity());
  Vec hi = -lo;
  for (const auto& s : K.simplices) {
    for (const auto& v : s.vertices) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  }
  double box_vol = 1.0;
  for (int i = 0; i < d; ++i) box_vol *= hi[i] - lo[i];

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double sw = 0.0, sww = 0.0;
  Vec swz = Vec::Zero(d), swzz = Vec::Zero(d), swzw = Vec::Zero(d);
  for (int k = 0; k < n_samples; ++k) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * U(rng);
    if (!in_body(K, x)) continue;
    const double den = 1.0 + x.dot(y);
    const double w = std::pow(den, -(d + 1));
    const Vec z = x / den;
    sw += w;
    sww += w * w;
    swz += w * z;
    for (int i = 0; i < d; ++i) {
      swzz[i] += w * z[i] * w * z[i];
      swzw[i] += w * z[i] * w;
    }
  }
  McMoments out;
  const double N = n_samples;
  out.volume = box_vol * sw / N;
  out.centroid = swz / sw;
  out.centroid_se = Vec::Zero(d);
  // Delta-method variance of the ratio estimator A_i / B.
  const double B = sw / N, varB = sww / N - B * B;
  for (int i = 0; i < d; ++i) {
    const double A = swz[i] / N;
    const double varA = swzz[i] / N - A * A;
    const double covAB = swzw[i] / N - A * B;
    const double r = A / B;
    const double var = (varA - 2.0 * r * covAB + r * r * varB) / (B * B);
    out.centroid_se[i] = std::sqrt(std::max(0.0, var / N));
  }
  return out;
}

inline Vec fd_gradient(const projcent::Functional& f, const Vec& y, double h = 1e-6) {
  const int d = f.dim();
  Vec g(d);
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = h;
    g[i] = (f.value(y + e) - f.value(y - e)) / (2.0 * h);
  }
  return g;
}

inline Mat fd_hessian(const projcent::Functional& f, const Vec& y, double h = 1e-6) {
  const int d = f.dim();
  Mat H(d, d);
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = h;
    H.col(i) = (f.gradient(y + e) - f.gradient(y - e)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

// ---------------------------------------------------------------------------
// Direct support-pair Hilbert width oracle (d = 2).

// Hilbert distance between two lines (each given by <n,x> = b, not meeting
// int K) with respect to the Hilbert geometry dual to K: half the log of the
// cross-ratio of the pencil through their intersection, cut by the two support
// lines of K from that pencil.
inline double line_pair_distance(const Polytope& K, const Vec& n1, double b1, const Vec& n2,
                                 double b2) {
  Mat A(2, 2);
  A.row(0) = n1.transpose();
  A.row(1) = n2.transpose();
  Vec rhs(2);
  rhs << b1, b2;
  const double det = A.determinant();
  Vec c = Vec::Zero(2);
  for (const auto& v : K.vertices) c += v;
  c /= static_cast<double>(K.vertices.size());

  // Parallel support pair: the pencil degenerates to parallels, and the
  // cross-ratio reduces to scalar offsets along the common normal.
  if (std::abs(det) < 1e-8 * n1.norm() * n2.norm()) {
    Vec m2 = n2;
    double c2 = b2;
    if (n1.dot(n2) < 0.0) { m2 = -n2; c2 = -b2; }
    double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
    for (const auto& v : K.vertices) {
      const double s = n1.dot(v);
      hmin = std::min(hmin, s);
      hmax = std::max(hmax, s);
    }
    return 0.5 * std::abs(std::log(std::abs(projcent::cross_ratio(b1, c2, hmin, hmax))));
  }
  const Vec apex = A.fullPivLu().solve(rhs);

  // Tangent lines from the apex to K: extreme angular directions of the
  // vertices as seen from the apex.
  const double base = std::atan2(c[1] - apex[1], c[0] - apex[0]);
  double amin = 0.0, amax = 0.0;
  Vec vmin, vmax;
  bool first = true;
  for (const auto& v : K.vertices) {
    double a = std::atan2(v[1] - apex[1], v[0] - apex[0]) - base;
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a < -M_PI) a += 2.0 * M_PI;
    if (first || a < amin) { amin = a; vmin = v; }
    if (first || a > amax) { amax = a; vmax = v; }
    first = false;
  }

  // Cut the pencil by a transversal through c orthogonal to the apex ray and
  // take the cross-ratio of the four intersection parameters.
  Vec dir = c - apex;
  Vec t(2);
  t << -dir[1], dir[0];
  t.normalize();
  auto cut = [&](const Vec& through) -> double {
    // Line through apex and `through`, intersected with {c + s t}.
    const Vec u = through - apex;
    // apex + r u = c + s t  ->  solve 2x2.
    Mat M(2, 2);
    M.col(0) = u;
    M.col(1) = -t;
    const Vec sol = M.fullPivLu().solve(Vec(c - apex));
    return sol[1];
  };
  // Points on the input lines other than the apex: pick the closest point of
  // each line to c.
  auto line_point = [&](const Vec& nn, double bb) {
    return Vec(c + (bb - nn.dot(c)) * nn / nn.squaredNorm());
  };
  const double p = cut(line_point(n1, b1));
  const double q = cut(line_point(n2, b2));
  const double a = cut(vmin);
  const double b = cut(vmax);
  return 0.5 * std::abs(std::log(std::abs(projcent::cross_ratio(p, q, a, b))));
}

// Width of K2 in K1 by direct maximization over pairs of edge lines of K1,
// measured against K2 (dual to the diameter-of-the-dual identity).
inline double support_pair_width(const Polytope& K1, const Polytope& K2) {
  double best = 0.0;
  for (size_t i = 0; i < K1.facets.size(); ++i) {
    for (size_t j = i + 1; j < K1.facets.size(); ++j) {
      const double v = line_pair_distance(K2, K1.facets[i].normal, K1.facets[i].offset,
                                          K1.facets[j].normal, K1.facets[j].offset);
      if (std::isfinite(v)) best = std::max(best, v);
    }
  }
  return best;
}

}  // namespace oracles
