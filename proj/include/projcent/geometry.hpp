#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "projcent/types.hpp"

namespace projcent {

struct Simplex {
  std::vector<Vec> vertices;  // d+1 vertices in R^d

  int dim() const { return static_cast<int>(vertices.front().size()); }

  double signed_volume() const {
    const int d = dim();
    Mat edges(d, d);
    for (int j = 0; j < d; ++j) edges.col(j) = vertices[j + 1] - vertices[0];
    double factorial = 1.0;
    for (int k = 2; k <= d; ++k) factorial *= k;
    return edges.determinant() / factorial;
  }

  double volume() const { return std::abs(signed_volume()); }
};

struct Facet {
  Vec normal;    // unit length, inequality <normal,x> <= offset
  double offset = 0.0;
  std::vector<int> vertex_ids;  // sorted indices into Polytope::vertices
};

struct Polytope {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<Facet> facets;
  std::vector<Simplex> triangulation;
  std::vector<int> vertex_source;  // index of the input point each vertex came from

  bool contains(const Vec& x, double tol = kTauGeo) const {
    for (const auto& f : facets) {
      if (f.normal.dot(x) > f.offset + tol) return false;
    }
    return true;
  }

  // Positive inside, negative outside.
  double slack(const Vec& x) const {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& f : facets) s = std::min(s, f.offset - f.normal.dot(x));
    return s;
  }
};

struct SimplicialBody {
  int dim = 0;
  std::vector<Simplex> simplices;

  double volume() const {
    double v = 0.0;
    for (const auto& s : simplices) v += s.volume();
    return v;
  }
};

namespace detail {

inline double coordinate_scale(const std::vector<Vec>& points) {
  double s = 1.0;
  for (const auto& p : points) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

inline int affine_rank(const std::vector<Vec>& points, double tol) {
  if (points.size() < 2) return 0;
  Mat diffs(points[0].size(), points.size() - 1);
  for (size_t i = 1; i < points.size(); ++i) diffs.col(i - 1) = points[i] - points[0];
  Eigen::JacobiSVD<Mat> svd(diffs);
  int rank = 0;
  const double cutoff = tol * std::max(1.0, svd.singularValues().size() > 0 ? svd.singularValues()[0] : 1.0);
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > cutoff) ++rank;
  }
  return rank;
}

// Unit normal of the hyperplane through the given points, or empty on degeneracy.
inline Vec hyperplane_normal(const std::vector<Vec>& points, const std::vector<int>& subset,
                             double tol) {
  const int d = static_cast<int>(points[0].size());
  Mat diffs(d - 1, d);
  for (int i = 1; i < d; ++i) diffs.row(i - 1) = (points[subset[i]] - points[subset[0]]).transpose();
  Eigen::JacobiSVD<Mat> svd(diffs, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (d >= 2 && sv[d - 2] <= tol * std::max(1.0, sv[0])) return Vec();  // degenerate subset
  Vec normal = svd.matrixV().col(d - 1);
  return normal;
}

inline std::vector<int> monotone_chain(const std::vector<Vec>& pts) {
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (pts[i][0] != pts[j][0]) return pts[i][0] < pts[j][0];
    return pts[i][1] < pts[j][1];
  });
  auto cross = [&](int o, int a, int b) {
    return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
           (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
  };
  std::vector<int> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const size_t start = hull.size() + 1;
    for (int idx : order) {
      while (hull.size() >= start &&
             cross(hull[hull.size() - 2], hull[hull.size() - 1], idx) <= 0) {
        hull.pop_back();
      }
      hull.push_back(idx);
    }
    hull.pop_back();
    std::reverse(order.begin(), order.end());
  }
  return hull;  // counterclockwise, no repetition
}

}  // namespace detail

Polytope convex_hull(const std::vector<Vec>& input_points);

namespace detail {

// Index tuples of the coning triangulation of a hull, referring to hull.vertices.
inline std::vector<std::vector<int>> triangulate_hull(const Polytope& hull) {
  const int d = hull.dim;
  if (d == 1) return {{0, 1}};
  std::vector<std::vector<int>> out;
  for (const auto& facet : hull.facets) {
    if (std::find(facet.vertex_ids.begin(), facet.vertex_ids.end(), 0) != facet.vertex_ids.end()) {
      continue;  // cone apex lies on this facet
    }
    // Project the facet into d-1 coordinates and triangulate recursively.
    std::vector<Vec> fpts;
    Vec mean = Vec::Zero(d);
    for (int id : facet.vertex_ids) mean += hull.vertices[id];
    mean /= static_cast<double>(facet.vertex_ids.size());
    Mat centered(d, facet.vertex_ids.size());
    for (size_t j = 0; j < facet.vertex_ids.size(); ++j) {
      centered.col(j) = hull.vertices[facet.vertex_ids[j]] - mean;
    }
    Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeFullU);
    Mat basis = svd.matrixU().leftCols(d - 1);
    for (size_t j = 0; j < facet.vertex_ids.size(); ++j) {
      fpts.push_back(basis.transpose() * centered.col(j));
    }
    Polytope sub = convex_hull(fpts);
    for (const auto& tri : triangulate_hull(sub)) {
      std::vector<int> ids{0};
      for (int t : tri) ids.push_back(facet.vertex_ids[sub.vertex_source[t]]);
      out.push_back(ids);
    }
  }
  return out;
}

}  // namespace detail

inline Polytope convex_hull(const std::vector<Vec>& input_points) {
  if (input_points.empty()) throw DegenerateInput("empty point set");
  const int d = static_cast<int>(input_points[0].size());
  const double scale = detail::coordinate_scale(input_points);
  const double tol = kTauGeo * scale;

  // Drop near-duplicates, keeping first occurrences.
  std::vector<Vec> pts;
  std::vector<int> source;
  for (size_t i = 0; i < input_points.size(); ++i) {
    bool dup = false;
    for (const auto& q : pts) {
      if ((input_points[i] - q).cwiseAbs().maxCoeff() <= tol) { dup = true; break; }
    }
    if (!dup) { pts.push_back(input_points[i]); source.push_back(static_cast<int>(i)); }
  }
  const int n = static_cast<int>(pts.size());
  if (detail::affine_rank(pts, kTauGeo) < d) {
    throw DegenerateInput("points do not affinely span R^d");
  }

  Polytope hull;
  hull.dim = d;

  if (d == 1) {
    int lo = 0, hi = 0;
    for (int i = 1; i < n; ++i) {
      if (pts[i][0] < pts[lo][0]) lo = i;
      if (pts[i][0] > pts[hi][0]) hi = i;
    }
    hull.vertices = {pts[lo], pts[hi]};
    hull.vertex_source = {source[lo], source[hi]};
    Facet left, right;
    left.normal = Vec::Constant(1, -1.0);
    left.offset = -pts[lo][0];
    left.vertex_ids = {0};
    right.normal = Vec::Constant(1, 1.0);
    right.offset = pts[hi][0];
    right.vertex_ids = {1};
    hull.facets = {left, right};
    hull.triangulation = {Simplex{{pts[lo], pts[hi]}}};
    return hull;
  }

  std::vector<int> vertex_ids_in_pts;  // hull vertices as indices into pts
  std::set<std::vector<int>> facet_support_sets;

  if (d == 2 && n > 64) {
    std::vector<int> chain = detail::monotone_chain(pts);
    vertex_ids_in_pts = chain;
    const int m = static_cast<int>(chain.size());
    for (int i = 0; i < m; ++i) {
      std::vector<int> supp{i, (i + 1) % m};
      std::sort(supp.begin(), supp.end());
      facet_support_sets.insert(supp);  // already in hull-vertex indexing
    }
    for (int id : chain) hull.vertices.push_back(pts[id]);
    for (int id : chain) hull.vertex_source.push_back(source[id]);
    for (const auto& supp : facet_support_sets) {
      Facet f;
      Vec e = hull.vertices[supp[1]] - hull.vertices[supp[0]];
      Vec normal(2);
      normal << e[1], -e[0];
      normal.normalize();
      double off = normal.dot(hull.vertices[supp[0]]);
      // Orient outward: all vertices on the <= side.
      for (const auto& v : hull.vertices) {
        if (normal.dot(v) > off + tol) { normal = -normal; off = -off; break; }
      }
      f.normal = normal;
      f.offset = off;
      f.vertex_ids = supp;
      hull.facets.push_back(f);
    }
  } else {
    // Brute-force facet enumeration over all d-subsets.
    std::vector<int> subset(d);
    std::vector<std::pair<std::vector<int>, std::pair<Vec, double>>> facets;
    std::vector<int> stack(d, 0);
    std::function<void(int, int)> recurse = [&](int depth, int start) {
      if (depth == d) {
        Vec normal = detail::hyperplane_normal(pts, subset, kTauGeo);
        if (normal.size() == 0) return;
        double off = normal.dot(pts[subset[0]]);
        double lo = 0.0, hi = 0.0;
        for (const auto& p : pts) {
          const double s = normal.dot(p) - off;
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
        int side;
        if (hi <= tol) side = +1;
        else if (lo >= -tol) side = -1;
        else return;
        if (side < 0) { normal = -normal; off = -off; }
        std::vector<int> supp;
        for (int i = 0; i < n; ++i) {
          if (std::abs(normal.dot(pts[i]) - off) <= tol) supp.push_back(i);
        }
        if (facet_support_sets.insert(supp).second) {
          facets.emplace_back(supp, std::make_pair(normal, off));
        }
        return;
      }
      for (int i = start; i < n; ++i) {
        subset[depth] = i;
        recurse(depth + 1, i + 1);
      }
    };
    recurse(0, 0);
    if (facets.empty()) throw DegenerateInput("no facets found");

    // A point is a hull vertex iff its incident facet normals span R^d.
    std::vector<char> is_vertex(n, 0);
    for (int i = 0; i < n; ++i) {
      std::vector<Vec> normals;
      for (const auto& [supp, plane] : facets) {
        if (std::binary_search(supp.begin(), supp.end(), i)) normals.push_back(plane.first);
      }
      if (static_cast<int>(normals.size()) < d) continue;
      Mat nm(d, normals.size());
      for (size_t j = 0; j < normals.size(); ++j) nm.col(j) = normals[j];
      Eigen::ColPivHouseholderQR<Mat> qr(nm);
      qr.setThreshold(1e-7);
      if (qr.rank() == d) is_vertex[i] = 1;
    }
    std::vector<int> remap(n, -1);
    for (int i = 0; i < n; ++i) {
      if (is_vertex[i]) {
        remap[i] = static_cast<int>(hull.vertices.size());
        hull.vertices.push_back(pts[i]);
        hull.vertex_source.push_back(source[i]);
      }
    }
    for (const auto& [supp, plane] : facets) {
      Facet f;
      f.normal = plane.first;
      f.offset = plane.second;
      for (int i : supp) {
        if (remap[i] >= 0) f.vertex_ids.push_back(remap[i]);
      }
      std::sort(f.vertex_ids.begin(), f.vertex_ids.end());
      hull.facets.push_back(f);
    }
    std::sort(hull.facets.begin(), hull.facets.end(),
              [](const Facet& a, const Facet& b) { return a.vertex_ids < b.vertex_ids; });
  }

  for (const auto& ids : detail::triangulate_hull(hull)) {
    Simplex s;
    for (int id : ids) s.vertices.push_back(hull.vertices[id]);
    if (s.volume() > 0.0) hull.triangulation.push_back(s);
  }
  return hull;
}

// Polar dual {z | <x-c, z-c> >= -1 for all x in P} about an interior center.
inline Polytope polar_dual(const Polytope& P, const Vec& center) {
  const int d = P.dim;
  const double scale = detail::coordinate_scale(P.vertices);
  for (const auto& f : P.facets) {
    if (f.offset - f.normal.dot(center) <= kTauGeo * scale) {
      throw CenterOutside("center not strictly inside the polytope");
    }
  }
  // Each facet <n, x - c> <= b' of P - c contributes the dual vertex -n / b'.
  std::vector<Vec> dual_vertices;
  for (const auto& f : P.facets) {
    const double b = f.offset - f.normal.dot(center);
    dual_vertices.push_back(Vec(center - f.normal / b));
  }
  if (static_cast<int>(dual_vertices.size()) < d + 1) {
    throw DegenerateInput("polar dual degenerate");
  }
  return convex_hull(dual_vertices);
}

inline double cross_ratio(double p, double q, double a, double b) {
  const double denom = (p - b) * (q - a);
  if (denom == 0.0) throw DivisionByZero("cross-ratio denominator vanishes");
  return ((p - a) * (q - b)) / denom;
}

// Intersections a, b of the line through p, q with the boundary, ordered a, p, q, b.
inline std::pair<Vec, Vec> line_boundary_points(const Polytope& P, const Vec& p, const Vec& q) {
  const double scale = detail::coordinate_scale(P.vertices);
  if (P.slack(p) <= kTauGeo * scale || P.slack(q) <= kTauGeo * scale) {
    throw PointOutside("p and q must be strictly inside the polytope");
  }
  Vec dir = q - p;
  if (dir.norm() <= kTauGeo * scale) throw CoincidentPoints("p and q coincide");
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  for (const auto& f : P.facets) {
    const double a = f.normal.dot(dir);
    const double s = f.offset - f.normal.dot(p);
    if (std::abs(a) <= kTauGeo) continue;
    const double t = s / a;
    if (a > 0.0) t_max = std::min(t_max, t);
    else t_min = std::max(t_min, t);
  }
  return {p + t_min * dir, p + t_max * dir};
}

// Body as the triangulation of a polytope.
inline SimplicialBody to_body(const Polytope& P) {
  return SimplicialBody{P.dim, P.triangulation};
}

// Convex hull of all simplex vertices of a body.
inline Polytope body_hull(const SimplicialBody& K) {
  std::vector<Vec> pts;
  for (const auto& s : K.simplices) {
    for (const auto& v : s.vertices) pts.push_back(v);
  }
  return convex_hull(pts);
}

}  // namespace projcent
