#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "projcent/functionals.hpp"
#include "projcent/geometry.hpp"
#include "projcent/hilbert.hpp"
#include "projcent/moments.hpp"
#include "projcent/projective.hpp"
#include "projcent/solver.hpp"
#include "projcent/types.hpp"

namespace projcent {

// One entry per distinct critical class: reports[i] produced maps[i] with
// residuals[i] the independently recomputed centroid mismatch. Diverged or
// stalled reports carry no map; they are listed after the converged ones.
struct CenteringResult {
  std::vector<SolveReport> reports;
  std::vector<ProjectiveMap> maps;
  std::vector<double> residuals;
  std::vector<Vec> points;  // problem-specific point answers (Santalo variants)
  std::optional<UniquenessCertificate> certificate;

  int classes() const { return static_cast<int>(maps.size()); }
};

struct CenteringOptions {
  int starts = 16;
  std::uint64_t seed = 0;
  SolveOptions solve;
};

namespace detail {

inline Vec vertex_mean(const Polytope& P) {
  Vec c = Vec::Zero(P.dim);
  for (const auto& v : P.vertices) c += v;
  return c / static_cast<double>(P.vertices.size());
}

inline SimplicialBody shifted(const SimplicialBody& K, const Vec& t) {
  SimplicialBody out;
  out.dim = K.dim;
  for (const auto& s : K.simplices) {
    Simplex sh;
    for (const auto& v : s.vertices) sh.vertices.push_back(v + t);
    out.simplices.push_back(sh);
  }
  return out;
}

inline std::vector<Vec> shifted(const std::vector<Vec>& pts, const Vec& t) {
  std::vector<Vec> out;
  for (const auto& p : pts) out.push_back(p + t);
  return out;
}

inline Vec mapped_mean(const ProjectiveMap& m, const std::vector<Vec>& pts) {
  Vec s = Vec::Zero(m.dim());
  for (const auto& p : pts) s += m.apply(p);
  return s / static_cast<double>(pts.size());
}

// Boundary samples of the unit sphere: uniform angles (d=2) or a Fibonacci
// lattice (d=3).
inline std::vector<Vec> sphere_samples(int d, int m) {
  std::vector<Vec> out;
  if (d == 2) {
    for (int k = 0; k < m; ++k) {
      const double a = 2.0 * M_PI * k / m;
      Vec u(2);
      u << std::cos(a), std::sin(a);
      out.push_back(u);
    }
  } else if (d == 3) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int k = 0; k < m; ++k) {
      const double zc = 1.0 - 2.0 * (k + 0.5) / m;
      const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double a = 2.0 * M_PI * k / golden;
      Vec u(3);
      u << r * std::cos(a), r * std::sin(a), zc;
      out.push_back(u);
    }
  } else {
    throw UnsupportedDimension("sphere sampling supports d in {2,3}");
  }
  return out;
}

}  // namespace detail

// Unique coset with the mean of the mapped points at the mapped q.
inline CenteringResult fit_point_to_points(const std::vector<Vec>& points, const Vec& q,
                                           const CenteringOptions& opts = {}) {
  const int d = static_cast<int>(q.size());
  if (detail::affine_rank(points, kTauGeo) < d) {
    throw DegenerateSpan("points do not affinely span");
  }
  const Polytope hull = convex_hull(points);
  if (hull.slack(q) <= kTauGeo * detail::coordinate_scale(points)) {
    throw QOutsideHull("q not strictly inside the hull of the points");
  }
  const std::vector<Vec> pts0 = detail::shifted(points, Vec(-q));
  const auto f = pointset_functional(pts0);

  CenteringResult result;
  SolveReport r = solve_critical(*f, Vec::Zero(d), opts.solve);
  result.reports.push_back(r);
  if (r.status == SolveStatus::Converged) {
    const ProjectiveMap map =
        compose(from_infinity_vector(r.y_star), ProjectiveMap::translation(-q));
    result.maps.push_back(map);
    result.residuals.push_back((detail::mapped_mean(map, points) - map.apply(q)).norm());
  }
  return result;
}

// All critical cosets matching the means of two point sets, conv(Q) inside
// int conv(P).
inline CenteringResult fit_points_to_points(const std::vector<Vec>& P, const std::vector<Vec>& Q,
                                            const CenteringOptions& opts = {}) {
  const Polytope hullP = convex_hull(P);
  const double scale = detail::coordinate_scale(P);
  for (const auto& q : Q) {
    if (hullP.slack(q) <= kTauGeo * scale) {
      throw ContainmentViolated("conv(Q) not inside int conv(P)");
    }
  }
  const auto f = combine({{pointset_functional(P), 1.0}, {pointset_functional(Q), -1.0}});

  CenteringResult result;
  for (const auto& r : multistart(*f, opts.starts, opts.seed, opts.solve)) {
    result.reports.push_back(r);
    if (r.status != SolveStatus::Converged) continue;
    const ProjectiveMap map = from_infinity_vector(r.y_star);
    result.maps.push_back(map);
    result.residuals.push_back((detail::mapped_mean(map, P) - detail::mapped_mean(map, Q)).norm());
  }
  return result;
}

// Unique coset with the mapped body centroid at the mapped q; diverging to the
// boundary signals that no admissible solution exists.
inline CenteringResult fit_point_to_body(const SimplicialBody& K, const Vec& q,
                                         const CenteringOptions& opts = {}) {
  const Polytope hull = body_hull(K);
  if (hull.slack(q) <= kTauGeo * detail::coordinate_scale(hull.vertices)) {
    throw QOutsideHull("q not strictly inside the body");
  }
  const SimplicialBody K0 = detail::shifted(K, Vec(-q));
  const auto f = body_functional(K0);

  CenteringResult result;
  for (const auto& r : multistart(*f, opts.starts, opts.seed, opts.solve)) {
    result.reports.push_back(r);
    if (r.status != SolveStatus::Converged) continue;
    const ProjectiveMap map =
        compose(from_infinity_vector(r.y_star), ProjectiveMap::translation(-q));
    result.maps.push_back(map);
    result.residuals.push_back(
        (mapped_body_moments(K0, r.y_star).centroid() - Vec::Zero(K.dim)).norm());
  }
  return result;
}

// The unique y in int L with the centroid of the polar about y at y itself,
// through the point-vs-body problem on the polar body.
inline Vec santalo_point(const Polytope& L, const CenteringOptions& opts = {}) {
  const Vec c = detail::vertex_mean(L);
  Polytope dual;
  try {
    dual = polar_dual(L, c);
  } catch (const Error&) {
    throw DegenerateBody("polar of L degenerate");
  }
  std::vector<Vec> dual_pts;
  for (const auto& v : dual.vertices) dual_pts.push_back(v - c);
  const Polytope dual0 = convex_hull(dual_pts);

  CenteringResult sub = fit_point_to_body(to_body(dual0), Vec::Zero(L.dim), opts);
  for (const auto& r : sub.reports) {
    if (r.status == SolveStatus::Converged) return c + r.y_star;
  }
  throw DegenerateBody("no Santalo point found");
}

// All y with the polar centroids of L1 and L2 about y equal; solved as a
// body-vs-body problem on the polars about a common interior point.
inline CenteringResult santalo_pair(const Polytope& L1, const Polytope& L2,
                                    const CenteringOptions& opts = {}) {
  const double scale = detail::coordinate_scale(L1.vertices);
  for (const auto& v : L2.vertices) {
    if (L1.slack(v) <= kTauGeo * scale) throw ContainmentViolated("L2 not inside int L1");
  }
  const Vec c = detail::vertex_mean(L2);
  const Polytope outer = polar_dual(L2, c);   // polar of the smaller body is larger
  const Polytope inner = polar_dual(L1, c);
  std::vector<Vec> op, ip;
  for (const auto& v : outer.vertices) op.push_back(v - c);
  for (const auto& v : inner.vertices) ip.push_back(v - c);
  const SimplicialBody A = to_body(convex_hull(op));
  const SimplicialBody B = to_body(convex_hull(ip));
  const auto f = combine({{body_functional(A), 1.0}, {body_functional(B), -1.0}});

  CenteringResult result;
  for (const auto& r : multistart(*f, opts.starts, opts.seed, opts.solve)) {
    result.reports.push_back(r);
    if (r.status != SolveStatus::Converged) continue;
    const Vec y = c + r.y_star;
    result.points.push_back(y);
    result.maps.push_back(
        compose(from_infinity_vector(r.y_star), ProjectiveMap::translation(-c)));
    // Independent residual: centroids of the polars about y.
    const Vec g1 = body_moments(to_body(polar_dual(L1, y))).centroid();
    const Vec g2 = body_moments(to_body(polar_dual(L2, y))).centroid();
    result.residuals.push_back((g1 - g2).norm());
  }
  result.certificate = make_certificate(CertificateKind::BodyPair,
                                        hilbert_diameter(L1, L2), L1.dim);
  return result;
}

namespace detail {

// Every support hyperplane of conv(K) must contain fewer than n/(d+1) of the
// points; checked over hull facets and over candidate hyperplanes spanned by
// d-subsets of the points.
inline void check_support_counts(const Polytope& hull, const std::vector<Vec>& points) {
  const int d = hull.dim;
  const int n = static_cast<int>(points.size());
  const double scale = coordinate_scale(hull.vertices);
  const double tol = kTauGeo * scale * 1e3;
  const double limit = static_cast<double>(n) / (d + 1);

  auto count_on = [&](const Vec& normal, double offset) {
    int cnt = 0;
    for (const auto& p : points) {
      if (std::abs(normal.dot(p) - offset) <= tol) ++cnt;
    }
    return cnt;
  };

  for (const auto& f : hull.facets) {
    if (count_on(f.normal, f.offset) >= limit) {
      throw SupportCountViolated("a facet hyperplane carries too many points");
    }
  }

  if (n < d) return;
  std::vector<int> subset(d);
  std::function<void(int, int)> recurse = [&](int depth, int start) {
    if (depth == d) {
      Vec normal = hyperplane_normal(points, subset, kTauGeo);
      if (normal.size() == 0) return;
      double offset = normal.dot(points[subset[0]]);
      double lo = 0.0, hi = 0.0;
      for (const auto& v : hull.vertices) {
        const double s = normal.dot(v) - offset;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      const bool supports = (hi <= tol) || (lo >= -tol);
      if (supports && count_on(normal, offset) >= limit) {
        throw SupportCountViolated("a support hyperplane carries too many points");
      }
      return;
    }
    for (int i = start; i < static_cast<int>(points.size()); ++i) {
      subset[depth] = i;
      recurse(depth + 1, i + 1);
    }
  };
  recurse(0, 0);
}

}  // namespace detail

// Critical cosets of the mixed functional matching the body centroid with the
// mean of the points.
inline CenteringResult fit_points_to_body(const SimplicialBody& K, const std::vector<Vec>& points,
                                          const CenteringOptions& opts = {}) {
  const Polytope hull = body_hull(K);
  const double scale = detail::coordinate_scale(hull.vertices);
  for (const auto& p : points) {
    if (hull.slack(p) < -kTauGeo * scale) throw ContainmentViolated("points not inside conv K");
  }
  detail::check_support_counts(hull, points);
  const auto f = combine({{body_functional(K), 1.0}, {pointset_functional(points), 1.0}});

  CenteringResult result;
  for (const auto& r : multistart(*f, opts.starts, opts.seed, opts.solve)) {
    result.reports.push_back(r);
    if (r.status != SolveStatus::Converged) continue;
    const ProjectiveMap map = from_infinity_vector(r.y_star);
    result.maps.push_back(map);
    result.residuals.push_back((mapped_body_moments(K, r.y_star).centroid() -
                                detail::mapped_mean(map, points)).norm());
  }
  return result;
}

// Ball-fixing map with the mapped points summing to zero (conformal barycenter
// normalization).
inline std::pair<ProjectiveMap, std::vector<Vec>> mobius_center(const std::vector<Vec>& points,
                                                                const CenteringOptions& opts = {}) {
  if (points.size() < 3) throw TooFewPoints("mobius centering needs n >= 3");
  const int d = static_cast<int>(points[0].size());
  bool all_on_sphere = true;
  for (const auto& p : points) {
    if (p.norm() > 1.0 + kTauGeo) throw OutsideBall("point outside the closed unit ball");
    if (p.norm() < 1.0 - kTauGeo) all_on_sphere = false;
  }
  if (all_on_sphere) {
    // A geodesic meets the sphere in two points, so the configuration is
    // degenerate iff it has at most two distinct positions.
    std::vector<Vec> distinct;
    for (const auto& p : points) {
      bool seen = false;
      for (const auto& q : distinct) {
        if ((p - q).norm() < 1e-9) { seen = true; break; }
      }
      if (!seen) distinct.push_back(p);
    }
    if (distinct.size() <= 2) throw DegenerateGeodesic("all points on one geodesic");
  }

  const auto f = ball_functional(points);
  SolveReport best;
  bool found = false;
  for (const auto& r : multistart(*f, opts.starts, opts.seed, opts.solve)) {
    if (r.status == SolveStatus::Converged) { best = r; found = true; break; }
  }
  if (!found) throw DegenerateGeodesic("ball functional has no interior minimizer");

  const ProjectiveMap map = lorentz_ball_map(Vec(-best.y_star));
  std::vector<Vec> centered;
  for (const auto& p : points) centered.push_back(map.apply(p));
  return {map, centered};
}

// All critical cosets matching the centroids of two bodies, conv(K2) inside
// int conv(K1).
inline CenteringResult fit_body_to_body(const SimplicialBody& K1, const SimplicialBody& K2,
                                        const CenteringOptions& opts = {}) {
  const Polytope hull1 = body_hull(K1);
  const Polytope hull2 = body_hull(K2);
  const double scale = detail::coordinate_scale(hull1.vertices);
  for (const auto& v : hull2.vertices) {
    if (hull1.slack(v) <= kTauGeo * scale) throw ContainmentViolated("K2 not inside int conv K1");
  }
  const auto f = combine({{body_functional(K1), 1.0}, {body_functional(K2), -1.0}});

  CenteringResult result;
  for (const auto& r : multistart(*f, opts.starts, opts.seed, opts.solve)) {
    result.reports.push_back(r);
    if (r.status != SolveStatus::Converged) continue;
    result.maps.push_back(from_infinity_vector(r.y_star));
    result.residuals.push_back((mapped_body_moments(K1, r.y_star).centroid() -
                                mapped_body_moments(K2, r.y_star).centroid()).norm());
  }
  result.certificate =
      make_certificate(CertificateKind::BodyPair, hilbert_width(hull1, hull2), K1.dim);
  return result;
}

namespace detail {

// Hilbert width of K with respect to the unit ball via the dual identity
// width_B(K) = diam_{K polar}(B polar), with the ball's polar about an interior
// point of K sampled along its boundary conic.
inline double ball_width_of(const Polytope& K, int samples) {
  const Vec c = vertex_mean(K);
  const Polytope dual = polar_dual(K, c);
  // (B - c) polar is {z : |z| + <c,z> <= 1}; boundary point along direction u
  // is u / (1 + <c,u>).
  std::vector<Vec> boundary;
  for (const auto& u : sphere_samples(K.dim, samples)) {
    boundary.push_back(Vec(c + u / (1.0 + c.dot(u))));
  }
  double best = 0.0;
  for (size_t i = 0; i < boundary.size(); ++i) {
    for (size_t j = i + 1; j < boundary.size(); ++j) {
      best = std::max(best, hilbert_distance(dual, boundary[i], boundary[j]));
    }
  }
  return best;
}

// Translated ball-polar term: value -1/2 log(1 - |c + y|^2), the log-volume of
// the polar of the unit ball about c + y up to a constant.
class ShiftedBallPolarFunctional : public Functional {
 public:
  explicit ShiftedBallPolarFunctional(Vec c) : c_(std::move(c)) {}

  int dim() const override { return static_cast<int>(c_.size()); }
  double slack(const Vec& y) const override { return 1.0 - (c_ + y).squaredNorm(); }

  double value(const Vec& y) const override {
    check_domain(y);
    return -0.5 * std::log(1.0 - (c_ + y).squaredNorm());
  }

  Vec gradient(const Vec& y) const override {
    check_domain(y);
    const Vec t = c_ + y;
    return t / (1.0 - t.squaredNorm());
  }

  Mat hessian(const Vec& y) const override {
    check_domain(y);
    const Vec t = c_ + y;
    const double s = 1.0 - t.squaredNorm();
    return Mat::Identity(dim(), dim()) / s + 2.0 * t * t.transpose() / (s * s);
  }

  Orientation orientation() const override { return Orientation::Minimize; }

 private:
  Vec c_;
};

}  // namespace detail

// Ball-fixing map sending the centroid of K to the origin; the ball side uses
// exact ellipsoid moments through the closed-form functional.
inline CenteringResult fit_body_to_ball(const Polytope& K, const CenteringOptions& opts = {}) {
  const int d = K.dim;
  for (const auto& v : K.vertices) {
    if (v.norm() >= 1.0 - kTauGeo) throw ContainmentViolated("K not inside the open unit ball");
  }
  const SimplicialBody body = to_body(K);
  const auto f =
      combine({{body_functional(body), 1.0}, {ball_body_functional(d), -1.0}});

  CenteringResult result;
  for (const auto& r : multistart(*f, opts.starts, opts.seed, opts.solve)) {
    result.reports.push_back(r);
    if (r.status != SolveStatus::Converged) continue;
    const ProjectiveMap map = lorentz_ball_map(Vec(-r.y_star));
    result.maps.push_back(map);
    result.residuals.push_back(mapped_body_moments(body, map).centroid().norm());
  }
  const int samples = d == 2 ? 360 : 400;
  result.certificate = make_certificate(CertificateKind::BallOuter,
                                        detail::ball_width_of(K, samples), d);
  return result;
}

// Santalo points of the pair (K, unit ball): y with the polar centroids equal,
// the ball polar handled in closed form.
inline CenteringResult ball_pair_santalo(const Polytope& K, const CenteringOptions& opts = {}) {
  const int d = K.dim;
  for (const auto& v : K.vertices) {
    if (v.norm() >= 1.0 - kTauGeo) throw ContainmentViolated("K not inside the open unit ball");
  }
  const Vec c = detail::vertex_mean(K);
  const Polytope dual = polar_dual(K, c);
  std::vector<Vec> dp;
  for (const auto& v : dual.vertices) dp.push_back(v - c);
  const SimplicialBody A = to_body(convex_hull(dp));
  const auto f = combine(
      {{body_functional(A), 1.0},
       {std::make_shared<detail::ShiftedBallPolarFunctional>(c), -1.0}});

  CenteringResult result;
  for (const auto& r : multistart(*f, opts.starts, opts.seed, opts.solve)) {
    result.reports.push_back(r);
    if (r.status != SolveStatus::Converged) continue;
    const Vec y = c + r.y_star;
    result.points.push_back(y);
    result.maps.push_back(
        compose(from_infinity_vector(r.y_star), ProjectiveMap::translation(-c)));
    // Independent residual: the polar of the ball about y is the conic
    // |z| + <y,z> <= 1 with centroid -y/(1-|y|^2), shifted back by y.
    const Vec g1 = body_moments(to_body(polar_dual(K, y))).centroid();
    const Vec g2 = y - y / (1.0 - y.squaredNorm());
    result.residuals.push_back((g1 - g2).norm());
  }
  double diam = 0.0;
  for (size_t i = 0; i < K.vertices.size(); ++i) {
    for (size_t j = i + 1; j < K.vertices.size(); ++j) {
      diam = std::max(diam, hilbert_distance_ball(K.vertices[i], K.vertices[j]));
    }
  }
  result.certificate = make_certificate(CertificateKind::BallInner, diam, d);
  return result;
}

}  // namespace projcent
