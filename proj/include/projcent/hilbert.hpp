#pragma once

#include <cmath>

#include "projcent/geometry.hpp"
#include "projcent/types.hpp"

namespace projcent {

enum class CertificateKind { BodyPair, BallOuter, BallInner };

// Sufficient uniqueness condition: measured Hilbert width/diameter against the
// dimension-dependent threshold. Absence of a certificate asserts nothing.
struct UniquenessCertificate {
  CertificateKind kind = CertificateKind::BodyPair;
  double measured = 0.0;
  double bound = 0.0;
  bool holds = false;
};

// Sharp width-ratio threshold for two-body uniqueness.
inline double kappa(int d) {
  if (d < 1) throw UnsupportedDimension("kappa needs d >= 1");
  return std::sqrt(6.0 / ((d + 1.0) * (d + 2.0)));
}

inline double log_ratio_bound(double k) { return std::log((1.0 + k) / (1.0 - k)); }

inline UniquenessCertificate make_certificate(CertificateKind kind, double measured, int d) {
  double k = 0.0;
  switch (kind) {
    case CertificateKind::BodyPair: k = kappa(d); break;
    case CertificateKind::BallOuter: k = std::sqrt(3.0 / (d + 2.0)); break;
    case CertificateKind::BallInner: k = std::sqrt(2.0 / (d + 1.0)); break;
  }
  UniquenessCertificate cert;
  cert.kind = kind;
  cert.measured = measured;
  cert.bound = log_ratio_bound(k);
  cert.holds = measured < cert.bound - 1e-12;
  return cert;
}

// Hilbert distance (1/2) log |cr(p,q;a,b)| inside K.
inline double hilbert_distance(const Polytope& K, const Vec& p, const Vec& q) {
  const double scale = detail::coordinate_scale(K.vertices);
  if (K.slack(p) <= kTauGeo * scale || K.slack(q) <= kTauGeo * scale) {
    throw PointOutside("points must be strictly interior");
  }
  if ((p - q).norm() <= kTauGeo * scale) return 0.0;
  auto [a, b] = line_boundary_points(K, p, q);
  // 1-D coordinates along the line through p and q.
  const Vec dir = (q - p).normalized();
  const double tp = 0.0;
  const double tq = (q - p).norm();
  const double ta = dir.dot(a - p);
  const double tb = dir.dot(b - p);
  return 0.5 * std::abs(std::log(std::abs(cross_ratio(tp, tq, ta, tb))));
}

// Hilbert distance between interior points of the unit ball (Cayley-Klein
// metric), with the sphere intersections in closed form.
inline double hilbert_distance_ball(const Vec& p, const Vec& q) {
  if (p.norm() >= 1.0 || q.norm() >= 1.0) throw PointOutside("points must be inside the ball");
  const Vec dvec = q - p;
  const double dn = dvec.norm();
  if (dn == 0.0) return 0.0;
  const Vec u = dvec / dn;
  // |p + t u| = 1  =>  t^2 + 2 t <p,u> + |p|^2 - 1 = 0
  const double b = p.dot(u);
  const double disc = b * b - (p.squaredNorm() - 1.0);
  const double ta = -b - std::sqrt(disc);
  const double tb = -b + std::sqrt(disc);
  return 0.5 * std::abs(std::log(std::abs(cross_ratio(0.0, dn, ta, tb))));
}

// Maximum Hilbert distance over K2, attained at vertex pairs.
inline double hilbert_diameter(const Polytope& K1, const Polytope& K2) {
  const double scale = detail::coordinate_scale(K1.vertices);
  for (const auto& v : K2.vertices) {
    if (K1.slack(v) <= kTauGeo * scale) throw ContainmentViolated("K2 not inside int K1");
  }
  double best = 0.0;
  for (size_t i = 0; i < K2.vertices.size(); ++i) {
    for (size_t j = i + 1; j < K2.vertices.size(); ++j) {
      best = std::max(best, hilbert_distance(K1, K2.vertices[i], K2.vertices[j]));
    }
  }
  return best;
}

// Maximum Hilbert width of K2 with respect to K1, computed through the duality
// width_{K1}(K2) = diam_{K2°}(K1°) with polars about an interior point of K2.
inline double hilbert_width(const Polytope& K1, const Polytope& K2) {
  Vec c = Vec::Zero(K2.dim);
  for (const auto& v : K2.vertices) c += v;
  c /= static_cast<double>(K2.vertices.size());
  const Polytope dual1 = polar_dual(K1, c);
  const Polytope dual2 = polar_dual(K2, c);
  return hilbert_diameter(dual2, dual1);
}

}  // namespace projcent
