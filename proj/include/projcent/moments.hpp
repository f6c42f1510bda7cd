#pragma once

#include <cmath>

#include "projcent/geometry.hpp"
#include "projcent/projective.hpp"
#include "projcent/types.hpp"

namespace projcent {

struct Moments {
  double volume = 0.0;
  Vec first;    // integral of x
  Mat second;   // integral of x x^T

  Vec centroid() const { return first / volume; }

  // Central second moment matrix, integral of (x - c)(x - c)^T / volume.
  Mat normalized_inertia() const {
    const Vec c = centroid();
    return second / volume - c * c.transpose();
  }

  Moments& operator+=(const Moments& other) {
    if (first.size() == 0) {
      *this = other;
    } else {
      volume += other.volume;
      first += other.first;
      second += other.second;
    }
    return *this;
  }
};

// Body {x | (x - c)^T A (x - c) <= 1} with A symmetric positive definite.
struct Ellipsoid {
  Vec center;
  Mat shape;

  Ellipsoid(Vec c, Mat a) : center(std::move(c)), shape(std::move(a)) {
    if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw Degenerate("ellipsoid shape matrix not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(shape);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw Degenerate("ellipsoid shape matrix not positive definite");
    }
  }

  static Ellipsoid unit_ball(int d) { return Ellipsoid(Vec::Zero(d), Mat::Identity(d, d)); }
};

// Volume of the d-dimensional unit ball.
inline double unit_ball_volume(int d) {
  double beta = (d % 2 == 0) ? 1.0 : 2.0;
  for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) beta *= 2.0 * M_PI / k;
  return beta;
}

inline Moments simplex_moments(const Simplex& s) {
  const int d = s.dim();
  const double vol = s.volume();
  if (vol <= 0.0) throw Degenerate("degenerate simplex");
  Vec vsum = Vec::Zero(d);
  Mat outer = Mat::Zero(d, d);
  for (const auto& v : s.vertices) {
    vsum += v;
    outer += v * v.transpose();
  }
  Moments m;
  m.volume = vol;
  m.first = vol * vsum / (d + 1);
  m.second = vol / static_cast<double>((d + 1) * (d + 2)) * (outer + vsum * vsum.transpose());
  return m;
}

inline Moments body_moments(const SimplicialBody& K) {
  Moments m;
  for (const auto& s : K.simplices) m += simplex_moments(s);
  return m;
}

// Exact moments of the image of K under an arbitrary admissible projective map.
inline Moments mapped_body_moments(const SimplicialBody& K, const ProjectiveMap& phi) {
  Moments m;
  const int d = K.dim;
  int sign = 0;
  for (const auto& s : K.simplices) {
    Simplex image;
    for (const auto& v : s.vertices) {
      const Vec h = phi.matrix() * lift(v);
      const double w = h[0];
      if (std::abs(w) <= 0.1 * kTauDom) throw NotAdmissible("simplex vertex sent to infinity");
      const int sg = w > 0.0 ? 1 : -1;
      if (sign == 0) sign = sg;
      else if (sg != sign) throw NotAdmissible("denominator changes sign on the body");
      image.vertices.push_back(Vec(h.tail(d) / w));
    }
    m += simplex_moments(image);
  }
  return m;
}

inline Moments mapped_body_moments(const SimplicialBody& K, const Vec& y) {
  return mapped_body_moments(K, from_infinity_vector(y));
}

inline Moments ellipsoid_moments(const Ellipsoid& e) {
  const int d = static_cast<int>(e.center.size());
  const Mat inv = e.shape.inverse();
  Moments m;
  m.volume = unit_ball_volume(d) / std::sqrt(e.shape.determinant());
  m.first = m.volume * e.center;
  m.second = m.volume * (inv / (d + 2) + e.center * e.center.transpose());
  return m;
}

// Exact ellipsoid phi_y(B^d), from the transformed quadric of the unit sphere.
inline Ellipsoid ball_image(const Vec& y) {
  const int d = static_cast<int>(y.size());
  if (y.squaredNorm() >= 1.0 - kTauGeo) throw OutsideDomain("y not in the open unit ball");
  Mat Q = Mat::Identity(d + 1, d + 1);
  Q(0, 0) = -1.0;
  const Mat minv = from_infinity_vector(y).matrix().inverse();
  const Mat Qp = minv.transpose() * Q * minv;
  const Mat B = Qp.block(1, 1, d, d);
  const Vec b = Qp.block(1, 0, d, 1);
  const double alpha = Qp(0, 0);
  const Vec c = -B.ldlt().solve(b);
  const double s = b.dot(B.ldlt().solve(b)) - alpha;
  return Ellipsoid(c, B / s);
}

inline double directional_width(const std::vector<Vec>& points, const Vec& u) {
  if (u.norm() == 0.0) throw ZeroDirection("zero direction");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : points) {
    const double s = p.dot(u);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return (hi - lo) / u.norm();
}

inline double directional_width(const Polytope& P, const Vec& u) {
  return directional_width(P.vertices, u);
}

inline double directional_width(const SimplicialBody& K, const Vec& u) {
  if (u.norm() == 0.0) throw ZeroDirection("zero direction");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : K.simplices) {
    for (const auto& v : s.vertices) {
      const double t = v.dot(u);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  return (hi - lo) / u.norm();
}

inline double directional_width(const Ellipsoid& e, const Vec& u) {
  if (u.norm() == 0.0) throw ZeroDirection("zero direction");
  return 2.0 * std::sqrt(u.dot(e.shape.inverse() * u)) / u.norm();
}

// Normalized moment of inertia I_u / vol for a unit direction u.
inline double inertia_ratio(const Moments& m, const Vec& u) {
  const double nu = u.norm();
  if (nu == 0.0) throw ZeroDirection("zero direction");
  const Vec un = u / nu;
  return un.dot(m.normalized_inertia() * un);
}

}  // namespace projcent
