#pragma once

#include <cmath>
#include <optional>

#include "projcent/geometry.hpp"
#include "projcent/types.hpp"

namespace projcent {

// Projective transformation of RP^d acting on lifted points (1, x), defined
// modulo nonzero scaling. Row 0 of the matrix carries the homogeneous
// denominator; rows 1..d the image coordinates.
class ProjectiveMap {
 public:
  explicit ProjectiveMap(Mat matrix) : m_(std::move(matrix)) {
    if (m_.rows() != m_.cols() || m_.rows() < 2) throw Singular("matrix must be (d+1)x(d+1)");
    if (std::abs(m_.determinant()) < 1e-300) throw Singular("matrix is singular");
    normalize();
  }

  static ProjectiveMap identity(int d) { return ProjectiveMap(Mat::Identity(d + 1, d + 1)); }

  // x -> Ax + b as a projective map.
  static ProjectiveMap affine(const Mat& A, const Vec& b) {
    const int d = static_cast<int>(A.rows());
    Mat m = Mat::Zero(d + 1, d + 1);
    m(0, 0) = 1.0;
    m.block(1, 1, d, d) = A;
    m.block(1, 0, d, 1) = b;
    return ProjectiveMap(m);
  }

  static ProjectiveMap translation(const Vec& t) {
    return affine(Mat::Identity(t.size(), t.size()), t);
  }

  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()) - 1; }

  // Homogeneous denominator of x under this map.
  double denominator(const Vec& x) const { return m_.row(0).dot(lift(x)); }

  Vec apply(const Vec& x) const {
    Vec h = m_ * lift(x);
    return dehomogenize(h);
  }

  ProjectiveMap inverse() const { return ProjectiveMap(m_.inverse()); }

  bool approx_equal(const ProjectiveMap& other, double tol = 1e-9) const {
    return (m_ - other.m_).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  void normalize() {
    m_ /= m_.norm();
    for (int i = 0; i < m_.rows(); ++i) {
      for (int j = 0; j < m_.cols(); ++j) {
        const double e = m_(i, j);
        if (std::abs(e) > 1e-12) {
          if (e < 0.0) m_ = -m_;
          return;
        }
      }
    }
  }

  Mat m_;
};

// Canonical coset representative phi_y: x -> x / (1 + <x, y>).
inline ProjectiveMap from_infinity_vector(const Vec& y) {
  const int d = static_cast<int>(y.size());
  Mat m = Mat::Identity(d + 1, d + 1);
  m.block(0, 1, 1, d) = y.transpose();
  return ProjectiveMap(m);
}

// Apply phi_m2 first, then phi_m1.
inline ProjectiveMap compose(const ProjectiveMap& m1, const ProjectiveMap& m2) {
  return ProjectiveMap(m1.matrix() * m2.matrix());
}

inline ProjectiveMap inverse(const ProjectiveMap& m) { return m.inverse(); }

// True iff the homogeneous denominator keeps a constant sign on the hull vertices,
// i.e. the map sends conv(hull) into affine space.
inline bool is_admissible(const ProjectiveMap& m, const Polytope& hull) {
  const double scale = m.matrix().row(0).norm();
  int sign = 0;
  for (const auto& v : hull.vertices) {
    const double w = m.denominator(v);
    if (std::abs(w) <= kTauGeo * scale) return false;
    const int s = w > 0.0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

// Recovers y with m = affine o phi_y when the hyperplane sent to infinity misses
// the origin; nullopt marks the through-the-origin case.
inline std::optional<Vec> coset_infinity_vector(const ProjectiveMap& m) {
  const int d = m.dim();
  const Vec row0 = m.matrix().row(0).transpose();
  const double rho0 = row0[0];
  const Vec rho = row0.tail(d);
  if (std::abs(rho0) <= kTauGeo * std::max(1.0, rho.norm())) return std::nullopt;
  return Vec(rho / rho0);
}

inline bool same_coset(const ProjectiveMap& a, const ProjectiveMap& b, double tol = 1e-8) {
  Vec ra = a.matrix().row(0).normalized().transpose();
  Vec rb = b.matrix().row(0).normalized().transpose();
  return std::min((ra - rb).norm(), (ra + rb).norm()) <= tol;
}

// Projective map fixing the unit ball that sends z to the origin, built as the
// hyperbolic translation taking the hyperboloid lift of z to e_0.
inline ProjectiveMap lorentz_ball_map(const Vec& z) {
  const int d = static_cast<int>(z.size());
  const double s = z.squaredNorm();
  if (s >= 1.0 - kTauGeo) throw OutsideBall("point not in the open unit ball");
  if (z.norm() < 1e-14) return ProjectiveMap::identity(d);
  const double p0 = 1.0 / std::sqrt(1.0 - s);
  Vec w = p0 * z;
  Mat m(d + 1, d + 1);
  m(0, 0) = p0;
  m.block(0, 1, 1, d) = -w.transpose();
  m.block(1, 0, d, 1) = -w;
  m.block(1, 1, d, d) = Mat::Identity(d, d) + w * w.transpose() / (1.0 + p0);
  return ProjectiveMap(m);
}

}  // namespace projcent
