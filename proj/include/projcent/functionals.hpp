#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "projcent/moments.hpp"
#include "projcent/types.hpp"

namespace projcent {

// Direction in which the solver drives the objective. Critical points of mixed
// (indefinite) functionals are still reachable; the orientation only selects the
// monotone mode when the local Hessian agrees with it.
enum class Orientation { Minimize, Maximize };

class Functional {
 public:
  virtual ~Functional() = default;
  virtual int dim() const = 0;
  // Positive on the open domain, tends to 0 at its boundary. Never throws.
  virtual double slack(const Vec& y) const = 0;
  virtual double value(const Vec& y) const = 0;
  virtual Vec gradient(const Vec& y) const = 0;
  virtual Mat hessian(const Vec& y) const = 0;
  virtual Orientation orientation() const = 0;

 protected:
  void check_domain(const Vec& y) const {
    if (slack(y) <= kTauDom) throw OutsideDomain("y outside the open domain");
  }
};

using FunctionalPtr = std::shared_ptr<const Functional>;

// F(y) = weight * (1/n) sum log(1 + <p_i, y>). Strictly concave for weight > 0
// and affinely spanning points; its gradient is the centroid of phi_y(points).
class PointSetFunctional : public Functional {
 public:
  PointSetFunctional(std::vector<Vec> points, double weight)
      : points_(std::move(points)), weight_(weight) {
    if (points_.empty()) throw DegenerateInput("empty point set");
    d_ = static_cast<int>(points_[0].size());
    spanning_ = detail::affine_rank(points_, kTauGeo) == d_;
  }

  int dim() const override { return d_; }
  bool spanning() const { return spanning_; }

  double slack(const Vec& y) const override {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& p : points_) s = std::min(s, 1.0 + p.dot(y));
    return s;
  }

  double value(const Vec& y) const override {
    check_domain(y);
    double v = 0.0;
    for (const auto& p : points_) v += std::log(1.0 + p.dot(y));
    return weight_ * v / points_.size();
  }

  Vec gradient(const Vec& y) const override {
    check_domain(y);
    Vec g = Vec::Zero(d_);
    for (const auto& p : points_) g += p / (1.0 + p.dot(y));
    return weight_ * g / points_.size();
  }

  Mat hessian(const Vec& y) const override {
    check_domain(y);
    Mat h = Mat::Zero(d_, d_);
    for (const auto& p : points_) {
      const double w = 1.0 + p.dot(y);
      h -= p * p.transpose() / (w * w);
    }
    return weight_ * h / points_.size();
  }

  Orientation orientation() const override {
    return weight_ > 0.0 ? Orientation::Maximize : Orientation::Minimize;
  }

  const std::vector<Vec>& points() const { return points_; }

 private:
  std::vector<Vec> points_;
  double weight_;
  int d_;
  bool spanning_;
};

// F(y) = weight/(d+1) * log vol(phi_y(K)). Strictly convex for weight > 0 on a
// cusp-free body; gradient = -weight * centroid(phi_y(K)).
class BodyFunctional : public Functional {
 public:
  BodyFunctional(SimplicialBody body, double weight)
      : body_(std::move(body)), weight_(weight) {
    if (body_.simplices.empty()) throw DegenerateInput("empty body");
    d_ = body_.dim;
  }

  int dim() const override { return d_; }

  double slack(const Vec& y) const override {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& sim : body_.simplices) {
      for (const auto& v : sim.vertices) s = std::min(s, 1.0 + v.dot(y));
    }
    return s;
  }

  double value(const Vec& y) const override {
    check_domain(y);
    return weight_ / (d_ + 1) * std::log(mapped_body_moments(body_, y).volume);
  }

  Vec gradient(const Vec& y) const override {
    check_domain(y);
    return -weight_ * mapped_body_moments(body_, y).centroid();
  }

  Mat hessian(const Vec& y) const override {
    check_domain(y);
    const Moments m = mapped_body_moments(body_, y);
    const Vec g = m.centroid();
    return weight_ * ((d_ + 2) * m.second / m.volume - (d_ + 1) * g * g.transpose());
  }

  Orientation orientation() const override {
    return weight_ > 0.0 ? Orientation::Minimize : Orientation::Maximize;
  }

  const SimplicialBody& body() const { return body_; }

 private:
  SimplicialBody body_;
  double weight_;
  int d_;
};

// The body-side term for the unit ball, in closed form:
// F(y) = -weight/2 * log(1 - |y|^2); gradient = -weight * centroid(phi_y(B^d)).
class BallBodyFunctional : public Functional {
 public:
  BallBodyFunctional(int d, double weight) : d_(d), weight_(weight) {}

  int dim() const override { return d_; }

  double slack(const Vec& y) const override { return 1.0 - y.squaredNorm(); }

  double value(const Vec& y) const override {
    check_domain(y);
    return -0.5 * weight_ * std::log(1.0 - y.squaredNorm());
  }

  Vec gradient(const Vec& y) const override {
    check_domain(y);
    return weight_ * y / (1.0 - y.squaredNorm());
  }

  Mat hessian(const Vec& y) const override {
    check_domain(y);
    const double s = 1.0 - y.squaredNorm();
    return weight_ * (Mat::Identity(d_, d_) / s + 2.0 * y * y.transpose() / (s * s));
  }

  Orientation orientation() const override {
    return weight_ > 0.0 ? Orientation::Minimize : Orientation::Maximize;
  }

 private:
  int d_;
  double weight_;
};

// Minkowski-norm functional for centering points inside the unit ball:
// F(y) = -1/2 log(1 - |y|^2) + (1/n) sum log(1 + <p_i, y>).
class BallFunctional : public Functional {
 public:
  explicit BallFunctional(std::vector<Vec> points) : points_(std::move(points)) {
    if (points_.size() < 3) throw TooFewPoints("ball functional needs n >= 3");
    d_ = static_cast<int>(points_[0].size());
    for (const auto& p : points_) {
      if (p.norm() > 1.0 + kTauGeo) throw OutsideDomain("point outside the closed unit ball");
    }
  }

  int dim() const override { return d_; }

  double slack(const Vec& y) const override {
    double s = 1.0 - y.squaredNorm();
    for (const auto& p : points_) s = std::min(s, 1.0 + p.dot(y));
    return s;
  }

  double value(const Vec& y) const override {
    check_domain(y);
    double v = -0.5 * std::log(1.0 - y.squaredNorm());
    for (const auto& p : points_) v += std::log(1.0 + p.dot(y)) / points_.size();
    return v;
  }

  Vec gradient(const Vec& y) const override {
    check_domain(y);
    Vec g = y / (1.0 - y.squaredNorm());
    for (const auto& p : points_) g += p / ((1.0 + p.dot(y)) * points_.size());
    return g;
  }

  Mat hessian(const Vec& y) const override {
    check_domain(y);
    const double s = 1.0 - y.squaredNorm();
    Mat h = Mat::Identity(d_, d_) / s + 2.0 * y * y.transpose() / (s * s);
    for (const auto& p : points_) {
      const double w = 1.0 + p.dot(y);
      h -= p * p.transpose() / (w * w * points_.size());
    }
    return h;
  }

  Orientation orientation() const override { return Orientation::Minimize; }

  const std::vector<Vec>& points() const { return points_; }

 private:
  std::vector<Vec> points_;
  int d_;
};

class CombinedFunctional : public Functional {
 public:
  explicit CombinedFunctional(std::vector<std::pair<FunctionalPtr, double>> parts)
      : parts_(std::move(parts)) {
    if (parts_.empty()) throw DegenerateInput("empty combination");
    d_ = parts_[0].first->dim();
    if (slack(Vec::Zero(d_)) <= 0.0) throw EmptyDomain("domains do not share an open set");
    orientation_ = Orientation::Maximize;
    for (const auto& [f, sign] : parts_) {
      if (sign > 0.0 && f->orientation() == Orientation::Minimize) {
        orientation_ = Orientation::Minimize;
      }
    }
  }

  int dim() const override { return d_; }

  double slack(const Vec& y) const override {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& [f, sign] : parts_) s = std::min(s, f->slack(y));
    return s;
  }

  double value(const Vec& y) const override {
    double v = 0.0;
    for (const auto& [f, sign] : parts_) v += sign * f->value(y);
    return v;
  }

  Vec gradient(const Vec& y) const override {
    Vec g = Vec::Zero(d_);
    for (const auto& [f, sign] : parts_) g += sign * f->gradient(y);
    return g;
  }

  Mat hessian(const Vec& y) const override {
    Mat h = Mat::Zero(d_, d_);
    for (const auto& [f, sign] : parts_) h += sign * f->hessian(y);
    return h;
  }

  Orientation orientation() const override { return orientation_; }

 private:
  std::vector<std::pair<FunctionalPtr, double>> parts_;
  int d_;
  Orientation orientation_;
};

inline FunctionalPtr pointset_functional(std::vector<Vec> points, double weight = 1.0) {
  return std::make_shared<PointSetFunctional>(std::move(points), weight);
}

inline FunctionalPtr body_functional(SimplicialBody body, double weight = 1.0) {
  return std::make_shared<BodyFunctional>(std::move(body), weight);
}

inline FunctionalPtr ball_body_functional(int d, double weight = 1.0) {
  return std::make_shared<BallBodyFunctional>(d, weight);
}

inline FunctionalPtr ball_functional(std::vector<Vec> points) {
  return std::make_shared<BallFunctional>(std::move(points));
}

inline FunctionalPtr combine(std::vector<std::pair<FunctionalPtr, double>> parts) {
  return std::make_shared<CombinedFunctional>(std::move(parts));
}

// Homogeneous (d+1)-dimensional Hessian of the point-vs-point problem at the
// lifted parameter (1, y); its signature separates critical from non-critical y.
inline Mat homogeneous_point_hessian(const std::vector<Vec>& points, const Vec& q, const Vec& y) {
  const int d = static_cast<int>(q.size());
  Mat h = Mat::Zero(d + 1, d + 1);
  const Vec yl = lift(y);
  for (const auto& p : points) {
    const Vec pl = lift(p);
    const double w = pl.dot(yl);
    h -= pl * pl.transpose() / (w * w * points.size());
  }
  const Vec ql = lift(q);
  const double wq = ql.dot(yl);
  h += ql * ql.transpose() / (wq * wq);
  return h;
}

}  // namespace projcent
