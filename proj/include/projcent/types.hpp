#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace projcent {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Tolerance for geometric predicates on inputs with coordinates O(1).
inline constexpr double kTauGeo = 1e-9;
// Slack threshold delimiting the open domain of a functional.
inline constexpr double kTauDom = 1e-12;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateInput : Error { using Error::Error; };
struct CenterOutside : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct PointOutside : Error { using Error::Error; };
struct CoincidentPoints : Error { using Error::Error; };
struct AtInfinity : Error { using Error::Error; };
struct OutsideBall : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct Degenerate : Error { using Error::Error; };
struct NotAdmissible : Error { using Error::Error; };
struct ZeroDirection : Error { using Error::Error; };
struct OutsideDomain : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct EmptyDomain : Error { using Error::Error; };
struct StartOutsideDomain : Error { using Error::Error; };
struct QOutsideHull : Error { using Error::Error; };
struct DegenerateSpan : Error { using Error::Error; };
struct ContainmentViolated : Error { using Error::Error; };
struct SupportCountViolated : Error { using Error::Error; };
struct DegenerateGeodesic : Error { using Error::Error; };
struct DegenerateBody : Error { using Error::Error; };
struct NotGeneralPosition : Error { using Error::Error; };
struct UnsupportedDimension : Error { using Error::Error; };
struct OnArrangement : Error { using Error::Error; };

inline Vec lift(const Vec& x) {
  Vec h(x.size() + 1);
  h[0] = 1.0;
  h.tail(x.size()) = x;
  return h;
}

inline Vec dehomogenize(const Vec& h) {
  if (std::abs(h[0]) < kTauGeo * (1.0 + h.norm())) {
    throw AtInfinity("homogeneous coordinate vanishes");
  }
  return h.tail(h.size() - 1) / h[0];
}

}  // namespace projcent
