#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "projcent/functionals.hpp"
#include "projcent/types.hpp"

namespace projcent {

struct SolveOptions {
  double tol_grad = 1e-10;
  // Accept a critical point at this looser tolerance when the gradient norm
  // stops decreasing (floating-point floor of the moment sums).
  double tol_stall = 1e-8;
  int max_iter = 200;
  double backtrack = 0.5;
  double armijo = 1e-4;
  std::uint64_t seed = 0;
};

struct Signature {
  int n_pos = 0;
  int n_zero = 0;
  int n_neg = 0;

  bool operator==(const Signature&) const = default;
};

enum class SolveStatus { Converged, DivergedToBoundary, MaxIter };

struct SolveReport {
  Vec y_star;
  double grad_norm = 0.0;
  int iterations = 0;
  Signature hessian_signature;
  SolveStatus status = SolveStatus::MaxIter;
};

inline Signature signature_of(const Mat& h, double rel_zero = 1e-8) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Vec ev = es.eigenvalues();
  const double cutoff = rel_zero * std::max(1e-300, ev.cwiseAbs().maxCoeff());
  Signature sig;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > cutoff) ++sig.n_pos;
    else if (ev[i] < -cutoff) ++sig.n_neg;
    else ++sig.n_zero;
  }
  return sig;
}

inline Signature classify(const Functional& f, const Vec& y) {
  if (f.slack(y) <= kTauDom) throw OutsideDomain("classification point outside domain");
  return signature_of(f.hessian(y));
}

namespace detail {

// Largest step t <= 1 along dir keeping the iterate strictly interior.
inline double domain_step(const Functional& f, const Vec& y, const Vec& dir, double shrink) {
  double t = 1.0;
  for (int k = 0; k < 120; ++k) {
    if (f.slack(y + t * dir) > kTauDom) return t;
    t *= shrink;
  }
  return 0.0;
}

}  // namespace detail

// Damped Newton iteration toward a critical point of f. While the local Hessian
// matches the functional's orientation the step is a monotone line-searched
// Newton step on the objective; otherwise it is a Newton step on the gradient
// system with a |grad|^2 merit, which also reaches saddle-type critical points.
inline SolveReport solve_critical(const Functional& f, const Vec& y0,
                                  const SolveOptions& opts = {}) {
  if (f.slack(y0) <= kTauDom) throw StartOutsideDomain("start point outside domain");
  const double orient = f.orientation() == Orientation::Minimize ? 1.0 : -1.0;
  const int d = f.dim();

  Vec y = y0;
  SolveReport report;
  report.y_star = y;
  double prev_gnorm = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    if (f.slack(y) < 1e-11) {
      report.y_star = y;
      report.iterations = iter;
      report.status = SolveStatus::DivergedToBoundary;
      return report;
    }
    const Vec g = f.gradient(y);
    const double gnorm = g.norm();
    if (gnorm > 0.9 * prev_gnorm) ++stalled;
    else stalled = 0;
    prev_gnorm = gnorm;
    report.y_star = y;
    report.grad_norm = gnorm;
    report.iterations = iter;
    if (gnorm <= opts.tol_grad || (gnorm <= opts.tol_stall && stalled >= 3)) {
      report.status = SolveStatus::Converged;
      report.hessian_signature = signature_of(f.hessian(y));
      return report;
    }
    if (iter == opts.max_iter) break;

    const Mat h = f.hessian(y);
    Eigen::LLT<Mat> llt(orient * h);
    const bool oriented = llt.info() == Eigen::Success;

    Vec dir;
    if (oriented) {
      dir = -llt.solve(orient * g);
    } else {
      Eigen::FullPivLU<Mat> lu(h);
      dir = lu.isInvertible() ? Vec(-lu.solve(g)) : Vec(-orient * g);
    }
    if (!dir.allFinite() || dir.norm() == 0.0) dir = -orient * g;

    double t = detail::domain_step(f, y, dir, opts.backtrack);
    if (t == 0.0) {
      report.status = SolveStatus::DivergedToBoundary;
      return report;
    }
    bool accepted = false;
    if (oriented) {
      const double base = orient * f.value(y);
      const double slope = orient * g.dot(dir);
      for (int k = 0; k < 60 && t > 0.0; ++k, t *= opts.backtrack) {
        if (f.slack(y + t * dir) <= kTauDom) continue;
        if (orient * f.value(y + t * dir) <= base + opts.armijo * t * slope) {
          y += t * dir;
          accepted = true;
          break;
        }
      }
    } else {
      for (int k = 0; k < 60 && t > 0.0; ++k, t *= opts.backtrack) {
        if (f.slack(y + t * dir) <= kTauDom) continue;
        if (f.gradient(y + t * dir).norm() < gnorm) {
          y += t * dir;
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      // No progress in either mode; a vanishing step near the boundary signals
      // divergence, a small gradient a critical point at the noise floor.
      if (f.slack(y) < 1e-8) {
        report.status = SolveStatus::DivergedToBoundary;
        return report;
      }
      if (gnorm <= opts.tol_stall) {
        report.status = SolveStatus::Converged;
        report.hessian_signature = signature_of(f.hessian(y));
        return report;
      }
      break;
    }
  }
  report.status = f.slack(report.y_star) < 1e-11 ? SolveStatus::DivergedToBoundary
                                                 : SolveStatus::MaxIter;
  return report;
}

// Multistart from interior points at decreasing slack levels; converged reports
// are deduplicated by distance in y-space.
inline std::vector<SolveReport> multistart(const Functional& f, int n_starts,
                                           std::uint64_t seed, const SolveOptions& opts = {},
                                           double dedup_tol = 1e-6) {
  const int d = f.dim();
  const Vec center = Vec::Zero(d);
  const double s0 = f.slack(center);
  if (s0 <= kTauDom) throw StartOutsideDomain("origin not interior to the domain");
  static constexpr double kLevels[] = {0.5, 0.1, 0.02};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<SolveReport> distinct;
  std::vector<SolveReport> diverged;

  std::vector<Vec> starts{center};
  for (int k = 1; k < n_starts; ++k) {
    Vec u(d);
    for (int i = 0; i < d; ++i) u[i] = gauss(rng);
    u.normalize();
    const double target = kLevels[k % 3] * s0;
    double hi = 1.0;
    while (f.slack(hi * u) > target && hi < 1e8) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (f.slack(mid * u) > target) lo = mid;
      else hi = mid;
    }
    starts.push_back(lo * u);
  }

  for (const Vec& y0 : starts) {
    if (f.slack(y0) <= kTauDom) continue;
    SolveReport r = solve_critical(f, y0, opts);
    if (r.status == SolveStatus::Converged) {
      bool dup = false;
      for (const auto& prev : distinct) {
        if ((prev.y_star - r.y_star).norm() < dedup_tol) { dup = true; break; }
      }
      if (!dup) distinct.push_back(std::move(r));
    } else if (r.status == SolveStatus::DivergedToBoundary) {
      diverged.push_back(std::move(r));
    }
  }
  if (distinct.empty() && !diverged.empty()) distinct.push_back(diverged.front());
  return distinct;
}

}  // namespace projcent
