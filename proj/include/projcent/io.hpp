#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "projcent/centering.hpp"
#include "projcent/geometry.hpp"
#include "projcent/hilbert.hpp"
#include "projcent/projective.hpp"
#include "projcent/solver.hpp"
#include "projcent/types.hpp"

namespace projcent {

using nlohmann::json;

struct BadProblem : Error { using Error::Error; };

struct BallPayload {
  double radius = 1.0;
  Vec center;
};

// One side of a problem: exactly one of the members is set.
struct SidePayload {
  std::optional<std::vector<Vec>> points;
  std::optional<SimplicialBody> body;
  std::optional<BallPayload> ball;
};

struct ProblemFile {
  int dimension = 0;
  std::string task;
  SidePayload side1;
  SidePayload side2;
  CenteringOptions options;
};

namespace io_detail {

inline Vec parse_vec(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw BadProblem("expected an array of length dimension");
  }
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = j[i].get<double>();
  return v;
}

inline std::vector<Vec> parse_points(const json& j, int d) {
  std::vector<Vec> pts;
  for (const auto& e : j) pts.push_back(parse_vec(e, d));
  if (pts.empty()) throw BadProblem("empty point array");
  return pts;
}

inline SimplicialBody parse_body(const json& j, int d) {
  if (j.contains("vertices")) {
    return to_body(convex_hull(parse_points(j["vertices"], d)));
  }
  if (j.contains("simplices")) {
    SimplicialBody K;
    K.dim = d;
    for (const auto& js : j["simplices"]) {
      Simplex s;
      for (const auto& jv : js) s.vertices.push_back(parse_vec(jv, d));
      if (static_cast<int>(s.vertices.size()) != d + 1) {
        throw BadProblem("simplex needs d+1 vertices");
      }
      K.simplices.push_back(s);
    }
    if (K.simplices.empty()) throw BadProblem("empty simplex list");
    return K;
  }
  throw BadProblem("body payload needs vertices or simplices");
}

inline SidePayload parse_side(const json& j, int d) {
  SidePayload side;
  if (j.contains("points")) {
    side.points = parse_points(j["points"], d);
  } else if (j.contains("body")) {
    side.body = parse_body(j["body"], d);
  } else if (j.contains("ball")) {
    BallPayload b;
    b.radius = j["ball"].value("radius", 1.0);
    b.center = j["ball"].contains("center") ? parse_vec(j["ball"]["center"], d) : Vec(Vec::Zero(d));
    side.ball = b;
  } else {
    throw BadProblem("side payload needs points, body, or ball");
  }
  return side;
}

inline json emit_vec(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace io_detail

inline ProblemFile parse_problem(const json& j) {
  ProblemFile p;
  if (!j.contains("dimension") || !j.contains("task")) {
    throw BadProblem("problem needs dimension and task");
  }
  p.dimension = j["dimension"].get<int>();
  if (p.dimension < 1) throw BadProblem("dimension must be positive");
  p.task = j["task"].get<std::string>();
  if (j.contains("side1")) p.side1 = io_detail::parse_side(j["side1"], p.dimension);
  if (j.contains("side2")) p.side2 = io_detail::parse_side(j["side2"], p.dimension);
  if (j.contains("options")) {
    const json& o = j["options"];
    p.options.solve.tol_grad = o.value("tol", p.options.solve.tol_grad);
    p.options.solve.max_iter = o.value("max_iter", p.options.solve.max_iter);
    p.options.starts = o.value("starts", p.options.starts);
    p.options.seed = o.value("seed", p.options.seed);
  }
  return p;
}

inline json emit_problem(const ProblemFile& p) {
  json j;
  j["dimension"] = p.dimension;
  j["task"] = p.task;
  auto emit_side = [&](const SidePayload& s) -> json {
    json js;
    if (s.points) {
      json a = json::array();
      for (const auto& v : *s.points) a.push_back(io_detail::emit_vec(v));
      js["points"] = a;
    } else if (s.body) {
      json sims = json::array();
      for (const auto& sim : s.body->simplices) {
        json jv = json::array();
        for (const auto& v : sim.vertices) jv.push_back(io_detail::emit_vec(v));
        sims.push_back(jv);
      }
      js["body"] = {{"simplices", sims}};
    } else if (s.ball) {
      js["ball"] = {{"radius", s.ball->radius}, {"center", io_detail::emit_vec(s.ball->center)}};
    }
    return js;
  };
  if (p.side1.points || p.side1.body || p.side1.ball) j["side1"] = emit_side(p.side1);
  if (p.side2.points || p.side2.body || p.side2.ball) j["side2"] = emit_side(p.side2);
  j["options"] = {{"tol", p.options.solve.tol_grad},
                  {"max_iter", p.options.solve.max_iter},
                  {"starts", p.options.starts},
                  {"seed", p.options.seed}};
  return j;
}

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::DivergedToBoundary: return "DivergedToBoundary";
    default: return "MaxIter";
  }
}

inline const char* certificate_kind_name(CertificateKind k) {
  switch (k) {
    case CertificateKind::BodyPair: return "BodyPair";
    case CertificateKind::BallOuter: return "BallOuter";
    default: return "BallInner";
  }
}

inline json emit_report(const CenteringResult& r, double timing_ms) {
  json j;
  json classes = json::array();
  for (int i = 0; i < r.classes(); ++i) {
    const SolveReport& rep = r.reports[i];
    json c;
    c["y"] = io_detail::emit_vec(rep.y_star);
    const Mat& m = r.maps[i].matrix();
    json flat = json::array();
    for (int a = 0; a < m.rows(); ++a) {
      for (int b = 0; b < m.cols(); ++b) flat.push_back(m(a, b));
    }
    c["map"] = flat;
    c["residual"] = r.residuals[i];
    c["hessian_signature"] = {rep.hessian_signature.n_pos, rep.hessian_signature.n_zero,
                              rep.hessian_signature.n_neg};
    if (i < static_cast<int>(r.points.size())) c["point"] = io_detail::emit_vec(r.points[i]);
    classes.push_back(c);
  }
  j["classes"] = classes;
  if (r.certificate) {
    j["certificate"] = {{"kind", certificate_kind_name(r.certificate->kind)},
                        {"measured", r.certificate->measured},
                        {"bound", r.certificate->bound},
                        {"holds", r.certificate->holds}};
  } else {
    j["certificate"] = nullptr;
  }
  SolveStatus status = SolveStatus::MaxIter;
  if (r.classes() > 0) {
    status = SolveStatus::Converged;
  } else {
    for (const auto& rep : r.reports) {
      if (rep.status == SolveStatus::DivergedToBoundary) status = SolveStatus::DivergedToBoundary;
    }
  }
  j["status"] = status_name(status);
  j["timing_ms"] = timing_ms;
  return j;
}

// d=2 figure: input sets, mapped images under the first non-identity class,
// and centroids. The unit box [0,1]^2 maps to [50,950]^2.
class SvgFigure {
 public:
  SvgFigure() {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" "
            "width=\"1000\" height=\"1000\">\n";
    out_ << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
  }

  void polygon(const std::vector<Vec>& pts, const std::string& stroke, const std::string& fill) {
    out_ << "<polygon points=\"";
    for (const auto& p : pts) out_ << sx(p) << "," << sy(p) << " ";
    out_ << "\" stroke=\"" << stroke << "\" fill=\"" << fill
         << "\" fill-opacity=\"0.25\" stroke-width=\"2\"/>\n";
  }

  void dot(const Vec& p, const std::string& fill, double r = 6.0) {
    out_ << "<circle cx=\"" << sx(p) << "\" cy=\"" << sy(p) << "\" r=\"" << r << "\" fill=\""
         << fill << "\"/>\n";
  }

  void cross(const Vec& p, const std::string& stroke) {
    const double x = sx(p), y = sy(p), s = 8.0;
    out_ << "<path d=\"M" << x - s << " " << y - s << " L" << x + s << " " << y + s << " M"
         << x - s << " " << y + s << " L" << x + s << " " << y - s << "\" stroke=\"" << stroke
         << "\" stroke-width=\"2\"/>\n";
  }

  std::string str() {
    return out_.str() + "</svg>\n";
  }

 private:
  static double sx(const Vec& p) { return 50.0 + 900.0 * p[0]; }
  static double sy(const Vec& p) { return 950.0 - 900.0 * p[1]; }

  std::ostringstream out_;
};

}  // namespace projcent
