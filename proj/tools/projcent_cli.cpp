// Command-line front end: JSON problem ingestion, solver orchestration, report
// and SVG emission, plus a built-in verification suite of worked instances.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "projcent/centering.hpp"
#include "projcent/io.hpp"
#include "projcent/polarity.hpp"

namespace pc = projcent;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pc::BadProblem("cannot open input file: " + path);
  json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
}

const std::vector<pc::Vec>& require_points(const pc::SidePayload& s, const char* what) {
  if (!s.points) throw pc::BadProblem(std::string("task requires points payload for ") + what);
  return *s.points;
}

const pc::SimplicialBody& require_body(const pc::SidePayload& s, const char* what) {
  if (!s.body) throw pc::BadProblem(std::string("task requires body payload for ") + what);
  return *s.body;
}

pc::Vec require_single_point(const pc::SidePayload& s, const char* what) {
  const auto& pts = require_points(s, what);
  if (pts.size() != 1) throw pc::BadProblem(std::string("expected a single point for ") + what);
  return pts[0];
}

void require_unit_ball(const pc::BallPayload& b) {
  if (std::abs(b.radius - 1.0) > 1e-12 || b.center.norm() > 1e-12) {
    throw pc::BadProblem("only the unit ball at the origin is supported");
  }
}

// Dispatch the centering tasks; hilbert and classes are handled separately.
pc::CenteringResult run_centering(const pc::ProblemFile& p) {
  const auto& opts = p.options;
  if (p.task == "fit-point") {
    return pc::fit_point_to_points(require_points(p.side1, "side1"),
                                   require_single_point(p.side2, "side2"), opts);
  }
  if (p.task == "fit-points") {
    return pc::fit_points_to_points(require_points(p.side1, "side1"),
                                    require_points(p.side2, "side2"), opts);
  }
  if (p.task == "fit-point-body") {
    return pc::fit_point_to_body(require_body(p.side1, "side1"),
                                 require_single_point(p.side2, "side2"), opts);
  }
  if (p.task == "fit-points-body") {
    return pc::fit_points_to_body(require_body(p.side1, "side1"),
                                  require_points(p.side2, "side2"), opts);
  }
  if (p.task == "fit-bodies") {
    if (p.side2.ball) {
      require_unit_ball(*p.side2.ball);
      return pc::fit_body_to_ball(pc::body_hull(require_body(p.side1, "side1")), opts);
    }
    return pc::fit_body_to_body(require_body(p.side1, "side1"),
                                require_body(p.side2, "side2"), opts);
  }
  if (p.task == "santalo-pair") {
    if (p.side2.ball) {
      require_unit_ball(*p.side2.ball);
      return pc::ball_pair_santalo(pc::body_hull(require_body(p.side1, "side1")), opts);
    }
    return pc::santalo_pair(pc::body_hull(require_body(p.side1, "side1")),
                            pc::body_hull(require_body(p.side2, "side2")), opts);
  }
  if (p.task == "mobius") {
    auto [map, centered] = pc::mobius_center(require_points(p.side1, "side1"), opts);
    pc::Vec s = pc::Vec::Zero(p.dimension);
    for (const auto& c : centered) s += c;
    pc::CenteringResult r;
    pc::SolveReport rep;
    rep.y_star = pc::coset_infinity_vector(map).value_or(pc::Vec::Zero(p.dimension));
    rep.status = pc::SolveStatus::Converged;
    r.reports.push_back(rep);
    r.maps.push_back(map);
    r.residuals.push_back(s.norm() / static_cast<double>(centered.size()));
    return r;
  }
  throw pc::BadProblem("unknown task: " + p.task);
}

json run_report(const pc::ProblemFile& p) {
  const auto t0 = std::chrono::steady_clock::now();
  json rep;
  if (p.task == "santalo") {
    const pc::Vec y = pc::santalo_point(pc::body_hull(require_body(p.side1, "side1")), p.options);
    rep["classes"] = json::array();
    rep["point"] = pc::io_detail::emit_vec(y);
    rep["certificate"] = nullptr;
    rep["status"] = "Converged";
  } else if (p.task == "hilbert") {
    const pc::Polytope K1 = pc::body_hull(require_body(p.side1, "side1"));
    const pc::Polytope K2 = pc::body_hull(require_body(p.side2, "side2"));
    rep["diameter"] = pc::hilbert_diameter(K1, K2);
    rep["width"] = pc::hilbert_width(K1, K2);
    rep["status"] = "Converged";
  } else if (p.task == "classes") {
    const auto c = pc::count_centering_chambers(require_points(p.side1, "side1"),
                                                require_single_point(p.side2, "side2"));
    rep["admissible"] = c.admissible;
    rep["total"] = c.total;
    rep["status"] = "Converged";
  } else {
    const pc::CenteringResult r = run_centering(p);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0).count();
    return pc::emit_report(r, ms);
  }
  rep["timing_ms"] = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<pc::Vec> body_vertex_cycle(const pc::SimplicialBody& K) {
  const pc::Polytope hull = pc::body_hull(K);
  if (hull.dim != 2) return hull.vertices;
  // Order the hull vertices counterclockwise for polygon rendering.
  pc::Vec c = pc::Vec::Zero(2);
  for (const auto& v : hull.vertices) c += v;
  c /= static_cast<double>(hull.vertices.size());
  std::vector<pc::Vec> ring = hull.vertices;
  std::sort(ring.begin(), ring.end(), [&](const pc::Vec& a, const pc::Vec& b) {
    return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
  });
  return ring;
}

std::string render_figure(const pc::ProblemFile& p) {
  if (p.dimension != 2) throw pc::BadProblem("figures are rendered for dimension 2 only");
  pc::SvgFigure fig;

  auto draw_side = [&](const pc::SidePayload& s, const std::string& color) {
    if (s.points) {
      pc::Vec mean = pc::Vec::Zero(2);
      for (const auto& v : *s.points) {
        fig.dot(v, color);
        mean += v;
      }
      fig.cross(mean / static_cast<double>(s.points->size()), color);
    } else if (s.body) {
      fig.polygon(body_vertex_cycle(*s.body), color, color);
      fig.cross(pc::body_moments(*s.body).centroid(), color);
    } else if (s.ball) {
      std::vector<pc::Vec> ring;
      for (const auto& u : pc::detail::sphere_samples(2, 90)) {
        ring.push_back(pc::Vec(s.ball->center + s.ball->radius * u));
      }
      fig.polygon(ring, color, "none");
      fig.cross(s.ball->center, color);
    }
  };
  draw_side(p.side1, "steelblue");
  draw_side(p.side2, "firebrick");

  // Mapped images under the first class beyond the identity, if any.
  const pc::CenteringResult r = run_centering(p);
  int pick = -1;
  for (int i = 0; i < r.classes(); ++i) {
    if (r.reports[i].y_star.norm() > 1e-8) { pick = i; break; }
  }
  if (pick < 0 && r.classes() > 0) pick = 0;
  if (pick >= 0) {
    const pc::ProjectiveMap& map = r.maps[pick];
    auto draw_mapped = [&](const pc::SidePayload& s, const std::string& color) {
      if (s.points) {
        pc::Vec mean = pc::Vec::Zero(2);
        for (const auto& v : *s.points) {
          const pc::Vec w = map.apply(v);
          fig.dot(w, color, 4.0);
          mean += w;
        }
        fig.cross(mean / static_cast<double>(s.points->size()), color);
      } else if (s.body) {
        std::vector<pc::Vec> ring;
        for (const auto& v : body_vertex_cycle(*s.body)) ring.push_back(map.apply(v));
        fig.polygon(ring, color, color);
        fig.cross(pc::mapped_body_moments(*s.body, map).centroid(), color);
      } else if (s.ball) {
        std::vector<pc::Vec> ring;
        for (const auto& u : pc::detail::sphere_samples(2, 90)) {
          ring.push_back(map.apply(pc::Vec(s.ball->center + s.ball->radius * u)));
        }
        fig.polygon(ring, color, "none");
      }
    };
    draw_mapped(p.side1, "darkorange");
    draw_mapped(p.side2, "seagreen");
  }
  return fig.str();
}

// ---------------------------------------------------------------------------
// Built-in verification suite. Each entry is a ProblemFile instance stored as
// data and run through the same dispatch as the solve subcommand, plus a check
// against the closed-form values of the worked examples.

struct VerifyCase {
  std::string name;
  std::string what;
  json problem;
  std::function<bool(const pc::ProblemFile&, std::string&)> check;
};

bool has_class_at(const pc::CenteringResult& r, const pc::Vec& y, double tol = 1e-7) {
  for (const auto& rep : r.reports) {
    if (rep.status == pc::SolveStatus::Converged && (rep.y_star - y).norm() <= tol) return true;
  }
  return false;
}

double mapped_mean_coord(const pc::ProjectiveMap& m, const std::vector<pc::Vec>& pts, int coord) {
  pc::Vec s = pc::Vec::Zero(m.dim());
  for (const auto& p : pts) s += m.apply(p);
  return s[coord] / static_cast<double>(pts.size());
}

json cusp_body_problem() {
  // |y| <= (1-x)^5 over x in [-1,1], graded toward the cusp at x = 1.
  const int m = 400;
  json sims = json::array();
  auto width = [](double x) { return std::pow(1.0 - x, 5); };
  std::vector<double> xs;
  for (int k = 0; k <= m; ++k) {
    const double t = static_cast<double>(k) / m;
    xs.push_back(-1.0 + 2.0 * (1.0 - std::pow(1.0 - t, 3)));
  }
  for (int k = 0; k < m; ++k) {
    const double x0 = xs[k], x1 = xs[k + 1];
    const double w0 = width(x0), w1 = width(x1);
    if (w1 > 1e-16) {
      sims.push_back({{x0, -w0}, {x1, -w1}, {x1, w1}});
      sims.push_back({{x0, -w0}, {x1, w1}, {x0, w0}});
    } else {
      sims.push_back({{x0, -w0}, {x1, 0.0}, {x0, w0}});
    }
  }
  return {{"dimension", 2},
          {"task", "fit-point-body"},
          {"side1", {{"body", {{"simplices", sims}}}}},
          {"side2", {{"points", {{0.0, 0.0}}}}},
          {"options", {{"starts", 6}}}};
}

std::vector<VerifyCase> verify_cases() {
  const double s13 = 3.0 / std::sqrt(13.0);
  const double s7 = 2.0 / std::sqrt(7.0);
  const double h = 2.0 / std::sqrt(5.0);
  std::vector<VerifyCase> cases;

  cases.push_back(
      {"CounterManyMany1", "centroids 1/12",
       {{"dimension", 1},
        {"task", "fit-points"},
        {"side1", {{"points", {{-1.0}, {0.0}, {1.0}}}}},
        {"side2", {{"points", {{-s13}, {s13}}}}}},
       [](const pc::ProblemFile& p, std::string& why) {
         const auto r = run_centering(p);
         pc::Vec y(1);
         y << -1.0 / 3.0;
         if (r.classes() < 2 || !has_class_at(r, pc::Vec(pc::Vec::Zero(1))) ||
             !has_class_at(r, y)) {
           why = "expected classes at y=0 and y=-1/3";
           return false;
         }
         pc::Mat M(2, 2);
         M << 3, -1, 0, 1;  // x -> x/(3-x)
         const pc::ProjectiveMap phi(M);
         const double g1 = mapped_mean_coord(phi, *p.side1.points, 0);
         const double g2 = mapped_mean_coord(phi, *p.side2.points, 0);
         if (std::abs(g1 - 1.0 / 12.0) > 1e-10 || std::abs(g2 - 1.0 / 12.0) > 1e-10) {
           why = "mapped centroids differ from 1/12";
           return false;
         }
         return true;
       }});

  cases.push_back(
      {"CounterManyMany2", "centroids (1/6,0)",
       {{"dimension", 2},
        {"task", "fit-points"},
        {"side1", {{"points", {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}}}},
        {"side2", {{"points", {{s7, 0.0}, {-s7, 0.0}}}}}},
       [](const pc::ProblemFile& p, std::string& why) {
         const auto r = run_centering(p);
         pc::Vec y(2);
         y << -0.5, 0.0;
         if (r.classes() < 2 || !has_class_at(r, pc::Vec(pc::Vec::Zero(2))) ||
             !has_class_at(r, y)) {
           why = "expected classes at y=0 and y=(-1/2,0)";
           return false;
         }
         pc::Mat M(3, 3);
         M << 2, -1, 0, 0, 1, 0, 0, 0, 1;  // (x,y) -> (x,y)/(2-x)
         const pc::ProjectiveMap phi(M);
         const double g1 = mapped_mean_coord(phi, *p.side1.points, 0);
         const double g2 = mapped_mean_coord(phi, *p.side2.points, 0);
         if (std::abs(g1 - 1.0 / 6.0) > 1e-10 || std::abs(g2 - 1.0 / 6.0) > 1e-10) {
           why = "mapped centroids differ from (1/6,0)";
           return false;
         }
         return true;
       }});

  cases.push_back(
      {"CounterBodyMany", "centroids (1/12,0)",
       {{"dimension", 2},
        {"task", "fit-points-body"},
        {"side1",
         {{"body", {{"vertices", {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}}}}}},
        {"side2", {{"points", {{s13, 0.0}, {-s13, 0.0}}}}}},
       [](const pc::ProblemFile& p, std::string& why) {
         const auto r = run_centering(p);
         pc::Vec y(2);
         y << -1.0 / 3.0, 0.0;
         if (r.classes() < 2 || !has_class_at(r, pc::Vec(pc::Vec::Zero(2))) ||
             !has_class_at(r, y)) {
           why = "expected classes at y=0 and y=(-1/3,0)";
           return false;
         }
         pc::Mat M(3, 3);
         M << 3, -1, 0, 0, 1, 0, 0, 0, 1;  // (x,y) -> (x,y)/(3-x)
         const pc::ProjectiveMap phi(M);
         const pc::Vec gb = pc::mapped_body_moments(*p.side1.body, phi).centroid();
         const double gp = mapped_mean_coord(phi, *p.side2.points, 0);
         if (std::abs(gb[0] - 1.0 / 12.0) > 1e-10 || std::abs(gb[1]) > 1e-10 ||
             std::abs(gp - 1.0 / 12.0) > 1e-10) {
           why = "mapped centroids differ from (1/12,0)";
           return false;
         }
         return true;
       }});

  cases.push_back(
      {"CounterBodyBody", "trapezoid centroid (0,0)",
       {{"dimension", 2},
        {"task", "fit-bodies"},
        {"side1", {{"body", {{"vertices", {{0.4, h}, {-0.4, h}, {-0.4, -h}, {0.4, -h}}}}}}},
        {"side2", {{"ball", {{"radius", 1.0}}}}}},
       [h](const pc::ProblemFile& p, std::string& why) {
         const auto r = run_centering(p);
         pc::Vec y(2);
         y << 0.0, 0.5;
         pc::Vec ym = -y;
         if (r.classes() < 2 || !has_class_at(r, pc::Vec(pc::Vec::Zero(2))) ||
             !(has_class_at(r, y, 1e-6) || has_class_at(r, ym, 1e-6))) {
           why = "expected classes at y=0 and y=(0,+-1/2)";
           return false;
         }
         for (double res : r.residuals) {
           if (res > 1e-6) { why = "class residual above 1e-6"; return false; }
         }
         // Disk-fixing map recentring the rectangle of half-height 2/sqrt(5):
         // (x,y) -> (sqrt(3) x, 2y+1)/(y+2).
         pc::Mat M(3, 3);
         M << 2, 0, 1, 0, std::sqrt(3.0), 0, 1, 0, 2;
         const pc::Vec g = pc::mapped_body_moments(*p.side1.body, pc::ProjectiveMap(M)).centroid();
         if (g.norm() > 1e-8) { why = "trapezoid centroid not at the origin"; return false; }
         return true;
       }});

  cases.push_back(
      {"CounterPointBody", "no admissible map", cusp_body_problem(),
       [](const pc::ProblemFile& p, std::string& why) {
         const auto r = run_centering(p);
         if (r.classes() != 0) { why = "unexpected interior critical class"; return false; }
         bool diverged = false;
         for (const auto& rep : r.reports) {
           if (rep.status == pc::SolveStatus::DivergedToBoundary) diverged = true;
         }
         if (!diverged) { why = "solver did not report divergence"; return false; }
         return true;
       }});

  cases.push_back(
      {"dPlus1Points", "support count obstruction",
       {{"dimension", 2},
        {"task", "fit-points-body"},
        {"side1",
         {{"body",
           {{"simplices",
             {{{-1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, {{-1.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}}}}}}}},
        {"side2", {{"points", {{-1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}}}}},
       [](const pc::ProblemFile& p, std::string& why) {
         try {
           run_centering(p);
         } catch (const pc::SupportCountViolated&) {
           return true;
         }
         why = "expected the support-count obstruction";
         return false;
       }});

  return cases;
}

int run_verify() {
  bool all_ok = true;
  for (const auto& c : verify_cases()) {
    bool ok = false;
    std::string why;
    try {
      const pc::ProblemFile p = pc::parse_problem(c.problem);
      ok = c.check(p, why);
    } catch (const std::exception& e) {
      why = e.what();
    }
    std::cout << c.name << ": " << c.what << " " << (ok ? "PASS" : "FAIL");
    if (!ok && !why.empty()) std::cout << " (" << why << ")";
    std::cout << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective centroid fitting"};
  app.require_subcommand(1);

  std::string input, output, svg_path;
  double tol = -1.0;
  int max_iter = -1, starts = -1;
  long long seed = -1;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* opt = sub->add_option("-i,--input", input, "problem JSON file");
    if (needs_input) opt->required();
    sub->add_option("-o,--output", output, "output file (default stdout)");
    sub->add_option("--tol", tol, "gradient tolerance");
    sub->add_option("--max-iter", max_iter, "iteration cap");
    sub->add_option("--starts", starts, "multistart count");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--svg", svg_path, "also write an SVG figure");
  };

  auto* solve = app.add_subcommand("solve", "solve a centering problem");
  auto* hilbert = app.add_subcommand("hilbert", "Hilbert diameter and width of a body pair");
  auto* classes = app.add_subcommand("classes", "count centering chambers");
  auto* figure = app.add_subcommand("figure", "render a d=2 problem as SVG");
  auto* verify = app.add_subcommand("verify-examples", "run the built-in verification suite");
  add_common(solve, true);
  add_common(hilbert, true);
  add_common(classes, true);
  add_common(figure, true);
  add_common(verify, false);

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) return run_verify();

  try {
    pc::ProblemFile p = pc::parse_problem(load_json(input));
    if (tol > 0.0) p.options.solve.tol_grad = tol;
    if (max_iter > 0) p.options.solve.max_iter = max_iter;
    if (starts > 0) p.options.starts = starts;
    if (seed >= 0) p.options.seed = static_cast<std::uint64_t>(seed);

    if (figure->parsed()) {
      write_text(output.empty() ? svg_path : output, render_figure(p));
      return 0;
    }
    const json rep = run_report(p);
    write_text(output, rep.dump(2) + "\n");
    if (!svg_path.empty() && p.dimension == 2) write_text(svg_path, render_figure(p));
    return rep.value("status", "") == "MaxIter" ? 2 : 0;
  } catch (const pc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
