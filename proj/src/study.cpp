#include "nltg/study.hpp"

#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "nltg/errors.hpp"

namespace nltg {

namespace {

template <typename Visit>
void for_each_error_point(const FeSpace& space, const StateVector& state, const ExactFn& exact, int quad_degree,
                          Visit&& visit) {
  if (!state.space || state.size() != static_cast<std::size_t>(space.num_dofs())) {
    throw InvalidArgument("error norm: state does not match the space");
  }
  const QuadRule rule = quad_rule(quad_degree > 0 ? quad_degree : error_quadrature_degree(space.degree()));
  for (int t = 0; t < space.num_elements(); ++t) {
    const ElementGeometry geo = space.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const PointValue w = evaluate_on_triangle(state, t, rule.points[q]);
      const PointValue u = exact(geo.map(rule.points[q]));
      visit(t, rule.weights[q] * geo.area, u.value - w.value,
            Vec2{u.gradient[0] - w.gradient[0], u.gradient[1] - w.gradient[1]});
    }
  }
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

double h1_error(const FeSpace& space, const StateVector& state, const ExactFn& exact, int quad_degree) {
  // Per-element partial sums keep the total independent of evaluation order.
  std::vector<double> per_element(space.num_elements(), 0.0);
  for_each_error_point(space, state, exact, quad_degree, [&](int t, double w, double e, Vec2 g) {
    per_element[t] += w * (e * e + g[0] * g[0] + g[1] * g[1]);
  });
  double total = 0.0;
  for (double v : per_element) total += v;
  return std::sqrt(total);
}

double w1inf_error(const FeSpace& space, const StateVector& state, const ExactFn& exact, int quad_degree) {
  double worst = 0.0;
  for_each_error_point(space, state, exact, quad_degree, [&](int, double, double e, Vec2 g) {
    worst = std::max({worst, std::abs(e), std::abs(g[0]), std::abs(g[1])});
  });
  return worst;
}

StudyConfig study_config_from_json(const std::string& text) {
  StudyConfig cfg;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    cfg.problem_id = j.value("problem_id", cfg.problem_id);
    cfg.degree = j.value("degree", cfg.degree);
    cfg.sweeps = j.value("sweeps", cfg.sweeps);
    for (const auto& c : j.at("cases")) {
      if (!c.is_array() || c.size() != 2) throw InvalidArgument("each case must be [nH, nh]");
      cfg.cases.push_back({c[0].get<int>(), c[1].get<int>()});
    }
    if (j.contains("newton")) {
      const auto& n = j["newton"];
      cfg.newton.rel_residual_tol = n.value("rel_residual_tol", cfg.newton.rel_residual_tol);
      cfg.newton.max_iters = n.value("max_iters", cfg.newton.max_iters);
      cfg.newton.damping = n.value("damping", cfg.newton.damping);
    }
    cfg.quad_error_degree = j.value("quad_error_degree", 2 * cfg.degree + 4);
    cfg.output_path = j.value("output_path", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("study config: ") + e.what());
  }
  if (cfg.cases.empty()) throw InvalidArgument("study config: cases must be nonempty");
  for (const auto& c : cfg.cases) {
    if (c.n_coarse < 1 || c.n_fine < c.n_coarse) throw InvalidArgument("study config: need nh >= nH >= 1");
  }
  if (cfg.degree < 1 || cfg.degree > 3) throw InvalidArgument("study config: degree must be 1, 2 or 3");
  if (cfg.sweeps < 1) throw InvalidArgument("study config: sweeps must be >= 1");
  return cfg;
}

StudyConfig load_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open study config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return study_config_from_json(ss.str());
}

std::pair<std::shared_ptr<const TriMesh>, std::shared_ptr<const TriMesh>> mesh_pair(int n_coarse, int n_fine) {
  if (n_coarse < 1 || n_fine < n_coarse) throw InvalidArgument("mesh_pair: need n_fine >= n_coarse >= 1");
  auto coarse = uniform_triangulation(n_coarse);
  if (n_fine % n_coarse == 0 && is_power_of_two(n_fine / n_coarse)) {
    int levels = 0;
    for (int ratio = n_fine / n_coarse; ratio > 1; ratio /= 2) ++levels;
    return {coarse, uniform_refine(coarse, levels)};
  }
  return {coarse, uniform_triangulation(n_fine)};
}

StudyRow run_case(const ProblemDef& problem, int degree, int sweeps, StudyCase c, const NewtonConfig& newton,
                  int quad_error_degree, TwoGridResult* result) {
  StudyRow row;
  row.H = 1.0 / c.n_coarse;
  row.h = 1.0 / c.n_fine;
  row.r = degree;
  row.k = sweeps;
  row.h1_error = std::numeric_limits<double>::quiet_NaN();
  row.normalized = std::numeric_limits<double>::quiet_NaN();
  if (!problem.exact) throw InvalidArgument("run_case: problem has no exact solution");
  const auto start = std::chrono::steady_clock::now();
  try {
    auto [coarse_mesh, fine_mesh] = mesh_pair(c.n_coarse, c.n_fine);
    const SpacePtr coarse = build_space(coarse_mesh, degree);
    const SpacePtr fine = build_space(fine_mesh, degree);
    TwoGridResult tg = iterative_two_grid(problem, coarse, fine, sweeps, newton);
    row.h1_error = h1_error(*fine, tg.final_iterate(), *problem.exact, quad_error_degree);
    row.normalized = row.h1_error / normalization(row.H, row.h, degree, sweeps);
    row.newton_iters_coarse = tg.newton_iteration_counts.front();
    row.newton_iters_corrections.assign(tg.newton_iteration_counts.begin() + 1, tg.newton_iteration_counts.end());
    row.ok = true;
    if (result) *result = std::move(tg);
  } catch (const std::exception& e) {
    row.ok = false;
    row.message = e.what();
  }
  row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<StudyRow> run_study(const StudyConfig& cfg) {
  const ProblemDef problem = problem_by_name(cfg.problem_id);
  std::vector<StudyRow> rows;
  rows.reserve(cfg.cases.size());
  for (const auto& c : cfg.cases) {
    rows.push_back(run_case(problem, cfg.degree, cfg.sweeps, c, cfg.newton, cfg.quad_error_degree));
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
  out << "H,h,r,k,h1_error,normalized,newton_iters_coarse,newton_iters_corrections,wall_seconds\n";
  for (const auto& r : rows) {
    if (r.ok) {
      out << fmt::format("{},{},{},{},{:.5e},{:.6f},{},{},{:.3f}\n", r.H, r.h, r.r, r.k, r.h1_error, r.normalized,
                         r.newton_iters_coarse, join_ints(r.newton_iters_corrections), r.wall_seconds);
    } else {
      out << fmt::format("{},{},{},{},nan,nan,-1,,{:.3f}\n", r.H, r.h, r.r, r.k, r.wall_seconds);
    }
  }
}

std::vector<StudyRow> read_csv(std::istream& in) {
  std::vector<StudyRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 9) throw InvalidArgument("read_csv: expected 9 columns in '" + line + "'");
    StudyRow r;
    r.H = std::stod(f[0]);
    r.h = std::stod(f[1]);
    r.r = std::stoi(f[2]);
    r.k = std::stoi(f[3]);
    r.h1_error = std::stod(f[4]);
    r.normalized = std::stod(f[5]);
    r.newton_iters_coarse = std::stoi(f[6]);
    std::stringstream cs(f[7]);
    while (std::getline(cs, cell, ';')) {
      if (!cell.empty()) r.newton_iters_corrections.push_back(std::stoi(cell));
    }
    r.wall_seconds = std::stod(f[8]);
    r.ok = std::isfinite(r.h1_error);
    rows.push_back(std::move(r));
  }
  return rows;
}

void print_table(std::ostream& out, const std::vector<StudyRow>& rows) {
  out << fmt::format("{:>10} {:>10} {:>3} {:>3} {:>12} {:>10} {:>8} {:>8} {:>9}\n", "H", "h", "r", "k", "H1 error",
                     "normalized", "EOC(h)", "EOC(H)", "seconds");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::string eoc_h = "-";
    std::string eoc_H = "-";
    if (i > 0 && r.ok && rows[i - 1].ok) {
      const auto& p = rows[i - 1];
      const double le = std::log(p.h1_error / r.h1_error);
      if (p.h != r.h) eoc_h = fmt::format("{:.3f}", le / std::log(p.h / r.h));
      if (p.H != r.H) eoc_H = fmt::format("{:.3f}", le / std::log(p.H / r.H));
    }
    const std::string label_H = fmt::format("1/{}", static_cast<int>(std::lround(1.0 / r.H)));
    const std::string label_h = fmt::format("1/{}", static_cast<int>(std::lround(1.0 / r.h)));
    if (r.ok) {
      out << fmt::format("{:>10} {:>10} {:>3} {:>3} {:>12.5e} {:>10.6f} {:>8} {:>8} {:>9.3f}\n", label_H, label_h, r.r,
                         r.k, r.h1_error, r.normalized, eoc_h, eoc_H, r.wall_seconds);
    } else {
      out << fmt::format("{:>10} {:>10} {:>3} {:>3} FAILED: {}\n", label_H, label_h, r.r, r.k, r.message);
    }
  }
}

}  // namespace nltg
