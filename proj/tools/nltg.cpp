// Command-line driver: single two-grid solves and convergence studies.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "nltg/errors.hpp"
#include "nltg/study.hpp"

namespace {

int write_rows(const std::vector<nltg::StudyRow>& rows, const std::string& path) {
  nltg::print_table(std::cout, rows);
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) {
      std::cerr << "cannot write " << path << '\n';
      return 1;
    }
    nltg::write_csv(out, rows);
  }
  for (const auto& r : rows) {
    if (!r.ok) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative two-grid finite element solver for strongly nonlinear elliptic problems"};
  app.require_subcommand(1);

  std::string problem = "mcf";
  int degree = 1;
  int sweeps = 1;
  int n_coarse = 8;
  int n_fine = 64;
  nltg::NewtonConfig newton;
  bool no_damping = false;
  std::string out_path;
  std::string mesh_out;

  auto* solve = app.add_subcommand("solve", "Run one coarse/fine case and report the H1 error");
  solve->add_option("--problem", problem, "Problem id (mcf, bratu)")->check(CLI::IsMember({"mcf", "bratu"}));
  solve->add_option("--degree", degree, "Lagrange degree r")->check(CLI::Range(1, 3));
  solve->add_option("--sweeps", sweeps, "Two-grid sweeps k")->check(CLI::PositiveNumber);
  solve->add_option("--nH", n_coarse, "Coarse subdivisions (H = 1/nH)")->check(CLI::PositiveNumber);
  solve->add_option("--nh", n_fine, "Fine subdivisions (h = 1/nh)")->check(CLI::PositiveNumber);
  solve->add_option("--newton-tol", newton.rel_residual_tol, "Relative Newton residual tolerance");
  solve->add_option("--newton-max-iters", newton.max_iters, "Newton iteration cap");
  solve->add_flag("--no-damping", no_damping, "Disable residual-decrease step halving");
  solve->add_option("--out", out_path, "CSV output file");
  solve->add_option("--dump-fine-mesh", mesh_out, "Write the fine mesh as plain text");

  std::string config_path;
  auto* study = app.add_subcommand("study", "Run a convergence study from a JSON config");
  study->add_option("--config", config_path, "Study config (JSON)")->required()->check(CLI::ExistingFile);
  study->add_option("--out", out_path, "CSV output file (overrides output_path)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      if (n_fine < n_coarse) throw nltg::InvalidArgument("--nh must be >= --nH");
      newton.damping = !no_damping;
      const nltg::ProblemDef p = nltg::problem_by_name(problem);
      if (!mesh_out.empty()) {
        std::ofstream m(mesh_out);
        nltg::write_mesh(m, *nltg::mesh_pair(n_coarse, n_fine).second);
      }
      nltg::TwoGridResult tg;
      const auto row = nltg::run_case(p, degree, sweeps, {n_coarse, n_fine}, newton, 0, &tg);
      if (row.ok) {
        for (std::size_t j = 0; j < tg.diagnostics.ellipticity.size(); ++j) {
          fmt::print("iterate {}: ellipticity >= {:.4f}\n", j, tg.diagnostics.ellipticity[j]);
        }
      }
      return write_rows({row}, out_path);
    }
    nltg::StudyConfig cfg = nltg::load_study_config(config_path);
    if (!out_path.empty()) cfg.output_path = out_path;
    return write_rows(nltg::run_study(cfg), cfg.output_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
