#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nltg/problem.hpp"
#include "nltg/twogrid.hpp"

namespace nltg {

using ExactFn = std::function<PointValue(Point2)>;

inline int error_quadrature_degree(int r) { return 2 * r + 4; }

/// (integral of (u - w)^2 + |grad u - grad w|^2)^{1/2}, element by element.
/// `quad_degree` <= 0 selects 2r + 4.
double h1_error(const FeSpace& space, const StateVector& state, const ExactFn& exact, int quad_degree = 0);

/// Largest max(|u - w|, |grad(u - w)|_inf) over the error quadrature points.
/// A sampled stand-in for the W^{1,inf} norm, not a true supremum.
double w1inf_error(const FeSpace& space, const StateVector& state, const ExactFn& exact, int quad_degree = 0);

struct StudyCase {
  int n_coarse = 1;
  int n_fine = 1;
};

struct StudyConfig {
  std::string problem_id = "mcf";
  int degree = 1;
  int sweeps = 1;
  std::vector<StudyCase> cases;
  NewtonConfig newton;
  int quad_error_degree = 0;  // 0: 2r + 4
  std::string output_path;
};

/// Parses the JSON layout used by `nltg study --config`.
StudyConfig study_config_from_json(const std::string& text);
StudyConfig load_study_config(const std::string& path);

struct StudyRow {
  double H = 0.0;
  double h = 0.0;
  int r = 0;
  int k = 0;
  double h1_error = 0.0;
  double normalized = 0.0;  // h1_error / max(H^{r+k}, h^r)
  int newton_iters_coarse = -1;
  std::vector<int> newton_iters_corrections;
  double wall_seconds = 0.0;
  bool ok = false;
  std::string message;
};

/// Builds the mesh pair for a case: the fine mesh is a refinement chain of
/// the coarse one when n_fine / n_coarse is a power of two, otherwise an
/// independent structured mesh (still nested whenever n_coarse divides n_fine).
std::pair<std::shared_ptr<const TriMesh>, std::shared_ptr<const TriMesh>> mesh_pair(int n_coarse, int n_fine);

/// Solves one case; fills a row and optionally hands back the full result.
StudyRow run_case(const ProblemDef& problem, int degree, int sweeps, StudyCase c, const NewtonConfig& newton,
                  int quad_error_degree = 0, TwoGridResult* result = nullptr);

/// Runs every case in order. Failed cases are reported in their row and do
/// not stop the study.
std::vector<StudyRow> run_study(const StudyConfig& cfg);

inline double normalization(double H, double h, int r, int k) {
  return std::max(std::pow(H, r + k), std::pow(h, r));
}

void write_csv(std::ostream& out, const std::vector<StudyRow>& rows);
std::vector<StudyRow> read_csv(std::istream& in);

/// Human-readable table with observed orders between consecutive rows.
void print_table(std::ostream& out, const std::vector<StudyRow>& rows);

}  // namespace nltg
