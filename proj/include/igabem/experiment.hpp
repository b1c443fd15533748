#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "igabem/assembly.hpp"
#include "igabem/nurbs_surface.hpp"
#include "igabem/tensor_space.hpp"

namespace igabem {

enum class Problem { Screen, TorusDensity, TorusPotential };
enum class Continuity { MaxMultiplicity, C0 };

struct ExperimentConfig {
  Problem problem = Problem::Screen;
  std::vector<int> levels;
  std::array<int, 2> d{2, 2};
  CubatureConfig cubature;
  bool greville_improved = true;
  double greville_beta = 0.5;
  Continuity continuity = Continuity::MaxMultiplicity;
  std::vector<double> extra_knots;  // torus_potential: simple knots added to the initial t1 mesh
  bool compute_condition = true;
  std::string output;    // CSV path, may be empty
  std::string geometry;  // geometry file, empty for the built-in surface
  std::string sphere_output;  // torus_potential: per-point errors of the last level
};

// Default settings for each problem.
ExperimentConfig default_config(Problem problem);

// Parses a JSON experiment description; unspecified fields keep the problem defaults.
ExperimentConfig parse_experiment(const std::string& json_text, const std::string& base_dir = ".");
ExperimentConfig load_experiment(const std::string& path);

struct LevelResult {
  int level = 0;
  double h = 0.0;
  int ndof1 = 0, ndof2 = 0, ndof = 0;
  int rows = 0;
  double err_l2 = 0.0;
  std::optional<double> err_inf;
  std::optional<double> eoc;
  std::optional<double> cond;
  // Square systems with condition numbers requested.
  std::optional<double> min_eig;      // smallest real part of the eigenvalues of A
  std::optional<double> min_sym_eig;  // smallest eigenvalue of (A + A^T)/2
  double assembly_ms = 0.0;
  double solve_ms = 0.0;
  AssemblyCounters counters;
  std::vector<Vec3> sphere_points;
  std::vector<double> sphere_error;
};

NurbsSurface experiment_surface(const ExperimentConfig& config);

// Trial space of the given level (level numbering as in the configs).
TensorSplineSpace experiment_space(const ExperimentConfig& config, int level);

// Collocation parameters for the given space (the C0 torus variant keeps those
// of the maximal multiplicity space of the same level).
std::vector<Param> experiment_points(const ExperimentConfig& config, int level);

LevelResult run_level(const ExperimentConfig& config, const NurbsSurface& surface, int level);

using ProgressFn = void (*)(const LevelResult&);
std::vector<LevelResult> run_experiment(const ExperimentConfig& config, ProgressFn progress = nullptr);

void write_csv(std::ostream& out, const std::vector<LevelResult>& rows);

const char* problem_name(Problem p);

}  // namespace igabem
