#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tvem/analysis.hpp"

namespace tvem {

enum class MeshFamilyKind { Cartesian, Hole, Graded, Files };

struct MeshFamily {
  MeshFamilyKind kind = MeshFamilyKind::Cartesian;
  std::vector<int> levels;         // cells per side, hole level or grading level
  double mu = 0.5;                 // graded meshes
  std::vector<std::string> files;  // Files family, relative to the source tree
  std::string bc;                  // boundary spec, see apply_boundary_spec; empty keeps the labels
};

enum class ExperimentKind { HVersion, PVersion, HPVersion, Scattering, ConditionProbe, EigenProbe };

struct ExperimentConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::HVersion;
  MeshFamily mesh;
  double k = 10.0;
  int q = 4;
  std::vector<int> q_list;  // p-version degrees, condition probe degrees
  EdgeBasisOptions basis;
  Stabilization stab = Stabilization::DRecipe;
  int theta = 1;
  SolutionTag solution = SolutionTag::U1;
  bool compare_original = false;  // DOF count of the filtered method per level
  bool compare_identity = false;  // extra run with identity stabilization
  std::optional<double> compare_sigma;
  ScatterKind scatter = ScatterKind::Soft;
  SolutionTag incident = SolutionTag::U0;
  int reference_level = -1;
  int field_grid = 0;  // points per side of the field dump, 0 disables it
  std::vector<double> sweep;  // h*k values or wavenumbers for the probes
  ErrorOptions errors;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Directory holding the registered experiment configurations.
std::string config_directory();
/// Names of the registered experiments (config file stems), sorted.
std::vector<std::string> list_experiments();
ExperimentConfig registered_config(const std::string& name);

/// Resolves a path relative to the source tree unless it is absolute.
std::string source_path(const std::string& relative);

struct LevelMesh {
  PolygonalMesh mesh;
  std::vector<int> degree;  // graded meshes only
};

LevelMesh build_level_mesh(const MeshFamily& family, int level_index);

struct ExperimentResult {
  std::vector<ErrorRow> rows;
  std::string csv;
  std::string field_csv;
  std::vector<std::string> messages;
};

/// Solves one problem on one mesh and fills the error columns.
ErrorRow solve_and_measure(const LevelMesh& lm, const ExperimentConfig& cfg, const EdgeBasisOptions& basis,
                           Stabilization stab, int q, std::vector<std::string>* messages = nullptr);

ExperimentResult run_h_version(const ExperimentConfig& cfg);
ExperimentResult run_p_version(const ExperimentConfig& cfg);
ExperimentResult run_hp_version(const ExperimentConfig& cfg);
ExperimentResult run_scattering(const ExperimentConfig& cfg);
ExperimentResult run_condition_probe(const ExperimentConfig& cfg);
ExperimentResult run_eigen_probe(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace tvem
