// Experiment runner: `trefftz-vem list`, `trefftz-vem run <name> [overrides]`.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tvem/experiments.hpp"

namespace fs = std::filesystem;
using namespace tvem;

namespace {

struct Overrides {
  std::string config;
  std::string out = "results";
  std::string mesh;
  std::optional<int> cartesian, hole;
  std::vector<double> graded;
  std::optional<double> k, sigma;
  std::optional<int> q, theta;
  bool sigma_relative = false;
  std::string basis, stab, bc, solution, scatter, incident;
};

void apply(const Overrides& o, ExperimentConfig& cfg) {
  if (!o.mesh.empty()) cfg.mesh = {MeshFamilyKind::Files, {0}, 0.5, {fs::absolute(o.mesh).string()}, cfg.mesh.bc};
  if (o.cartesian) cfg.mesh = {MeshFamilyKind::Cartesian, {*o.cartesian}, 0.5, {}, cfg.mesh.bc};
  if (o.hole) cfg.mesh = {MeshFamilyKind::Hole, {*o.hole}, 0.5, {}, cfg.mesh.bc};
  if (!o.graded.empty()) {
    if (o.graded.size() != 2) throw CLI::ValidationError("--graded", "expects: n mu");
    cfg.mesh = {MeshFamilyKind::Graded, {static_cast<int>(o.graded[0])}, o.graded[1], {}, cfg.mesh.bc};
  }
  if (!o.bc.empty()) cfg.mesh.bc = o.bc;
  if (o.k) cfg.k = *o.k;
  if (o.q) {
    cfg.q = *o.q;
    if (cfg.kind == ExperimentKind::PVersion) cfg.q_list = {*o.q};
  }
  if (o.sigma) cfg.basis.sigma = *o.sigma;
  if (o.sigma_relative) cfg.basis.sigma_relative = true;
  if (o.basis == "filtered") cfg.basis.kind = BasisKind::Filtered;
  if (o.basis == "orthonormal") cfg.basis.kind = BasisKind::Orthonormal;
  if (o.stab == "identity") cfg.stab = Stabilization::Identity;
  if (o.stab == "drecipe") cfg.stab = Stabilization::DRecipe;
  if (o.theta) cfg.theta = *o.theta;
  if (!o.solution.empty()) cfg.solution = parse_solution_tag(o.solution);
  if (!o.scatter.empty()) {
    cfg.kind = ExperimentKind::Scattering;
    cfg.scatter = parse_scatter_kind(o.scatter);
    if (cfg.mesh.kind != MeshFamilyKind::Hole) cfg.mesh = {MeshFamilyKind::Hole, {0, 1, 2}, 0.5, {}, cfg.mesh.bc};
  }
  if (!o.incident.empty()) cfg.incident = parse_solution_tag(o.incident);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int run(const std::string& name, const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? registered_config(name) : load_config(o.config);
  if (!name.empty()) cfg.name = name;
  apply(o, cfg);

  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult res = run_experiment(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir = fs::path(o.out) / cfg.name;
  fs::create_directories(dir);
  write_file(dir / "results.csv", res.csv);
  if (!res.field_csv.empty()) write_file(dir / "field.csv", res.field_csv);

  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const ErrorRow& r = res.rows[i];
    std::cout << "row " << i << ": N_dof=" << r.ndof << " h=" << format_double(r.h)
              << " relH1=" << format_double(r.relH1) << " relL2=" << format_double(r.relL2)
              << " residual=" << format_double(r.residual) << " max_edge_cond=" << format_double(r.max_edge_cond)
              << " status=" << r.status << '\n';
  }
  for (const auto& m : res.messages) std::cout << "diagnostic: " << m << '\n';
  std::cout << "wrote " << (dir / "results.csv").string();
  if (!res.field_csv.empty()) std::cout << " and " << (dir / "field.csv").string();
  std::cout << " (" << secs << " s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trefftz virtual element experiments for the Helmholtz equation"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List registered experiments");
  list->callback([] {
    for (const auto& n : list_experiments()) std::cout << n << '\n';
  });

  Overrides o;
  std::string name;
  auto* cmd = app.add_subcommand("run", "Run a registered experiment (or --config file) and write results/<name>/");
  cmd->add_option("name", name, "Registered experiment name; with --config it renames the run");
  cmd->add_option("--config", o.config, "Experiment config file (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output root directory")->capture_default_str();
  auto* mesh = cmd->add_option("--mesh", o.mesh, "Mesh file")->check(CLI::ExistingFile);
  auto* cart = cmd->add_option("--cartesian", o.cartesian, "n x n Cartesian mesh of the unit square");
  auto* hole = cmd->add_option("--hole", o.hole, "Cartesian mesh with a square hole, refinement level");
  auto* graded = cmd->add_option("--graded", o.graded, "Graded mesh: level n and grading mu")->expected(2);
  mesh->excludes(cart, hole, graded);
  cart->excludes(hole, graded);
  hole->excludes(graded);
  cmd->add_option("--k", o.k, "Wave number")->check(CLI::PositiveNumber);
  cmd->add_option("--q", o.q, "Effective plane wave degree")->check(CLI::PositiveNumber);
  cmd->add_option("--sigma", o.sigma, "Eigenvalue tolerance of the orthonormalization")->check(CLI::PositiveNumber);
  cmd->add_flag("--sigma-relative", o.sigma_relative, "Divide edge Gram eigenvalues by h_e before the cut");
  cmd->add_option("--basis", o.basis, "Edge basis")->check(CLI::IsMember({"filtered", "orthonormal"}));
  cmd->add_option("--stab", o.stab, "Stabilization")->check(CLI::IsMember({"identity", "drecipe"}));
  cmd->add_option("--theta", o.theta, "Sign of the impedance condition")->check(CLI::IsMember({1, -1}));
  cmd->add_option("--bc", o.bc, "Boundary labels, e.g. R or R,left=D,top=N");
  cmd->add_option("--solution", o.solution, "Exact solution")->check(CLI::IsMember({"u0", "u1", "u2", "u3", "u4"}));
  cmd->add_option("--scatter", o.scatter, "Scattering problem")->check(CLI::IsMember({"soft", "hard"}));
  cmd->add_option("--incident", o.incident, "Incident wave")->check(CLI::IsMember({"u0", "u1", "u4"}));
  cmd->callback([&] {
    if (name.empty() && o.config.empty()) throw CLI::ValidationError("run", "needs an experiment name or --config");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (!cmd->parsed()) return 0;
  try {
    return run(name, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
