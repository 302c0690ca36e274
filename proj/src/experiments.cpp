#include "tvem/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace tvem {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MeshFamilyKind parse_family(const std::string& s) {
  if (s == "cartesian") return MeshFamilyKind::Cartesian;
  if (s == "hole") return MeshFamilyKind::Hole;
  if (s == "graded") return MeshFamilyKind::Graded;
  if (s == "files") return MeshFamilyKind::Files;
  throw std::invalid_argument("unknown mesh family '" + s + "'");
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "h") return ExperimentKind::HVersion;
  if (s == "p") return ExperimentKind::PVersion;
  if (s == "hp") return ExperimentKind::HPVersion;
  if (s == "scattering") return ExperimentKind::Scattering;
  if (s == "condition") return ExperimentKind::ConditionProbe;
  if (s == "eigen") return ExperimentKind::EigenProbe;
  throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

std::vector<double> parse_sweep(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  const double from = j.at("from").get<double>();
  const double to = j.at("to").get<double>();
  const int count = j.at("count").get<int>();
  const bool log = j.value("log", false);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    out.push_back(log ? std::exp(std::log(from) + t * (std::log(to) - std::log(from))) : from + t * (to - from));
  }
  return out;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  const json j = json::parse(json_text);
  ExperimentConfig c;
  c.name = j.at("name").get<std::string>();
  c.kind = parse_kind(j.at("kind").get<std::string>());
  if (j.contains("mesh")) {
    const json& m = j.at("mesh");
    c.mesh.kind = parse_family(m.at("family").get<std::string>());
    c.mesh.levels = m.value("levels", std::vector<int>{});
    c.mesh.mu = m.value("mu", 0.5);
    c.mesh.files = m.value("files", std::vector<std::string>{});
    c.mesh.bc = m.value("bc", std::string());
    if (c.mesh.kind == MeshFamilyKind::Files) {
      c.mesh.levels.clear();
      for (std::size_t i = 0; i < c.mesh.files.size(); ++i) c.mesh.levels.push_back(static_cast<int>(i));
    }
  }
  c.k = j.value("k", c.k);
  c.q = j.value("q", c.q);
  c.q_list = j.value("q_list", std::vector<int>{});
  const std::string basis = j.value("basis", std::string("orthonormal"));
  if (basis == "orthonormal") c.basis.kind = BasisKind::Orthonormal;
  else if (basis == "filtered") c.basis.kind = BasisKind::Filtered;
  else throw std::invalid_argument("unknown basis '" + basis + "'");
  c.basis.sigma = j.value("sigma", c.basis.sigma);
  c.basis.sigma_relative = j.value("sigma_relative", false);
  c.basis.scaled = j.value("scaled", true);
  const std::string stab = j.value("stab", std::string("drecipe"));
  if (stab == "drecipe") c.stab = Stabilization::DRecipe;
  else if (stab == "identity") c.stab = Stabilization::Identity;
  else throw std::invalid_argument("unknown stabilization '" + stab + "'");
  c.theta = j.value("theta", 1);
  if (c.theta != 1 && c.theta != -1) throw std::invalid_argument("theta must be +1 or -1");
  if (j.contains("solution")) c.solution = parse_solution_tag(j.at("solution").get<std::string>());
  c.compare_original = j.value("compare_original", false);
  c.compare_identity = j.value("compare_identity", false);
  if (j.contains("compare_sigma")) c.compare_sigma = j.at("compare_sigma").get<double>();
  if (j.contains("scatter")) c.scatter = parse_scatter_kind(j.at("scatter").get<std::string>());
  if (j.contains("incident")) c.incident = parse_solution_tag(j.at("incident").get<std::string>());
  c.reference_level = j.value("reference_level", -1);
  c.field_grid = j.value("field_grid", 0);
  if (j.contains("sweep")) c.sweep = parse_sweep(j.at("sweep"));
  if (j.contains("errors")) {
    const json& e = j.at("errors");
    c.errors.points = e.value("points", c.errors.points);
    c.errors.tolerance = e.value("tolerance", c.errors.tolerance);
    c.errors.max_depth = e.value("max_depth", c.errors.max_depth);
  }
  if (!(c.k > 0.0)) throw std::invalid_argument("k must be positive");
  if (!(c.basis.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  for (const auto& f : c.mesh.files)
    if (!std::filesystem::exists(source_path(f))) throw std::invalid_argument("mesh file not found: " + f);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string source_path(const std::string& relative) {
  if (std::filesystem::path(relative).is_absolute()) return relative;
  return (std::filesystem::path(TVEM_SOURCE_DIR) / relative).string();
}

std::string config_directory() { return source_path("configs"); }

std::vector<std::string> list_experiments() {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(config_directory()))
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

ExperimentConfig registered_config(const std::string& name) {
  const std::string path = config_directory() + "/" + name + ".json";
  if (!std::filesystem::exists(path)) throw std::invalid_argument("no registered experiment '" + name + "'");
  return load_config(path);
}

namespace {

LevelMesh generate_level_mesh(const MeshFamily& family, int level_index) {
  const int level = family.levels.at(level_index);
  switch (family.kind) {
    case MeshFamilyKind::Cartesian:
      return {build_cartesian_mesh(level), {}};
    case MeshFamilyKind::Hole:
      return {build_hole_mesh(level), {}};
    case MeshFamilyKind::Graded: {
      GradedMesh g = build_graded_mesh({level, family.mu, Vec2(0.0, 0.5)});
      return {std::move(g.mesh), std::move(g.degree)};
    }
    case MeshFamilyKind::Files:
      return {load_mesh(source_path(family.files.at(level_index))), {}};
  }
  throw std::invalid_argument("unknown mesh family");
}

}  // namespace

LevelMesh build_level_mesh(const MeshFamily& family, int level_index) {
  LevelMesh lm = generate_level_mesh(family, level_index);
  if (!family.bc.empty()) lm.mesh = apply_boundary_spec(lm.mesh, family.bc);
  return lm;
}

namespace {

DiscreteSpace make_space(const LevelMesh& lm, double k, int q, const EdgeBasisOptions& basis) {
  if (!lm.degree.empty()) return build_space_hp(lm.mesh, k, lm.degree, basis);
  return build_space(lm.mesh, k, q, basis);
}

}  // namespace

ErrorRow solve_and_measure(const LevelMesh& lm, const ExperimentConfig& cfg, const EdgeBasisOptions& basis,
                           Stabilization stab, int q, std::vector<std::string>* messages) {
  ErrorRow row;
  row.h = lm.mesh.h();
  try {
    const DiscreteSpace space = make_space(lm, cfg.k, q, basis);
    row.ndof = space.ndof();
    row.max_edge_cond = space.max_edge_cond;
    const ProblemSpec spec = boundary_data(cfg.solution, cfg.k, cfg.theta);
    GlobalSystem sys = assemble_and_solve(space, spec, stab);
    row.residual = sys.residual;
    row.status = sys.status;
    if (!sys.diagnostics.empty()) {
      if (messages) messages->push_back(sys.diagnostics.front().message + " (" +
                                        std::to_string(sys.diagnostics.size()) + " elements flagged)");
      row.extra.emplace_back("flagged_elements", std::to_string(sys.diagnostics.size()));
    }
    if (sys.solved) {
      const DiscreteField field = DiscreteField::from_solution(space, sys);
      const ProjectedErrors err = projected_errors(
          field, [&](const Vec2& x) { return eval_solution(cfg.solution, cfg.k, x); }, cfg.k, cfg.errors);
      row.relH1 = err.relH1;
      row.relL2 = err.relL2;
      if (err.unconverged_elements > 0 && messages)
        messages->push_back("error quadrature not converged on " + std::to_string(err.unconverged_elements) +
                            " elements");
    } else {
      row.relH1 = row.relL2 = kNaN;
    }
  } catch (const BasisError& e) {
    row.status = "basis_error";
    row.relH1 = row.relL2 = row.residual = kNaN;
    if (messages) messages->push_back(e.what());
  }
  if (cfg.compare_original) {
    EdgeBasisOptions orig = basis;
    orig.kind = BasisKind::Filtered;
    row.ndof_orig = make_space(lm, cfg.k, q, orig).ndof();
    row.reduction_pct = reduction_percent(row.ndof, *row.ndof_orig);
  }
  return row;
}

ExperimentResult run_h_version(const ExperimentConfig& cfg) {
  ExperimentResult res;
  for (std::size_t i = 0; i < cfg.mesh.levels.size(); ++i) {
    const LevelMesh lm = build_level_mesh(cfg.mesh, static_cast<int>(i));
    ErrorRow row = solve_and_measure(lm, cfg, cfg.basis, cfg.stab, cfg.q, &res.messages);
    if (cfg.compare_identity) {
      const ErrorRow id = solve_and_measure(lm, cfg, cfg.basis, Stabilization::Identity, cfg.q, nullptr);
      row.extra.emplace_back("relH1_identity", fmt(id.relH1));
      row.extra.emplace_back("relL2_identity", fmt(id.relL2));
    }
    if (cfg.compare_sigma) {
      EdgeBasisOptions other = cfg.basis;
      other.sigma = *cfg.compare_sigma;
      const ErrorRow s = solve_and_measure(lm, cfg, other, cfg.stab, cfg.q, nullptr);
      row.extra.emplace_back("ndof_sigma2", std::to_string(s.ndof));
      row.extra.emplace_back("relH1_sigma2", fmt(s.relH1));
      row.extra.emplace_back("relL2_sigma2", fmt(s.relL2));
    }
    row.extra.emplace_back("level", std::to_string(cfg.mesh.levels[i]));
    res.rows.push_back(std::move(row));
  }
  fill_rates(res.rows);
  res.csv = rate_table_csv(res.rows);
  return res;
}

ExperimentResult run_p_version(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const std::vector<int> qs = cfg.q_list.empty() ? std::vector<int>{cfg.q} : cfg.q_list;
  for (std::size_t m = 0; m < cfg.mesh.levels.size(); ++m) {
    const LevelMesh lm = build_level_mesh(cfg.mesh, static_cast<int>(m));
    for (int q : qs) {
      ErrorRow row = solve_and_measure(lm, cfg, cfg.basis, cfg.stab, q, &res.messages);
      row.extra.emplace_back("mesh", std::to_string(cfg.mesh.levels[m]));
      row.extra.emplace_back("q", std::to_string(q));
      res.rows.push_back(std::move(row));
    }
  }
  fill_rates(res.rows);
  res.csv = rate_table_csv(res.rows);
  return res;
}

ExperimentResult run_hp_version(const ExperimentConfig& cfg) {
  ExperimentResult res;
  for (std::size_t i = 0; i < cfg.mesh.levels.size(); ++i) {
    const LevelMesh lm = build_level_mesh(cfg.mesh, static_cast<int>(i));
    ErrorRow row = solve_and_measure(lm, cfg, cfg.basis, cfg.stab, cfg.q, &res.messages);
    row.extra.emplace_back("level", std::to_string(cfg.mesh.levels[i]));
    row.extra.emplace_back("sqrt_ndof", fmt(std::sqrt(static_cast<double>(row.ndof))));
    const int qmax = lm.degree.empty() ? cfg.q : *std::max_element(lm.degree.begin(), lm.degree.end());
    row.extra.emplace_back("q_max", std::to_string(qmax));
    res.rows.push_back(std::move(row));
  }
  fill_rates(res.rows);
  res.csv = rate_table_csv(res.rows);
  return res;
}

ExperimentResult run_scattering(const ExperimentConfig& cfg) {
  if (cfg.mesh.kind != MeshFamilyKind::Hole) throw std::invalid_argument("scattering runs on the hole mesh family");
  const int ref_level = cfg.reference_level >= 0 ? cfg.reference_level
                                                 : *std::max_element(cfg.mesh.levels.begin(), cfg.mesh.levels.end()) + 1;
  const ScatteringSetup setup = make_scattering(cfg.scatter, cfg.incident, cfg.k);
  ExperimentResult res;

  MeshFamily ref_family = cfg.mesh;
  ref_family.levels = {ref_level};
  const PolygonalMesh ref_mesh = resolve_scatterer(build_level_mesh(ref_family, 0).mesh, cfg.scatter);
  const DiscreteSpace ref_space = build_space(ref_mesh, cfg.k, cfg.q, cfg.basis);
  GlobalSystem ref_sys = assemble_and_solve(ref_space, setup.spec, cfg.stab);
  if (!ref_sys.solved) throw std::runtime_error("reference solve failed: " + ref_sys.status);
  const DiscreteField ref_field = DiscreteField::from_solution(ref_space, ref_sys);
  ref_sys.matrix.resize(0, 0);

  for (std::size_t i = 0; i < cfg.mesh.levels.size(); ++i) {
    const int level = cfg.mesh.levels[i];
    const PolygonalMesh mesh = resolve_scatterer(build_level_mesh(cfg.mesh, static_cast<int>(i)).mesh, cfg.scatter);
    ErrorRow row;
    row.h = mesh.h();
    const DiscreteSpace space = build_space(mesh, cfg.k, cfg.q, cfg.basis);
    row.ndof = space.ndof();
    row.max_edge_cond = space.max_edge_cond;
    GlobalSystem sys = assemble_and_solve(space, setup.spec, cfg.stab);
    row.residual = sys.residual;
    row.status = sys.status;
    if (sys.solved) {
      const ProjectedErrors err =
          level == ref_level ? ProjectedErrors{}
                             : reference_errors(DiscreteField::from_solution(space, sys), ref_field, cfg.k);
      row.relH1 = err.relH1;
      row.relL2 = err.relL2;
    } else {
      row.relH1 = row.relL2 = kNaN;
    }
    row.extra.emplace_back("level", std::to_string(level));
    row.extra.emplace_back("reference_level", std::to_string(ref_level));
    res.rows.push_back(std::move(row));
  }
  fill_rates(res.rows);
  res.csv = rate_table_csv(res.rows);

  if (cfg.field_grid > 1) {
    const PointLocator locator(ref_mesh);
    std::ostringstream out;
    out << "x,y,re_u,im_u\n";
    const int n = cfg.field_grid;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec2 x(-1.0 + 3.0 * i / (n - 1), 3.0 * j / (n - 1));
        const int K = locator.locate(x);
        if (K < 0) continue;
        const cd u = ref_field.eval(K, x).value;
        out << fmt(x.x()) << ',' << fmt(x.y()) << ',' << fmt(u.real()) << ',' << fmt(u.imag()) << '\n';
      }
    res.field_csv = out.str();
  }
  return res;
}

ExperimentResult run_condition_probe(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const std::vector<int> qs = cfg.q_list.empty() ? std::vector<int>{2, 3, 4} : cfg.q_list;
  std::ostringstream out;
  out << "q,hk,cond,cond_double\n";
  for (const auto& s : condition_probe(qs, cfg.sweep))
    out << s.q << ',' << fmt(s.hk) << ',' << fmt(s.cond) << ',' << fmt(s.cond_double) << '\n';
  res.csv = out.str();
  return res;
}

ExperimentResult run_eigen_probe(const ExperimentConfig& cfg) {
  ExperimentResult res;
  std::ostringstream out;
  out << "k,min_abs_eig\n";
  for (const auto& s : neumann_eig_probe(cfg.q, cfg.sweep)) out << fmt(s.k) << ',' << fmt(s.min_abs_eig) << '\n';
  res.csv = out.str();
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::HVersion: return run_h_version(cfg);
    case ExperimentKind::PVersion: return run_p_version(cfg);
    case ExperimentKind::HPVersion: return run_hp_version(cfg);
    case ExperimentKind::Scattering: return run_scattering(cfg);
    case ExperimentKind::ConditionProbe: return run_condition_probe(cfg);
    case ExperimentKind::EigenProbe: return run_eigen_probe(cfg);
  }
  throw std::invalid_argument("unknown experiment kind");
}

}  // namespace tvem
