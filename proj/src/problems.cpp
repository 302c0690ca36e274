#include "tvem/problems.hpp"

#include <cmath>
#include <numbers>

#include "tvem/special_functions.hpp"

namespace tvem {

namespace {

constexpr cd I(0.0, 1.0);
constexpr double kXi = 2.0 / 3.0;

SolutionValue plane_wave(double angle, double k, const Vec2& x) {
  const Vec2 d(std::cos(angle), std::sin(angle));
  const cd u = std::exp(I * k * d.dot(x));
  return {u, Eigen::Vector2cd(I * k * d.x() * u, I * k * d.y() * u)};
}

SolutionValue hankel_source(double k, const Vec2& x) {
  const Vec2 rel = x - Vec2(-0.25, 0.0);
  const double r = rel.norm();
  if (r == 0.0) throw SingularPointError("u2 is singular at its source point");
  const cd dr = -k * hankel1_1(k * r);
  return {hankel1_0(k * r), Eigen::Vector2cd(dr * rel.x() / r, dr * rel.y() / r)};
}

SolutionValue corner_singularity(double k, const Vec2& x) {
  const Vec2 rel = x - Vec2(0.0, 0.5);
  const double r = rel.norm();
  if (r == 0.0) throw SingularPointError("u3 is not evaluated at its singular point");
  const double theta = std::atan2(rel.y(), rel.x());
  const double z = k * r;
  const double j = bessel_j(kXi, z);
  const double dj = bessel_j(kXi - 1.0, z) - kXi / z * j;  // J'_xi
  const double c = std::cos(kXi * theta), s = std::sin(kXi * theta);
  const double ur = k * dj * c;
  const double ut_over_r = -kXi * j * s / r;
  const Vec2 er = rel / r, et(-er.y(), er.x());
  const Vec2 g = ur * er + ut_over_r * et;
  return {j * c, Eigen::Vector2cd(g.x(), g.y())};
}

}  // namespace

SolutionTag parse_solution_tag(const std::string& s) {
  if (s == "u0") return SolutionTag::U0;
  if (s == "u1") return SolutionTag::U1;
  if (s == "u2") return SolutionTag::U2;
  if (s == "u3") return SolutionTag::U3;
  if (s == "u4") return SolutionTag::U4;
  throw std::invalid_argument("unknown solution '" + s + "'");
}

std::string to_string(SolutionTag tag) {
  switch (tag) {
    case SolutionTag::U0: return "u0";
    case SolutionTag::U1: return "u1";
    case SolutionTag::U2: return "u2";
    case SolutionTag::U3: return "u3";
    case SolutionTag::U4: return "u4";
  }
  return "?";
}

SolutionValue eval_solution(SolutionTag tag, double k, const Vec2& x) {
  switch (tag) {
    case SolutionTag::U0: return plane_wave(0.0, k, x);
    case SolutionTag::U1: return plane_wave(std::numbers::pi / 4.0, k, x);
    case SolutionTag::U2: return hankel_source(k, x);
    case SolutionTag::U3: return corner_singularity(k, x);
    case SolutionTag::U4: return plane_wave(2.0 * std::numbers::pi / 17.0, k, x);
  }
  throw std::invalid_argument("unknown solution tag");
}

ProblemSpec boundary_data(SolutionTag tag, double k, int theta) {
  ProblemSpec spec;
  spec.k = k;
  spec.theta = theta;
  if (tag == SolutionTag::U3) spec.singular_points.push_back(Vec2(0.0, 0.5));
  // a quadrature node on the singular point of u3 contributes nothing: the
  // trace vanishes there and the flux singularity is integrable
  spec.g_D = [tag, k](const Vec2& x, const Vec2&) {
    try {
      return eval_solution(tag, k, x).value;
    } catch (const SingularPointError&) {
      return cd(0.0);
    }
  };
  spec.g_N = [tag, k](const Vec2& x, const Vec2& n) {
    try {
      const auto s = eval_solution(tag, k, x);
      return s.gradient.x() * n.x() + s.gradient.y() * n.y();
    } catch (const SingularPointError&) {
      return cd(0.0);
    }
  };
  spec.g_R = [tag, k, theta](const Vec2& x, const Vec2& n) {
    try {
      const auto s = eval_solution(tag, k, x);
      return s.gradient.x() * n.x() + s.gradient.y() * n.y() + I * k * static_cast<double>(theta) * s.value;
    } catch (const SingularPointError&) {
      return cd(0.0);
    }
  };
  return spec;
}

ScatterKind parse_scatter_kind(const std::string& s) {
  if (s == "soft") return ScatterKind::Soft;
  if (s == "hard") return ScatterKind::Hard;
  throw std::invalid_argument("unknown scatterer kind '" + s + "'");
}

std::string to_string(ScatterKind kind) { return kind == ScatterKind::Soft ? "soft" : "hard"; }

ScatteringSetup make_scattering(ScatterKind kind, SolutionTag incident, double k) {
  if (incident != SolutionTag::U0 && incident != SolutionTag::U1 && incident != SolutionTag::U4)
    throw std::invalid_argument("incident wave must be u0, u1 or u4");
  ScatteringSetup setup{kind, incident, boundary_data(incident, k, 1)};
  setup.spec.g_D = [](const Vec2&, const Vec2&) { return cd(0.0); };
  setup.spec.g_N = [](const Vec2&, const Vec2&) { return cd(0.0); };
  return setup;
}

PolygonalMesh resolve_scatterer(const PolygonalMesh& mesh, ScatterKind kind) {
  const BoundaryLabel inner = kind == ScatterKind::Soft ? BoundaryLabel::Dirichlet : BoundaryLabel::Neumann;
  return mesh.relabeled([inner](const Edge& e) { return e.label == BoundaryLabel::Scatterer ? inner : e.label; });
}

}  // namespace tvem
