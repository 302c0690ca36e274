#pragma once

#include <string>

#include "tvem/assembly.hpp"

namespace tvem {

/// u0, u1, u4: plane waves with directions (1,0), angle pi/4, angle 2pi/17.
/// u2: H0^(1)(k|x - (-0.25, 0)|). u3: J_{2/3}(k r) cos(2 theta / 3) in polar
/// coordinates around (0, 0.5), theta in (-pi, pi] so the branch cut runs
/// along the negative x-direction, outside the unit square.
enum class SolutionTag { U0, U1, U2, U3, U4 };

SolutionTag parse_solution_tag(const std::string& s);
std::string to_string(SolutionTag tag);

struct SolutionValue {
  cd value;
  Eigen::Vector2cd gradient;
};

class SingularPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

SolutionValue eval_solution(SolutionTag tag, double k, const Vec2& x);

/// Problem with the traces of an exact solution: g_D = u, g_N = du/dn,
/// g_R = du/dn + i k theta u.
ProblemSpec boundary_data(SolutionTag tag, double k, int theta = 1);

enum class ScatterKind { Soft, Hard };

ScatterKind parse_scatter_kind(const std::string& s);
std::string to_string(ScatterKind kind);

struct ScatteringSetup {
  ScatterKind kind;
  SolutionTag incident;
  ProblemSpec spec;
};

/// Homogeneous Dirichlet (soft) or Neumann (hard) data on the scatterer and
/// the impedance trace of the incident wave on the outer boundary, theta = 1.
ScatteringSetup make_scattering(ScatterKind kind, SolutionTag incident, double k);

/// Replaces Scatterer labels by Dirichlet (soft) or Neumann (hard).
PolygonalMesh resolve_scatterer(const PolygonalMesh& mesh, ScatterKind kind);

}  // namespace tvem
