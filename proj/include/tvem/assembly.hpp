#pragma once

#include <Eigen/Sparse>

#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "tvem/mesh.hpp"
#include "tvem/planewave.hpp"

namespace tvem {

/// Boundary datum g(x, n) with n the outward unit normal of the domain.
using BoundaryDatum = std::function<cd(const Vec2& x, const Vec2& n)>;

/// Helmholtz problem data. Boundary edges are treated according to their
/// label; Scatterer labels must be resolved (see problems) before assembly.
struct ProblemSpec {
  double k = 1.0;
  int theta = 1;
  BoundaryDatum g_D;
  BoundaryDatum g_N;
  BoundaryDatum g_R;
  // points where the data is singular; boundary integrals grade towards them
  std::vector<Vec2> singular_points;
};

enum class Stabilization { Identity, DRecipe };

/// Plane-wave directions per element, trace bases per edge and the
/// edge-major DOF numbering.
struct DiscreteSpace {
  const PolygonalMesh* mesh = nullptr;
  double k = 1.0;
  std::vector<std::vector<Vec2>> element_dirs;
  std::vector<EdgeBasis> edge_basis;
  std::vector<int> offset;  // first DOF of each edge, offset.back() = ndof
  double max_edge_cond = 1.0;

  int ndof() const { return offset.back(); }
  int edge_size(int e) const { return offset[e + 1] - offset[e]; }
  /// Global DOFs of element K in local (edge r, basis index) order.
  std::vector<int> element_dofs(int K) const;
};

DiscreteSpace build_space(const PolygonalMesh& mesh, double k, int q, const EdgeBasisOptions& options);

/// hp space: per-element degrees, reordered nested directions and the
/// maximum rule on interior edges.
DiscreteSpace build_space_hp(const PolygonalMesh& mesh, double k, const std::vector<int>& degree,
                             const EdgeBasisOptions& options);

/// Unit normal of edge `e` pointing out of element K.
Vec2 outward_normal(const PolygonalMesh& mesh, int K, int e);

CMatrix local_G(const PolygonalMesh& mesh, int K, const std::vector<Vec2>& dirs, double k);
CMatrix local_B(const DiscreteSpace& space, int K);
CMatrix local_D(const DiscreteSpace& space, int K);

/// (dof of the edge basis functions applied to raw edge directions) for the
/// element wave with direction d: row rho of the raw moment vector
/// (1/h) int_e w^K_d conj(w_rho) ds.
CVector edge_moments_of_bulk_wave(const Vec2& a, const Vec2& b, const Vec2& xK, const Vec2& xe, const Vec2& d,
                                  const std::vector<Vec2>& raw, double k);

struct LocalElementMatrices {
  CMatrix G, B, D, pi_star, pi, S, A;
  double g_ratio = 1.0;  // min |eig| / max |eig| of G
};

LocalElementMatrices local_matrices(const DiscreteSpace& space, int K, Stabilization stab);

/// Robin edge matrix i k theta h^2 gram^{-1}.
CMatrix local_robin(const DiscreteSpace& space, int e, int theta);

/// Moments m_rho = int_e g conj(w_rho) over the raw directions of edge e,
/// by Gauss-Lobatto with `points` nodes (0 selects the default rule). When
/// one of `singular` lies on the edge the rule becomes a composite one
/// graded towards it.
CVector edge_raw_moments(const DiscreteSpace& space, int e, const BoundaryDatum& g,
                         const std::vector<Vec2>& singular = {}, int points = 0);

/// Neumann/Robin load h gram^{-1} Q^T m.
CVector local_rhs(const DiscreteSpace& space, int e, const BoundaryDatum& g, const std::vector<Vec2>& singular = {},
                  int points = 0);

/// DOF values (1/h) int_e g conj(w_hat) on edge e.
CVector edge_dof_values(const DiscreteSpace& space, int e, const BoundaryDatum& g,
                        const std::vector<Vec2>& singular = {}, int points = 0);

/// DOF vector of a function given on all edges.
CVector interpolate_dofs(const DiscreteSpace& space, const BoundaryDatum& u);

struct Diagnostic {
  int element = -1;
  double ratio = 0.0;  // min/max |eig| of the local Gram matrix
  // nearest Neumann-Laplace eigenvalue pi^2 (m^2 + n^2) / |K| of the square
  // with the element's area
  int m = 0, n = 0;
  double nu = 0.0;
  std::string message;
};

/// Nearest Neumann eigenvalue (m, n, nu) of the square of area `area` to k^2.
std::tuple<int, int, double> nearest_neumann_eigenvalue(double k, double area);

struct GlobalSystem {
  Eigen::SparseMatrix<cd> matrix;
  CVector rhs;
  CVector u;
  std::vector<CMatrix> pi_star;  // per element, for post-processing
  std::vector<int> dirichlet_dofs;
  std::vector<Diagnostic> diagnostics;
  double residual = 0.0;
  bool solved = false;
  std::string status = "ok";

  int ndof() const { return static_cast<int>(rhs.size()); }
};

/// Assembles A + R and the Neumann/Robin load.
GlobalSystem assemble(const DiscreteSpace& space, const ProblemSpec& spec, Stabilization stab);

/// Zeroes Dirichlet rows, puts 1 on the diagonal and the DOF value in the rhs.
void apply_dirichlet(GlobalSystem& system, const DiscreteSpace& space, const ProblemSpec& spec);

/// Sparse LU solve; fills u, residual and status.
void solve(GlobalSystem& system);

GlobalSystem assemble_and_solve(const DiscreteSpace& space, const ProblemSpec& spec, Stabilization stab);

/// Element-wise plane-wave coefficients c_K = pi_star_K u_K.
std::vector<CVector> element_coefficients(const DiscreteSpace& space, const GlobalSystem& system);

}  // namespace tvem
