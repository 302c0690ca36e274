#include "tvem/assembly.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tvem/quadrature.hpp"

namespace tvem {

namespace {

constexpr cd I(0.0, 1.0);

struct EdgeGeometry {
  Vec2 a, b;
};

EdgeGeometry edge_geometry(const PolygonalMesh& mesh, int e) {
  const Edge& edge = mesh.edges()[e];
  return {mesh.vertices()[edge.vertices[0]], mesh.vertices()[edge.vertices[1]]};
}

void finish_space(DiscreteSpace& space, const std::vector<std::vector<Vec2>>& edge_dirs,
                  const EdgeBasisOptions& options) {
  const PolygonalMesh& mesh = *space.mesh;
  const int ne = static_cast<int>(mesh.num_edges());
  space.edge_basis.resize(ne);
#pragma omp parallel for schedule(dynamic)
  for (int e = 0; e < ne; ++e) {
    const auto g = edge_geometry(mesh, e);
    space.edge_basis[e] = build_edge_basis(g.a, g.b, edge_dirs[e], space.k, options);
  }
  space.offset.assign(ne + 1, 0);
  space.max_edge_cond = 1.0;
  for (int e = 0; e < ne; ++e) {
    space.offset[e + 1] = space.offset[e] + space.edge_basis[e].size();
    space.max_edge_cond = std::max(space.max_edge_cond, space.edge_basis[e].gram_cond);
  }
}

}  // namespace

std::vector<int> DiscreteSpace::element_dofs(int K) const {
  std::vector<int> dofs;
  for (int e : mesh->elements()[K].edges)
    for (int i = offset[e]; i < offset[e + 1]; ++i) dofs.push_back(i);
  return dofs;
}

DiscreteSpace build_space(const PolygonalMesh& mesh, double k, int q, const EdgeBasisOptions& options) {
  DiscreteSpace space;
  space.mesh = &mesh;
  space.k = k;
  const std::vector<Vec2> dirs = equispaced_directions(q).d;
  space.element_dirs.assign(mesh.num_elements(), dirs);
  finish_space(space, std::vector<std::vector<Vec2>>(mesh.num_edges(), dirs), options);
  return space;
}

DiscreteSpace build_space_hp(const PolygonalMesh& mesh, double k, const std::vector<int>& degree,
                             const EdgeBasisOptions& options) {
  if (degree.size() != mesh.num_elements()) throw std::invalid_argument("one degree per element required");
  DiscreteSpace space;
  space.mesh = &mesh;
  space.k = k;
  const int q_max = *std::max_element(degree.begin(), degree.end());
  const std::vector<Vec2> all = hp_directions(q_max);
  for (int q : degree) space.element_dirs.emplace_back(all.begin(), all.begin() + 2 * q + 1);
  std::vector<std::vector<Vec2>> edge_dirs;
  for (const auto& edge : mesh.edges())
    edge_dirs.emplace_back(all.begin(), all.begin() + edge_space_hp(edge, degree));
  finish_space(space, edge_dirs, options);
  return space;
}

Vec2 outward_normal(const PolygonalMesh& mesh, int K, int e) {
  const Edge& edge = mesh.edges()[e];
  return edge.elements[0] == K ? edge.normal : Vec2(-edge.normal);
}

CMatrix local_G(const PolygonalMesh& mesh, int K, const std::vector<Vec2>& dirs, double k) {
  const Element& el = mesh.elements()[K];
  const int p = static_cast<int>(dirs.size());
  CMatrix G = CMatrix::Zero(p, p);
  for (int e : el.edges) {
    const auto g = edge_geometry(mesh, e);
    const Vec2 n = outward_normal(mesh, K, e);
    for (int l = 0; l < p; ++l) {
      const cd flux = I * k * dirs[l].dot(n);
      if (flux == 0.0) continue;
      for (int j = 0; j < p; ++j)
        G(j, l) += flux * edge_exp_integral(g.a, g.b, k * (dirs[l] - dirs[j]), el.centroid);
    }
  }
  return G;
}

CMatrix local_B(const DiscreteSpace& space, int K) {
  const PolygonalMesh& mesh = *space.mesh;
  const Element& el = mesh.elements()[K];
  const auto& dirs = space.element_dirs[K];
  const int p = static_cast<int>(dirs.size());
  const double k = space.k;
  int nK = 0;
  for (int e : el.edges) nK += space.edge_size(e);
  CMatrix B = CMatrix::Zero(p, nK);
  int col = 0;
  for (int e : el.edges) {
    const Edge& edge = mesh.edges()[e];
    const Vec2 n = outward_normal(mesh, K, e);
    const EdgeBasis& basis = space.edge_basis[e];
    for (int j = 0; j < p; ++j) {
      const cd factor = -I * k * dirs[j].dot(n) * std::exp(-I * k * dirs[j].dot(edge.midpoint - el.centroid)) *
                        edge.length;
      B.row(j).segment(col, basis.size()) = factor * basis.C.row(j).cast<cd>();
    }
    col += basis.size();
  }
  return B;
}

CVector edge_moments_of_bulk_wave(const Vec2& a, const Vec2& b, const Vec2& xK, const Vec2& xe, const Vec2& d,
                                  const std::vector<Vec2>& raw, double k) {
  const double h = (b - a).norm();
  CVector m(raw.size());
  for (std::size_t r = 0; r < raw.size(); ++r) {
    const cd phase = std::exp(I * k * (d.dot(a - xK) - raw[r].dot(a - xe)));
    m(r) = phase * edge_exp_integral(a, b, k * (d - raw[r]), a) / h;
  }
  return m;
}

CMatrix local_D(const DiscreteSpace& space, int K) {
  const PolygonalMesh& mesh = *space.mesh;
  const Element& el = mesh.elements()[K];
  const auto& dirs = space.element_dirs[K];
  const int p = static_cast<int>(dirs.size());
  int nK = 0;
  for (int e : el.edges) nK += space.edge_size(e);
  CMatrix D(nK, p);
  int row = 0;
  for (int e : el.edges) {
    const auto g = edge_geometry(mesh, e);
    const EdgeBasis& basis = space.edge_basis[e];
    const Vec2& xe = mesh.edges()[e].midpoint;
    CMatrix raw(basis.raw.size(), p);
    for (int l = 0; l < p; ++l)
      raw.col(l) = edge_moments_of_bulk_wave(g.a, g.b, el.centroid, xe, dirs[l], basis.raw, space.k);
    D.middleRows(row, basis.size()) = basis.Q.transpose().cast<cd>() * raw;
    row += basis.size();
  }
  return D;
}

LocalElementMatrices local_matrices(const DiscreteSpace& space, int K, Stabilization stab) {
  LocalElementMatrices m;
  m.G = local_G(*space.mesh, K, space.element_dirs[K], space.k);
  m.B = local_B(space, K);
  m.D = local_D(space, K);
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<CMatrix>(0.5 * (m.G + m.G.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
  m.g_ratio = ev.cwiseAbs().minCoeff() / ev.cwiseAbs().maxCoeff();
  m.pi_star = m.G.partialPivLu().solve(m.B);
  m.pi = m.D * m.pi_star;
  const CMatrix consistent = m.pi_star.adjoint() * m.G * m.pi_star;
  const int nK = static_cast<int>(m.pi.rows());
  if (stab == Stabilization::Identity) {
    m.S = CMatrix::Identity(nK, nK);
  } else {
    m.S = CMatrix::Zero(nK, nK);
    for (int i = 0; i < nK; ++i) m.S(i, i) = std::max(consistent(i, i).real(), 1.0);
  }
  const CMatrix R = CMatrix::Identity(nK, nK) - m.pi;
  m.A = consistent + R.adjoint() * m.S * R;
  return m;
}

CMatrix local_robin(const DiscreteSpace& space, int e, int theta) {
  const EdgeBasis& basis = space.edge_basis[e];
  const double h = space.mesh->edges()[e].length;
  const Eigen::MatrixXd inv =
      basis.gram.partialPivLu().solve(Eigen::MatrixXd::Identity(basis.size(), basis.size()));
  if (!inv.allFinite()) throw BasisError("edge Gram matrix is numerically singular");
  return (I * space.k * static_cast<double>(theta) * h * h) * inv.cast<cd>();
}

CVector edge_raw_moments(const DiscreteSpace& space, int e, const BoundaryDatum& g,
                         const std::vector<Vec2>& singular, int points) {
  const PolygonalMesh& mesh = *space.mesh;
  const Edge& edge = mesh.edges()[e];
  const auto geo = edge_geometry(mesh, e);
  const EdgeBasis& basis = space.edge_basis[e];
  const int n = points > 0 ? points : lobatto_points(space.k, edge.length);
  const Vec2 t = geo.b - geo.a;
  std::vector<double> toward;
  for (const Vec2& s : singular) {
    const double u = (s - geo.a).dot(t) / t.squaredNorm();
    if (u >= 0.0 && u <= 1.0 && (geo.a + u * t - s).norm() <= 1e-12 * edge.length) toward.push_back(u);
  }
  Rule1D rule;  // on [0, 1]
  if (toward.empty()) {
    rule = gauss_lobatto(n);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      rule.x[i] = 0.5 * (rule.x[i] + 1.0);
      rule.w[i] *= 0.5;
    }
  } else {
    rule = graded_lobatto(n, toward);
  }
  const Vec2 outward = edge.normal;
  CVector m = CVector::Zero(basis.raw.size());
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const Vec2 x = geo.a + rule.x[i] * t;
    const cd gx = g(x, outward) * (edge.length * rule.w[i]);
    for (std::size_t r = 0; r < basis.raw.size(); ++r)
      m(r) += gx * std::exp(-I * space.k * basis.raw[r].dot(x - edge.midpoint));
  }
  return m;
}

CVector local_rhs(const DiscreteSpace& space, int e, const BoundaryDatum& g, const std::vector<Vec2>& singular,
                  int points) {
  const EdgeBasis& basis = space.edge_basis[e];
  const double h = space.mesh->edges()[e].length;
  const CVector m = basis.Q.transpose().cast<cd>() * edge_raw_moments(space, e, g, singular, points);
  return h * basis.gram.cast<cd>().partialPivLu().solve(m);
}

CVector edge_dof_values(const DiscreteSpace& space, int e, const BoundaryDatum& g, const std::vector<Vec2>& singular,
                        int points) {
  const EdgeBasis& basis = space.edge_basis[e];
  const double h = space.mesh->edges()[e].length;
  return basis.Q.transpose().cast<cd>() * edge_raw_moments(space, e, g, singular, points) / h;
}

CVector interpolate_dofs(const DiscreteSpace& space, const BoundaryDatum& u) {
  CVector out(space.ndof());
  for (int e = 0; e < static_cast<int>(space.mesh->num_edges()); ++e)
    out.segment(space.offset[e], space.edge_size(e)) = edge_dof_values(space, e, u);
  return out;
}

std::tuple<int, int, double> nearest_neumann_eigenvalue(double k, double area) {
  const double scale = std::numbers::pi * std::numbers::pi / area;
  const double target = k * k / scale;  // m^2 + n^2 closest to this
  const int top = static_cast<int>(std::ceil(std::sqrt(target))) + 1;
  std::tuple<int, int, double> best{0, 0, 0.0};
  double gap = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= top; ++m)
    for (int n = 0; n <= m; ++n) {
      const double d = std::abs(m * m + n * n - target);
      if (d < gap) {
        gap = d;
        best = {m, n, scale * (m * m + n * n)};
      }
    }
  return best;
}

GlobalSystem assemble(const DiscreteSpace& space, const ProblemSpec& spec, Stabilization stab) {
  const PolygonalMesh& mesh = *space.mesh;
  const int nel = static_cast<int>(mesh.num_elements());
  GlobalSystem sys;
  sys.pi_star.resize(nel);
  std::vector<CMatrix> local_A(nel);
  std::vector<double> ratio(nel, 1.0);

#pragma omp parallel for schedule(dynamic)
  for (int K = 0; K < nel; ++K) {
    LocalElementMatrices m = local_matrices(space, K, stab);
    local_A[K] = std::move(m.A);
    sys.pi_star[K] = std::move(m.pi_star);
    ratio[K] = m.g_ratio;
  }

  const int n = space.ndof();
  std::vector<Eigen::Triplet<cd>> triplets;
  sys.rhs = CVector::Zero(n);
  for (int K = 0; K < nel; ++K) {
    if (ratio[K] < 1e-13) {
      const auto [m, nn, nu] = nearest_neumann_eigenvalue(space.k, mesh.elements()[K].area);
      std::ostringstream msg;
      msg << "element " << K << ": local Gram matrix near singular (min/max |eig| = " << ratio[K]
          << "); k^2 = " << space.k * space.k << ", nearest Neumann eigenvalue nu_" << m << ',' << nn << " = " << nu
          << " of the equal-area square; k h_K = " << space.k * mesh.elements()[K].diameter;
      sys.diagnostics.push_back({K, ratio[K], m, nn, nu, msg.str()});
    }
    const std::vector<int> dofs = space.element_dofs(K);
    const CMatrix& A = local_A[K];
    for (std::size_t r = 0; r < dofs.size(); ++r)
      for (std::size_t c = 0; c < dofs.size(); ++c) triplets.emplace_back(dofs[r], dofs[c], A(r, c));
  }

  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (!edge.is_boundary()) continue;
    const int o = space.offset[e];
    const int size = space.edge_size(e);
    switch (edge.label) {
      case BoundaryLabel::Robin: {
        const CMatrix R = local_robin(space, e, spec.theta);
        for (int r = 0; r < size; ++r)
          for (int c = 0; c < size; ++c) triplets.emplace_back(o + r, o + c, R(r, c));
        if (spec.g_R) sys.rhs.segment(o, size) += local_rhs(space, e, spec.g_R, spec.singular_points);
        break;
      }
      case BoundaryLabel::Neumann:
        if (spec.g_N) sys.rhs.segment(o, size) += local_rhs(space, e, spec.g_N, spec.singular_points);
        break;
      case BoundaryLabel::Dirichlet:
        for (int r = 0; r < size; ++r) sys.dirichlet_dofs.push_back(o + r);
        break;
      case BoundaryLabel::Scatterer:
        throw std::invalid_argument("scatterer boundary must be resolved to Dirichlet or Neumann");
      case BoundaryLabel::Interior:
        break;
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

void apply_dirichlet(GlobalSystem& system, const DiscreteSpace& space, const ProblemSpec& spec) {
  if (system.dirichlet_dofs.empty()) return;
  const PolygonalMesh& mesh = *space.mesh;
  std::vector<char> fixed(system.ndof(), 0);
  for (int d : system.dirichlet_dofs) fixed[d] = 1;
  system.matrix.prune([&](Eigen::Index row, Eigen::Index, const cd&) { return !fixed[row]; });
  for (int d : system.dirichlet_dofs) system.matrix.coeffRef(d, d) = 1.0;
  system.matrix.makeCompressed();
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (!edge.is_boundary() || edge.label != BoundaryLabel::Dirichlet) continue;
    const int size = space.edge_size(e);
    if (spec.g_D)
      system.rhs.segment(space.offset[e], size) = edge_dof_values(space, e, spec.g_D, spec.singular_points);
    else
      system.rhs.segment(space.offset[e], size).setZero();
  }
}

void solve(GlobalSystem& system) {
  Eigen::SparseLU<Eigen::SparseMatrix<cd>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(system.matrix);
  if (lu.info() != Eigen::Success) {
    system.solved = false;
    system.status = "factorization_failed";
    system.u = CVector::Zero(system.ndof());
    system.residual = std::numeric_limits<double>::infinity();
    return;
  }
  system.u = lu.solve(system.rhs);
  const double fn = system.rhs.norm();
  system.residual = (system.matrix * system.u - system.rhs).norm() / (fn > 0.0 ? fn : 1.0);
  system.solved = system.u.allFinite();
  if (!system.solved)
    system.status = "nonfinite_solution";
  else if (system.residual > 1e-8)
    system.status = "large_residual";
  else
    system.status = "ok";
}

GlobalSystem assemble_and_solve(const DiscreteSpace& space, const ProblemSpec& spec, Stabilization stab) {
  GlobalSystem sys = assemble(space, spec, stab);
  apply_dirichlet(sys, space, spec);
  solve(sys);
  return sys;
}

std::vector<CVector> element_coefficients(const DiscreteSpace& space, const GlobalSystem& system) {
  const int nel = static_cast<int>(space.mesh->num_elements());
  std::vector<CVector> out(nel);
  for (int K = 0; K < nel; ++K) {
    const std::vector<int> dofs = space.element_dofs(K);
    CVector uK(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) uK(i) = system.u(dofs[i]);
    out[K] = system.pi_star[K] * uK;
  }
  return out;
}

}  // namespace tvem
