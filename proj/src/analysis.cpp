#include "tvem/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tvem/quadrature.hpp"

namespace tvem {
using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                           boost::multiprecision::et_off>;
}

// the adapter shipped with older Boost releases misses members Eigen 3.4 uses
template <>
struct Eigen::NumTraits<tvem::Wide> : Eigen::GenericNumTraits<tvem::Wide> {
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 4, MulCost = 8 };
  static Real dummy_precision() { return Real(1e-90); }
  static int digits10() { return std::numeric_limits<Real>::digits10; }
};

namespace tvem {

namespace {

constexpr cd I(0.0, 1.0);

// [error H1-part, error L2-part, norm H1-part, norm L2-part] with the H1
// parts holding |grad|^2 only
using Sums = std::array<double, 4>;

Sums integrate(const std::vector<QuadPoint>& pts, const std::function<std::pair<SolutionValue, SolutionValue>(const Vec2&)>& f) {
  Sums s{0, 0, 0, 0};
  for (const auto& qp : pts) {
    const auto [u, uh] = f(qp.x);
    const cd dv = u.value - uh.value;
    const Eigen::Vector2cd dg = u.gradient - uh.gradient;
    s[0] += qp.w * dg.squaredNorm();
    s[1] += qp.w * std::norm(dv);
    s[2] += qp.w * u.gradient.squaredNorm();
    s[3] += qp.w * std::norm(u.value);
  }
  return s;
}

ProjectedErrors finish(const std::vector<Sums>& parts, double k, int unconverged) {
  Sums t{0, 0, 0, 0};
  for (const auto& p : parts)
    for (int i = 0; i < 4; ++i) t[i] += p[i];
  const double k2 = k * k;
  ProjectedErrors out;
  out.relH1 = std::sqrt((t[0] + k2 * t[1]) / (t[2] + k2 * t[3]));
  out.relL2 = std::sqrt(t[1] / t[3]);
  out.unconverged_elements = unconverged;
  return out;
}

}  // namespace

DiscreteField DiscreteField::from_solution(const DiscreteSpace& space, const GlobalSystem& system) {
  return {&space, element_coefficients(space, system)};
}

SolutionValue DiscreteField::eval(int K, const Vec2& x) const {
  const auto& dirs = space->element_dirs[K];
  const Vec2& xK = space->mesh->elements()[K].centroid;
  const double k = space->k;
  SolutionValue out{0.0, Eigen::Vector2cd::Zero()};
  for (std::size_t l = 0; l < dirs.size(); ++l) {
    const cd w = coeff[K](l) * std::exp(I * k * dirs[l].dot(x - xK));
    out.value += w;
    out.gradient += (I * k * w) * Eigen::Vector2cd(dirs[l].x(), dirs[l].y());
  }
  return out;
}

ProjectedErrors projected_errors(const DiscreteField& uh, const ExactField& exact, double k,
                                 const ErrorOptions& options) {
  const PolygonalMesh& mesh = *uh.space->mesh;
  const int nel = static_cast<int>(mesh.num_elements());
  std::vector<Sums> parts(nel);
  int unconverged = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : unconverged)
  for (int K = 0; K < nel; ++K) {
    auto f = [&](const Vec2& x) { return std::make_pair(exact(x), uh.eval(K, x)); };
    auto on = [&](const Triangle& t) { return integrate(triangle_rule(t, options.points), f); };
    struct Item {
      Triangle t;
      Sums s;
      int depth;
    };
    std::vector<Item> stack;
    Sums total{0, 0, 0, 0};
    for (const auto& t : triangulate_polygon(element_polygon(mesh, K))) {
      stack.push_back({t, on(t), 0});
      for (int i = 0; i < 4; ++i) total[i] += stack.back().s[i];
    }
    // the first pass fixes the scale the local criterion is measured against
    const Sums scale = total;
    total = {0, 0, 0, 0};
    bool converged = true;
    while (!stack.empty()) {
      const Item item = stack.back();
      stack.pop_back();
      std::vector<Item> children;
      Sums sum{0, 0, 0, 0};
      for (const auto& c : refine_triangles({item.t}, 1)) {
        children.push_back({c, on(c), item.depth + 1});
        for (int i = 0; i < 4; ++i) sum[i] += children.back().s[i];
      }
      bool ok = true;
      for (int i = 0; i < 2; ++i)
        if (std::abs(sum[i] - item.s[i]) > options.tolerance * scale[i] + 1e-16 * scale[i + 2]) ok = false;
      if (ok || item.depth + 1 >= options.max_depth) {
        if (!ok) converged = false;
        for (int i = 0; i < 4; ++i) total[i] += sum[i];
      } else {
        stack.insert(stack.end(), children.begin(), children.end());
      }
    }
    if (!converged) ++unconverged;
    parts[K] = total;
  }
  return finish(parts, k, unconverged);
}

ProjectedErrors reference_errors(const DiscreteField& coarse, const DiscreteField& fine, double k, int points) {
  const PolygonalMesh& fmesh = *fine.space->mesh;
  const PointLocator locator(*coarse.space->mesh);
  const int nel = static_cast<int>(fmesh.num_elements());
  std::vector<Sums> parts(nel);
  int unlocated = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : unlocated)
  for (int K = 0; K < nel; ++K) {
    const int parent = locator.locate(fmesh.elements()[K].centroid);
    if (parent < 0) {
      ++unlocated;
      parts[K] = {0, 0, 0, 0};
      continue;
    }
    parts[K] = integrate(polygon_rule(element_polygon(fmesh, K), points), [&](const Vec2& x) {
      return std::make_pair(fine.eval(K, x), coarse.eval(parent, x));
    });
  }
  if (unlocated > 0) throw MeshError("reference mesh is not nested in the coarse mesh");
  return finish(parts, k, 0);
}

std::optional<double> observed_rate(double e0, double e1, double h0, double h1) {
  if (!(e0 > 0.0) || !(e1 > 0.0) || h0 == h1 || !(h0 > 0.0) || !(h1 > 0.0)) return std::nullopt;
  return std::log(e0 / e1) / std::log(h0 / h1);
}

void fill_rates(std::vector<ErrorRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rateH1.reset();
    rows[i].rateL2.reset();
    if (i == 0) continue;
    rows[i].rateH1 = observed_rate(rows[i - 1].relH1, rows[i].relH1, rows[i - 1].h, rows[i].h);
    rows[i].rateL2 = observed_rate(rows[i - 1].relL2, rows[i].relL2, rows[i - 1].h, rows[i].h);
  }
}

double reduction_percent(int ndof, int ndof_orig) { return 100.0 * (1.0 - static_cast<double>(ndof) / ndof_orig); }

const char* const kRateTableHeader = "h,ndof,relH1,rateH1,relL2,rateL2,ndof_orig,reduction_pct,residual,max_edge_cond";

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string rate_table_csv(const std::vector<ErrorRow>& rows) {
  std::ostringstream out;
  out << kRateTableHeader << ",status";
  std::vector<std::string> extra_names;
  for (const auto& r : rows)
    for (const auto& [name, value] : r.extra)
      if (std::find(extra_names.begin(), extra_names.end(), name) == extra_names.end()) extra_names.push_back(name);
  for (const auto& n : extra_names) out << ',' << n;
  out << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    out << format_double(r.h) << ',' << r.ndof << ',' << format_double(r.relH1) << ',' << opt(r.rateH1) << ','
        << format_double(r.relL2) << ',' << opt(r.rateL2) << ',' << (r.ndof_orig ? std::to_string(*r.ndof_orig) : "")
        << ',';
    if (r.reduction_pct) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", *r.reduction_pct);
      out << buf;
    }
    out << ',' << format_double(r.residual) << ',' << format_double(r.max_edge_cond) << ',' << r.status;
    for (const auto& n : extra_names) {
      out << ',';
      for (const auto& [name, value] : r.extra)
        if (name == n) out << value;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

// Gram matrix of the traces on the edge [0,0]-[0,h] with k = 1: the entries
// are h sinc(h (sin t_l - sin t_j) / 2).
double wide_edge_condition(int q, double h) {
  const int p = 2 * q + 1;
  const Wide pi = boost::math::constants::pi<Wide>();
  std::vector<Wide> dy(p);
  for (int l = 0; l < p; ++l) dy[l] = sin(2 * pi * l / p);
  using Matrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix G(p, p);
  const Wide hw(h);
  for (int j = 0; j < p; ++j)
    for (int l = 0; l < p; ++l) {
      const Wide z = hw * (dy[l] - dy[j]) / 2;
      G(j, l) = z == 0 ? hw : hw * sin(z) / z;
    }
  const auto ev = Eigen::SelfAdjointEigenSolver<Matrix>(G, Eigen::EigenvaluesOnly).eigenvalues();
  Wide lo = abs(ev(0)), hi = lo;
  for (int i = 1; i < p; ++i) {
    lo = std::min<Wide>(lo, abs(ev(i)));
    hi = std::max<Wide>(hi, abs(ev(i)));
  }
  return static_cast<double>(hi / lo);
}

}  // namespace

std::vector<ConditionSample> condition_probe(const std::vector<int>& qs, const std::vector<double>& hk) {
  std::vector<ConditionSample> out;
  for (int q : qs) {
    const auto dirs = equispaced_directions(q).d;
    for (double x : hk) {
      const Eigen::MatrixXd G = edge_mass_matrix(Vec2(0.0, 0.0), Vec2(0.0, x), dirs, 1.0);
      out.push_back({q, x, wide_edge_condition(q, x), symmetric_condition(G)});
    }
  }
  return out;
}

std::vector<EigenSample> neumann_eig_probe(int q, const std::vector<double>& ks) {
  const PolygonalMesh square = build_cartesian_mesh(1);
  const auto dirs = equispaced_directions(q).d;
  std::vector<EigenSample> out;
  for (double k : ks) {
    const CMatrix G = local_G(square, 0, dirs, k);
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<CMatrix>(0.5 * (G + G.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
    out.push_back({k, ev.cwiseAbs().minCoeff()});
  }
  return out;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return {my - slope * mx, slope, r2};
}

}  // namespace tvem
