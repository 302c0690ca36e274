#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvem/assembly.hpp"
#include "tvem/problems.hpp"

namespace tvem {

using ExactField = std::function<SolutionValue(const Vec2&)>;

/// Piecewise plane-wave field sum_l c_{K,l} exp(i k d_l . (x - x_K)).
struct DiscreteField {
  const DiscreteSpace* space = nullptr;
  std::vector<CVector> coeff;

  static DiscreteField from_solution(const DiscreteSpace& space, const GlobalSystem& system);
  SolutionValue eval(int K, const Vec2& x) const;
};

/// Each triangle of the element triangulation is split into four until the
/// children agree with their parent to `tolerance` relative to the element
/// totals; this concentrates points at singularities of the exact solution.
struct ErrorOptions {
  int points = 12;  // Gauss points per direction on each sub-triangle
  double tolerance = 1e-10;
  int max_depth = 24;
};

struct ProjectedErrors {
  double relH1 = 0.0;
  double relL2 = 0.0;
  int unconverged_elements = 0;
};

/// Relative errors of the projected solution in the k-weighted H1 norm
/// (|v|_1^2 + k^2 ||v||_0^2) and in L2.
ProjectedErrors projected_errors(const DiscreteField& uh, const ExactField& exact, double k,
                                 const ErrorOptions& options = {});

/// Errors of `coarse` against the `fine` discrete reference, integrated over
/// the fine mesh. Both meshes must be nested.
ProjectedErrors reference_errors(const DiscreteField& coarse, const DiscreteField& fine, double k, int points = 8);

struct ErrorRow {
  double h = 0.0;
  int ndof = 0;
  double relH1 = 0.0;
  double relL2 = 0.0;
  std::optional<double> rateH1, rateL2;
  std::optional<int> ndof_orig;
  std::optional<double> reduction_pct;
  double residual = 0.0;
  double max_edge_cond = 1.0;
  std::string status = "ok";
  std::vector<std::pair<std::string, std::string>> extra;
};

/// log(e_i/e_{i+1}) / log(h_i/h_{i+1}) stored on row i+1.
std::optional<double> observed_rate(double e0, double e1, double h0, double h1);
void fill_rates(std::vector<ErrorRow>& rows);
double reduction_percent(int ndof, int ndof_orig);

/// CSV with the fixed columns
/// h,ndof,relH1,rateH1,relL2,rateL2,ndof_orig,reduction_pct,residual,max_edge_cond
/// followed by status and any extra columns.
std::string rate_table_csv(const std::vector<ErrorRow>& rows);
extern const char* const kRateTableHeader;

struct ConditionSample {
  int q;
  double hk;
  double cond;         // entries and eigenvalues in 100-digit arithmetic
  double cond_double;  // same matrix in double precision, saturates near 1/eps
};

/// 2-norm condition numbers of the edge Gram matrix on [0,0]-[0,h] with k = 1.
std::vector<ConditionSample> condition_probe(const std::vector<int>& qs, const std::vector<double>& hk);

struct EigenSample {
  double k;
  double min_abs_eig;
};

/// min |eig| of the local Gram matrix of the unit square.
std::vector<EigenSample> neumann_eig_probe(int q, const std::vector<double>& ks);

/// Least-squares line y = a + b x with coefficient of determination.
struct LinearFit {
  double intercept, slope, r2;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

std::string format_double(double v);

}  // namespace tvem
