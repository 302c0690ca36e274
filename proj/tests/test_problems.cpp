#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tvem/problems.hpp"

using namespace tvem;
using std::numbers::pi;

namespace {

const SolutionTag kAll[] = {SolutionTag::U0, SolutionTag::U1, SolutionTag::U2, SolutionTag::U3, SolutionTag::U4};

bool near_pole(const Vec2& x) { return (x - Vec2(0.0, 0.5)).norm() < 0.05; }

}  // namespace

TEST_CASE("helmholtz residual by finite differences") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-4;
  for (double k : {10.0, 20.0})
    for (SolutionTag tag : kAll) {
      int checked = 0;
      while (checked < 100) {
        const Vec2 x(u(rng), u(rng));
        if (tag == SolutionTag::U3 && near_pole(x)) continue;
        const auto val = [&](double dx, double dy) { return eval_solution(tag, k, x + Vec2(dx, dy)).value; };
        const cd c = val(0, 0);
        const cd lap = (val(h, 0) + val(-h, 0) + val(0, h) + val(0, -h) - 4.0 * c) / (h * h);
        const double scale = std::max(std::abs(c), eval_solution(tag, k, x).gradient.norm() / k);
        CHECK(std::abs(lap + k * k * c) <= (h * h * std::pow(k, 4) + 1e-6 * k * k) * scale);
        ++checked;
      }
    }
}

TEST_CASE("gradients by central differences") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-6, k = 12.0;
  for (SolutionTag tag : kAll)
    for (int i = 0; i < 50; ++i) {
      const Vec2 x(u(rng), u(rng));
      if (near_pole(x)) continue;
      const SolutionValue s = eval_solution(tag, k, x);
      const cd gx = (eval_solution(tag, k, x + Vec2(h, 0)).value - eval_solution(tag, k, x - Vec2(h, 0)).value) / (2 * h);
      const cd gy = (eval_solution(tag, k, x + Vec2(0, h)).value - eval_solution(tag, k, x - Vec2(0, h)).value) / (2 * h);
      CHECK(std::abs(gx - s.gradient.x()) + std::abs(gy - s.gradient.y()) <= 1e-6 * s.gradient.norm() + 1e-8);
    }
}

TEST_CASE("closed forms") {
  CHECK(eval_solution(SolutionTag::U0, 7.0, Vec2(0, 0)).value == cd(1.0));
  const Vec2 x(0.3, 0.8);
  CHECK(std::abs(eval_solution(SolutionTag::U1, 9.0, x).value - eval_solution(SolutionTag::U1, 9.0, Vec2(x.y(), x.x())).value) <= 1e-15);
  const double a = 2 * pi / 17;
  CHECK(std::abs(eval_solution(SolutionTag::U4, 15.0, x).value -
                 std::exp(cd(0, 15.0 * (std::cos(a) * x.x() + std::sin(a) * x.y())))) <= 1e-14);

  // u2 = H0(k |x - x0|) against a 50-digit Boost evaluation
  using big = boost::multiprecision::cpp_bin_float_50;
  const big r = big(20) * sqrt(big(0.75) * big(0.75) + big(0.5) * big(0.5));
  const cd ref(static_cast<double>(boost::math::cyl_bessel_j(0, r)), static_cast<double>(boost::math::cyl_neumann(0, r)));
  CHECK(std::abs(eval_solution(SolutionTag::U2, 20.0, Vec2(0.5, 0.5)).value - ref) <= 1e-10 * std::abs(ref));

  CHECK_THROWS_AS(eval_solution(SolutionTag::U3, 10.0, Vec2(0.0, 0.5)), SingularPointError);
  CHECK_THROWS_AS(eval_solution(SolutionTag::U2, 10.0, Vec2(-0.25, 0.0)), SingularPointError);
  CHECK(parse_solution_tag("u3") == SolutionTag::U3);
  CHECK(to_string(SolutionTag::U4) == "u4");
  CHECK_THROWS_AS(parse_solution_tag("u5"), std::invalid_argument);
}

TEST_CASE("u3 near its pole") {
  // |u3| ~ C r^{2/3} along theta = 0
  std::vector<double> lr, lu;
  for (double r = 1e-4; r <= 1e-2 * 1.0001; r *= std::pow(10.0, 0.25)) {
    lr.push_back(std::log(r));
    lu.push_back(std::log(std::abs(eval_solution(SolutionTag::U3, 10.0, Vec2(r, 0.5)).value)));
  }
  const double slope = (lu.back() - lu.front()) / (lr.back() - lr.front());
  CHECK(std::abs(slope - 2.0 / 3.0) <= 0.01);
  // the branch cut lies outside the square: the field is even in y - 0.5 and
  // continuous across the vertical line through the pole
  for (double t : {0.01, 0.2, 0.5})
    for (double x : {0.0, 1e-9, 0.3}) {
      const cd up = eval_solution(SolutionTag::U3, 10.0, Vec2(x, 0.5 + t)).value;
      const cd dn = eval_solution(SolutionTag::U3, 10.0, Vec2(x, 0.5 - t)).value;
      CHECK(std::abs(up - dn) <= 1e-14);
    }
  const double j = boost::math::cyl_bessel_j(2.0 / 3.0, 10.0 * 0.2);
  CHECK(eval_solution(SolutionTag::U3, 10.0, Vec2(0.0, 0.7)).value.real() == doctest::Approx(j * std::cos(pi / 3.0)));
}

TEST_CASE("boundary data") {
  const double k = 8.0;
  const ProblemSpec s = boundary_data(SolutionTag::U0, k, 1);
  const Vec2 right(1.0, 0.3), top(0.4, 1.0);
  const cd u_right = eval_solution(SolutionTag::U0, k, right).value;
  CHECK(std::abs(s.g_R(right, Vec2(1, 0)) - cd(0, 2 * k) * u_right) <= 1e-13);
  CHECK(std::abs(boundary_data(SolutionTag::U0, k, -1).g_R(right, Vec2(1, 0))) <= 1e-13);
  CHECK(std::abs(s.g_N(top, Vec2(0, 1))) == 0.0);
  CHECK(s.g_D(top, Vec2(0, 1)) == eval_solution(SolutionTag::U0, k, top).value);
  // u3 data vanishes at the pole instead of throwing
  const ProblemSpec s3 = boundary_data(SolutionTag::U3, 10.0);
  CHECK(s3.g_R(Vec2(0.0, 0.5), Vec2(-1, 0)) == cd(0.0));
  CHECK(s3.singular_points.size() == 1);

  // u1, k = 20: g_R against a finite-difference normal derivative
  const ProblemSpec s1 = boundary_data(SolutionTag::U1, 20.0);
  for (double t = 0.05; t < 1.0; t += 0.1) {
    const Vec2 x(t, 0.0), n(0, -1);
    const double h = 1e-6;
    const cd dn = -(eval_solution(SolutionTag::U1, 20.0, x + Vec2(0, h)).value -
                    eval_solution(SolutionTag::U1, 20.0, x - Vec2(0, h)).value) / (2 * h);
    const cd expect = dn + cd(0, 20.0) * eval_solution(SolutionTag::U1, 20.0, x).value;
    CHECK(std::abs(s1.g_R(x, n) - expect) <= 1e-6 * std::abs(expect));
  }
}

TEST_CASE("scattering setups") {
  const ScatteringSetup soft = make_scattering(ScatterKind::Soft, SolutionTag::U0, 15.0);
  CHECK(soft.spec.theta == 1);
  CHECK(soft.spec.g_D(Vec2(0, 1.5), Vec2(1, 0)) == cd(0.0));
  const Vec2 x(2.0, 0.7);
  CHECK(std::abs(soft.spec.g_R(x, Vec2(1, 0)) - cd(0, 30.0) * eval_solution(SolutionTag::U0, 15.0, x).value) <= 1e-12);
  const ScatteringSetup hard = make_scattering(ScatterKind::Hard, SolutionTag::U4, 15.0);
  CHECK(hard.spec.g_N(Vec2(0, 1.5), Vec2(1, 0)) == cd(0.0));
  CHECK_THROWS_AS(make_scattering(ScatterKind::Soft, SolutionTag::U2, 15.0), std::invalid_argument);

  const PolygonalMesh m = build_hole_mesh(1);
  const PolygonalMesh ms = resolve_scatterer(m, ScatterKind::Soft), mh = resolve_scatterer(m, ScatterKind::Hard);
  CHECK(ms.count_boundary(BoundaryLabel::Dirichlet) == 8);
  CHECK(mh.count_boundary(BoundaryLabel::Neumann) == 8);
  CHECK(mh.count_boundary(BoundaryLabel::Robin) == 24);
  CHECK(parse_scatter_kind("hard") == ScatterKind::Hard);
  CHECK_THROWS_AS(parse_scatter_kind("wet"), std::invalid_argument);
}
