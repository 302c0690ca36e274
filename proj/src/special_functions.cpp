#include "tvem/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tvem {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

// The ascending series run in long double: near the switch the largest
// terms exceed the result by ~1e7, which would cost seven digits in double.
using Wide = long double;

double j_series(double nu, double x) {
  const Wide y = 0.25L * x * x;
  Wide term = std::pow(Wide(0.5) * x, Wide(nu)) / std::tgamma(Wide(nu) + 1);
  Wide sum = term;
  for (int m = 1; m < 500; ++m) {
    term *= -y / (m * (m + Wide(nu)));
    sum += term;
    if (m > 0.5 * x && std::abs(term) < 1e-21L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

struct PQ {
  double p, q;
};

// P and Q of the Hankel expansion, truncated at the smallest term
PQ hankel_pq(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double a = 1.0;
  double prev = std::abs(a);
  for (int k = 1; k < 200; ++k) {
    const double next = a * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
    if (std::abs(next) > prev) break;
    a = next;
    prev = std::abs(a);
    // a_k enters P (k even) or Q (k odd) with sign (-1)^(k/2) resp. (-1)^((k-1)/2)
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) p += sign * a;
    else q += sign * a;
    if (prev < 1e-17) break;
  }
  return {p, q};
}

std::complex<double> hankel_asymptotic(double nu, double x) {
  const PQ pq = hankel_pq(nu, x);
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  return amp * std::complex<double>(pq.p * std::cos(chi) - pq.q * std::sin(chi),
                                    pq.p * std::sin(chi) + pq.q * std::cos(chi));
}

double y0_series(double x) {
  const Wide y = 0.25L * x * x;
  Wide term = 1;  // y^m / (m!)^2
  Wide harmonic = 0;
  Wide sum = 0;
  for (int m = 1; m < 500; ++m) {
    term *= y / (Wide(m) * m);
    harmonic += Wide(1) / m;
    const Wide t = ((m % 2) ? 1 : -1) * harmonic * term;
    sum += t;
    if (m > 0.5 * x && std::abs(t) < 1e-21L * std::abs(sum)) break;
  }
  return 2.0 / std::numbers::pi * ((std::log(0.5 * x) + kEulerGamma) * j_series(0.0, x) + static_cast<double>(sum));
}

double y1_series(double x) {
  const Wide y = 0.25L * x * x;
  Wide term = 0.5L * x;  // (x/2)^{2m+1} / (m! (m+1)!) with sign (-1)^m
  Wide psi1 = -kEulerGamma;     // psi(m+1)
  Wide psi2 = 1 - kEulerGamma;  // psi(m+2)
  Wide sum = term * (psi1 + psi2);
  for (int m = 1; m < 500; ++m) {
    term *= -y / (Wide(m) * (m + 1));
    psi1 += Wide(1) / m;
    psi2 += Wide(1) / (m + 1);
    const Wide t = term * (psi1 + psi2);
    sum += t;
    if (m > 0.5 * x && std::abs(t) < 1e-21L * std::abs(sum)) break;
  }
  return -2.0 / (std::numbers::pi * x) + 2.0 / std::numbers::pi * std::log(0.5 * x) * j_series(1.0, x) -
         static_cast<double>(sum) / std::numbers::pi;
}

}  // namespace

double bessel_j(double nu, double x) {
  if (x < 0.0) throw std::domain_error("bessel_j needs x >= 0");
  if (nu <= -1.0) throw std::domain_error("bessel_j needs nu > -1");
  if (x == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 ? 0.0 : INFINITY);
  if (x < kBesselAsymptoticSwitch) return j_series(nu, x);
  return hankel_asymptotic(nu, x).real();
}

double bessel_y0(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_y0 needs x > 0");
  if (x < kBesselAsymptoticSwitch) return y0_series(x);
  return hankel_asymptotic(0.0, x).imag();
}

double bessel_y1(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_y1 needs x > 0");
  if (x < kBesselAsymptoticSwitch) return y1_series(x);
  return hankel_asymptotic(1.0, x).imag();
}

std::complex<double> hankel1_0(double x) {
  if (!(x > 0.0)) throw std::domain_error("hankel1_0 needs x > 0");
  if (x < kBesselAsymptoticSwitch) return {j_series(0.0, x), y0_series(x)};
  return hankel_asymptotic(0.0, x);
}

std::complex<double> hankel1_1(double x) {
  if (!(x > 0.0)) throw std::domain_error("hankel1_1 needs x > 0");
  if (x < kBesselAsymptoticSwitch) return {j_series(1.0, x), y1_series(x)};
  return hankel_asymptotic(1.0, x);
}

}  // namespace tvem
