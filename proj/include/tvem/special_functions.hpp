#pragma once

#include <complex>

namespace tvem {

/// Argument above which the large-argument Hankel expansion replaces the
/// ascending series. At 18 the truncated expansion is accurate to ~e^{-36};
/// at 12 it would leave a jump of ~3e-10.
inline constexpr double kBesselAsymptoticSwitch = 18.0;

/// J_nu(x) for real nu > -1 (non-integer nu allowed) and x >= 0.
double bessel_j(double nu, double x);
double bessel_y0(double x);
double bessel_y1(double x);

/// H^(1)_n(x) = J_n(x) + i Y_n(x), n in {0, 1}, x > 0.
std::complex<double> hankel1_0(double x);
std::complex<double> hankel1_1(double x);

}  // namespace tvem
