#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fuzzyds {

// Associated Legendre P_l^m(x) for m >= 0, Condon-Shortley phase included.
inline double assoc_legendre(int l, int m, double x) {
  if (m < 0 || m > l)
    throw std::invalid_argument("assoc_legendre: need 0 <= m <= l");
  double pmm = 1.0;
  if (m > 0) {
    const double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= -fact * somx2;
      fact += 2.0;
    }
  }
  if (l == m)
    return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1)
    return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

// Orthonormal spherical harmonic Y_lm(theta, phi) on S^2.
inline std::complex<double> sph_harm(int l, int m, double theta, double phi) {
  const int am = m < 0 ? -m : m;
  if (am > l)
    throw std::invalid_argument("sph_harm: need |m| <= l");
  double fac = 1.0;
  for (int k = l - am + 1; k <= l + am; ++k)
    fac *= k;
  const double norm =
      std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) / fac);
  const double p = assoc_legendre(l, am, std::cos(theta));
  std::complex<double> y = norm * p * std::polar(1.0, am * phi);
  if (m < 0) {
    y = std::conj(y);
    if (am % 2 == 1)
      y = -y;
  }
  return y;
}

// Gegenbauer (ultraspherical) polynomial C_n^{(alpha)}(x).
inline double gegenbauer(int n, double alpha, double x) {
  if (n < 0)
    throw std::invalid_argument("gegenbauer: need n >= 0");
  if (n == 0)
    return 1.0;
  double cm2 = 1.0;
  double cm1 = 2.0 * alpha * x;
  for (int k = 2; k <= n; ++k) {
    const double c =
        (2.0 * x * (k + alpha - 1.0) * cm1 - (k + 2.0 * alpha - 2.0) * cm2) / k;
    cm2 = cm1;
    cm1 = c;
  }
  return cm1;
}

// Scalar hyperspherical harmonic on S^3 in the chart
// xi = (cos chi, sin chi sin theta cos phi, sin chi sin theta sin phi,
//       sin chi cos theta):
//   Y_{Llm} = N_{Ll} sin^l(chi) C_{L-l}^{(l+1)}(cos chi) Y_lm(theta, phi),
// orthonormal for the measure sin^2(chi) sin(theta) dchi dtheta dphi
// (total volume 2 pi^2); Y_000 = 1/sqrt(2 pi^2).
inline std::complex<double> hyperspherical_harmonic(int L, int l, int m,
                                                    double chi, double theta,
                                                    double phi) {
  if (l < 0 || l > L)
    throw std::invalid_argument("hyperspherical_harmonic: need 0 <= l <= L");
  if (m < -l || m > l)
    throw std::invalid_argument("hyperspherical_harmonic: need |m| <= l");
  // N_{Ll} = 2^l l! sqrt( 2 (L+1) (L-l)! / (pi (L+l+1)!) )
  double two_l_lfact = 1.0;
  for (int k = 1; k <= l; ++k)
    two_l_lfact *= 2.0 * k;
  double ratio = 1.0; // (L+l+1)! / (L-l)!
  for (int k = L - l + 1; k <= L + l + 1; ++k)
    ratio *= k;
  const double norm =
      two_l_lfact * std::sqrt(2.0 * (L + 1) / (std::numbers::pi * ratio));
  const double schi = std::sin(chi);
  double sl = 1.0;
  for (int k = 0; k < l; ++k)
    sl *= schi;
  return norm * sl * gegenbauer(L - l, l + 1.0, std::cos(chi)) *
         sph_harm(l, m, theta, phi);
}

} // namespace fuzzyds
