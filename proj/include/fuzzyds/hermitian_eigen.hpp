#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fuzzyds/complex_matrix.hpp"

namespace fuzzyds {

// Eigenvalues of a self-adjoint matrix by cyclic Jacobi with complex
// rotations. The input is symmetrized as (A + A^dagger)/2 first, so quadrature
// noise in the last digits does not upset the iteration. Ascending order.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix &a,
                                                 double tol = 1e-14) {
  const int n = a.dim();
  ComplexMatrix h(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));

  const auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j)
          s += std::norm(h(i, j));
    return std::sqrt(s);
  };

  const double scale = frobenius_norm(h);
  const double stop = tol * (1.0 + scale);

  for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cdouble g = h(p, q);
        const double ag = std::abs(g);
        if (ag <= 1e-300)
          continue;
        // Phase factor takes the (p,q) block to a real symmetric one, then a
        // real Jacobi rotation annihilates it.
        const cdouble u = g / ag;
        const double alpha = h(p, p).real();
        const double beta = h(q, q).real();
        const double kappa = (beta - alpha) / (2.0 * ag);
        const double t = (kappa >= 0.0)
                             ? 1.0 / (kappa + std::sqrt(kappa * kappa + 1.0))
                             : -1.0 / (-kappa + std::sqrt(kappa * kappa + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cdouble us = u * s;

        // columns: A <- A J with J = [[c, s], [-conj(u) s, conj(u) c]]
        for (int i = 0; i < n; ++i) {
          const cdouble aip = h(i, p);
          const cdouble aiq = h(i, q);
          h(i, p) = c * aip - std::conj(us) * aiq;
          h(i, q) = s * aip + std::conj(u) * c * aiq;
        }
        // rows: A <- J^dagger A
        for (int j = 0; j < n; ++j) {
          const cdouble apj = h(p, j);
          const cdouble aqj = h(q, j);
          h(p, j) = c * apj - us * aqj;
          h(q, j) = s * apj + u * c * aqj;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
      }
    }
  }

  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    ev[std::size_t(i)] = h(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

} // namespace fuzzyds
