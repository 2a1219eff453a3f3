#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "fuzzyds/complex_matrix.hpp"
#include "fuzzyds/quadrature.hpp"

namespace fuzzyds {

// Chart point: real time coordinate plus up to three compact coordinates
// (theta in 2d; chi, theta, phi in 4d).
struct Point {
  double tau = 0.0;
  std::array<double, 3> angle_data{};
  int angle_count = 1;

  static Point cylinder(double tau, double theta) {
    return {tau, {theta, 0.0, 0.0}, 1};
  }
  static Point r_x_s3(double tau, double chi, double theta, double phi) {
    return {tau, {chi, theta, phi}, 3};
  }
  std::span<const double> angles() const {
    return {angle_data.data(), std::size_t(angle_count)};
  }
};

// Orthonormal family on the compact factor of the chart. Scalar valued in the
// 2d case (component_dim 1), C^{2s+1}-valued in the 4d case.
class CompactFamily {
public:
  virtual ~CompactFamily() = default;
  virtual int count() const = 0;
  virtual int component_dim() const = 0;
  virtual int angle_count() const = 0;
  // writes component_dim() complex values for member n at the given angles
  virtual void evaluate(int n, std::span<const double> angles,
                        cdouble *out) const = 0;
};

// Truncated orthonormal family phi_n(x) = g_n(tau) * Z_n(angles) with
// g_n a normalized Gaussian (eps/pi)^{1/4} e^{-(eps/2)(tau - c_n)^2} centered
// on the fuzzy-time spectrum value c_n of label n.
class BasisSet {
public:
  BasisSet(double epsilon, std::vector<double> tau_centers,
           std::shared_ptr<const CompactFamily> family)
      : epsilon_(epsilon), centers_(std::move(tau_centers)),
        family_(std::move(family)) {
    if (!(epsilon_ > 0.0))
      throw std::invalid_argument("BasisSet: epsilon must be > 0");
    if (!family_ || family_->count() != int(centers_.size()))
      throw std::invalid_argument("BasisSet: center/family size mismatch");
    // distinct spectrum values, in first-appearance order
    center_index_.resize(centers_.size());
    for (std::size_t n = 0; n < centers_.size(); ++n) {
      int found = -1;
      for (std::size_t k = 0; k < distinct_.size(); ++k)
        if (distinct_[k] == centers_[n]) {
          found = int(k);
          break;
        }
      if (found < 0) {
        found = int(distinct_.size());
        distinct_.push_back(centers_[n]);
      }
      center_index_[n] = found;
    }
  }

  int size() const { return int(centers_.size()); }
  int component_dim() const { return family_->component_dim(); }
  double epsilon() const { return epsilon_; }
  double tau_center(int n) const { return centers_[std::size_t(n)]; }
  std::span<const double> tau_centers() const { return centers_; }
  const CompactFamily &family() const { return *family_; }

  std::span<const double> distinct_centers() const { return distinct_; }
  int center_index(int n) const { return center_index_[std::size_t(n)]; }

  double max_abs_center() const {
    double m = 0.0;
    for (double c : centers_)
      m = std::max(m, std::fabs(c));
    return m;
  }

  double gauss_factor(double tau, double center) const {
    const double d = tau - center;
    return std::pow(epsilon_ / std::numbers::pi, 0.25) *
           std::exp(-0.5 * epsilon_ * d * d);
  }

  // phi_n(x), all components
  void evaluate(int n, const Point &x, cdouble *out) const {
    family_->evaluate(n, x.angles(), out);
    const double g = gauss_factor(x.tau, centers_[std::size_t(n)]);
    for (int s = 0; s < component_dim(); ++s)
      out[s] *= g;
  }

private:
  double epsilon_;
  std::vector<double> centers_;
  std::shared_ptr<const CompactFamily> family_;
  std::vector<double> distinct_;
  std::vector<int> center_index_;
};

// Coherent state |x>: d x N coefficient array (component index sigma runs
// slowest), unit Frobenius norm; norm_factor keeps the N(x) that was used.
struct CoherentState {
  int basis_count = 0;
  int component_dim = 1;
  std::vector<cdouble> coefficients; // coefficients[sigma * basis_count + n]
  double norm_factor = 0.0;

  cdouble coeff(int sigma, int n) const {
    return coefficients[std::size_t(sigma) * basis_count + std::size_t(n)];
  }
};

// N(x) = sum_n |phi_n(x)|^2 (components summed).
inline double normalization(const BasisSet &basis, const Point &x) {
  const int d = basis.component_dim();
  std::vector<cdouble> buf(static_cast<std::size_t>(d));
  double s = 0.0;
  for (int n = 0; n < basis.size(); ++n) {
    basis.evaluate(n, x, buf.data());
    for (int sig = 0; sig < d; ++sig)
      s += std::norm(buf[std::size_t(sig)]);
  }
  if (!(s > 0.0))
    throw std::domain_error(
        "normalization: basis degenerate at this point (N(x) underflowed)");
  return s;
}

inline CoherentState coherent_state(const BasisSet &basis, const Point &x) {
  const int n_basis = basis.size();
  const int d = basis.component_dim();
  CoherentState cs;
  cs.basis_count = n_basis;
  cs.component_dim = d;
  cs.norm_factor = normalization(basis, x);
  cs.coefficients.assign(std::size_t(d) * n_basis, cdouble{});
  const double inv = 1.0 / std::sqrt(cs.norm_factor);
  std::vector<cdouble> buf(static_cast<std::size_t>(d));
  for (int n = 0; n < n_basis; ++n) {
    basis.evaluate(n, x, buf.data());
    for (int sig = 0; sig < d; ++sig)
      cs.coefficients[std::size_t(sig) * n_basis + std::size_t(n)] =
          std::conj(buf[std::size_t(sig)]) * inv;
  }
  return cs;
}

// <x|A|x>; real within tolerance for self-adjoint A.
inline cdouble lower_symbol(const BasisSet &basis, const ComplexMatrix &a,
                            const Point &x) {
  if (a.dim() != basis.size())
    throw std::invalid_argument("lower_symbol: matrix dim != basis count");
  const CoherentState cs = coherent_state(basis, x);
  cdouble s{};
  for (int sig = 0; sig < cs.component_dim; ++sig)
    for (int i = 0; i < a.dim(); ++i) {
      cdouble row{};
      for (int j = 0; j < a.dim(); ++j)
        row += a(i, j) * cs.coeff(sig, j);
      s += std::conj(cs.coeff(sig, i)) * row;
    }
  return s;
}

// Classical observable f(x) over the chart, with its dependence structure
// declared so the quantization loop can avoid redundant work.
class Observable {
public:
  enum class Dependence { constant, time_only, compact_only, general };

  static Observable constant(cdouble c) {
    Observable o;
    o.dep_ = Dependence::constant;
    o.real_ = (c.imag() == 0.0);
    o.fn_ = [c](double, std::span<const double>) { return c; };
    return o;
  }
  static Observable time_only(std::function<double(double)> f) {
    Observable o;
    o.dep_ = Dependence::time_only;
    o.real_ = true;
    o.fn_ = [f = std::move(f)](double tau, std::span<const double>) {
      return cdouble(f(tau), 0.0);
    };
    return o;
  }
  static Observable compact_only(
      std::function<cdouble(std::span<const double>)> f, bool is_real = false) {
    Observable o;
    o.dep_ = Dependence::compact_only;
    o.real_ = is_real;
    o.fn_ = [f = std::move(f)](double, std::span<const double> ang) {
      return f(ang);
    };
    return o;
  }
  static Observable
  general(std::function<double(double, std::span<const double>)> f) {
    Observable o;
    o.dep_ = Dependence::general;
    o.real_ = true;
    o.fn_ = [f = std::move(f)](double tau, std::span<const double> ang) {
      return cdouble(f(tau, ang), 0.0);
    };
    return o;
  }
  static Observable
  general_complex(std::function<cdouble(double, std::span<const double>)> f) {
    Observable o;
    o.dep_ = Dependence::general;
    o.real_ = false;
    o.fn_ = std::move(f);
    return o;
  }

  Dependence dependence() const { return dep_; }
  bool is_real() const { return real_; }

  cdouble operator()(double tau, std::span<const double> angles) const {
    const cdouble v = fn_(tau, angles);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("observable is not finite at a grid node");
    return v;
  }

private:
  Observable() = default;
  Dependence dep_ = Dependence::general;
  bool real_ = false;
  std::function<cdouble(double, std::span<const double>)> fn_;
};

namespace detail {

// Gaussian factors of every distinct spectrum value at every time node,
// gauss[k * n_tau + t].
inline std::vector<double> gauss_table(const BasisSet &basis,
                                       const QuadratureGrid1D &time) {
  const auto centers = basis.distinct_centers();
  const int nt = time.size();
  std::vector<double> g(centers.size() * std::size_t(nt));
  for (std::size_t k = 0; k < centers.size(); ++k)
    for (int t = 0; t < nt; ++t)
      g[k * std::size_t(nt) + std::size_t(t)] =
          basis.gauss_factor(time.nodes[std::size_t(t)], centers[k]);
  return g;
}

// U[k'][k] = sum_t w_t F(t) G[k'][t] G[k][t] for scalar type S.
template <class S>
inline void weighted_overlap(const std::vector<double> &gauss, int n_centers,
                             const QuadratureGrid1D &time,
                             const std::vector<S> &f_values, std::vector<S> &u) {
  const int nt = time.size();
  u.assign(std::size_t(n_centers) * n_centers, S{});
  for (int kp = 0; kp < n_centers; ++kp) {
    const double *gp = gauss.data() + std::size_t(kp) * nt;
    for (int k = kp; k < n_centers; ++k) {
      const double *gk = gauss.data() + std::size_t(k) * nt;
      S s{};
      for (int t = 0; t < nt; ++t)
        s += f_values[std::size_t(t)] *
             (time.weights[std::size_t(t)] * gp[t] * gk[t]);
      u[std::size_t(kp) * n_centers + k] = s;
      u[std::size_t(k) * n_centers + kp] = s;
    }
  }
}

} // namespace detail

// Berezin-Toeplitz quantization: entry (n', n) of the returned matrix is
//   integral of f(x) conj(phi_{n'}(x)) . phi_n(x) over the chart grid,
// the component index contracted. The 1/N(x) of the coherent states cancels
// against the N(x) measure factor, so N never enters.
inline ComplexMatrix quantize(const BasisSet &basis, const Observable &f,
                              const ProductGrid &grid, int label_offset = 0) {
  if (grid.angle_count() != basis.family().angle_count())
    throw std::invalid_argument("quantize: grid/basis angle count mismatch");
  const QuadratureGrid1D &time = grid.time();
  const int n_basis = basis.size();
  const int d = basis.component_dim();
  const int nc = int(basis.distinct_centers().size());
  const int nt = time.size();

  const std::vector<double> gauss = detail::gauss_table(basis, time);

  const bool fixed_u = f.dependence() == Observable::Dependence::constant ||
                       f.dependence() == Observable::Dependence::time_only;
  const bool real_f = f.is_real();

  // base overlap sum_t w_t G G, reused for compact_only observables
  std::vector<double> ones(std::size_t(nt), 1.0);
  std::vector<double> u_base;

  std::vector<double> u_real;
  std::vector<cdouble> u_cplx;
  if (fixed_u) {
    if (real_f) {
      std::vector<double> fv(static_cast<std::size_t>(nt));
      for (int t = 0; t < nt; ++t)
        fv[std::size_t(t)] = f(time.nodes[std::size_t(t)], {}).real();
      detail::weighted_overlap(gauss, nc, time, fv, u_real);
    } else {
      std::vector<cdouble> fv(static_cast<std::size_t>(nt));
      for (int t = 0; t < nt; ++t)
        fv[std::size_t(t)] = f(time.nodes[std::size_t(t)], {});
      detail::weighted_overlap(gauss, nc, time, fv, u_cplx);
    }
  } else if (f.dependence() == Observable::Dependence::compact_only) {
    detail::weighted_overlap(gauss, nc, time, ones, u_base);
  }

  ComplexMatrix result(n_basis, label_offset);
  std::vector<cdouble> z(std::size_t(n_basis) * d);
  std::vector<double> fv_real(static_cast<std::size_t>(nt));
  std::vector<cdouble> fv_cplx(static_cast<std::size_t>(nt));

  for (int node = 0; node < grid.compact_size(); ++node) {
    const auto ang = grid.angles_at(node);
    const double w = grid.compact_weight(node);

    for (int n = 0; n < n_basis; ++n)
      basis.family().evaluate(n, ang, z.data() + std::size_t(n) * d);

    cdouble scale{1.0, 0.0};
    switch (f.dependence()) {
    case Observable::Dependence::constant:
    case Observable::Dependence::time_only:
      break;
    case Observable::Dependence::compact_only:
      scale = f(0.0, ang);
      break;
    case Observable::Dependence::general:
      if (real_f) {
        for (int t = 0; t < nt; ++t)
          fv_real[std::size_t(t)] = f(time.nodes[std::size_t(t)], ang).real();
        detail::weighted_overlap(gauss, nc, time, fv_real, u_real);
      } else {
        for (int t = 0; t < nt; ++t)
          fv_cplx[std::size_t(t)] = f(time.nodes[std::size_t(t)], ang);
        detail::weighted_overlap(gauss, nc, time, fv_cplx, u_cplx);
      }
      break;
    }

    const bool use_real_u =
        (f.dependence() == Observable::Dependence::compact_only) || real_f;
    for (int np = 0; np < n_basis; ++np) {
      const cdouble *zp = z.data() + std::size_t(np) * d;
      const int kp = basis.center_index(np);
      for (int n = 0; n < n_basis; ++n) {
        const cdouble *zn = z.data() + std::size_t(n) * d;
        cdouble dot{};
        for (int sig = 0; sig < d; ++sig)
          dot += std::conj(zp[sig]) * zn[sig];
        if (dot == cdouble{})
          continue;
        const int k = basis.center_index(n);
        cdouble uval;
        if (f.dependence() == Observable::Dependence::compact_only)
          uval = scale * u_base[std::size_t(kp) * nc + k];
        else if (use_real_u)
          uval = u_real[std::size_t(kp) * nc + k];
        else
          uval = u_cplx[std::size_t(kp) * nc + k];
        result(np, n) += w * uval * dot;
      }
    }
  }
  return result;
}

// Max-entry magnitude of (Gram - identity); by the N-cancellation this equals
// the defect of int |x><x| N(x) mu(dx) from the identity.
inline double identity_resolution_defect(const BasisSet &basis,
                                         const ProductGrid &grid) {
  const ComplexMatrix gram =
      quantize(basis, Observable::constant(1.0), grid);
  return max_abs_diff(gram, ComplexMatrix::identity(gram.dim()));
}

} // namespace fuzzyds
