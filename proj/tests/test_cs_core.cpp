#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "fuzzyds/cs_core.hpp"
#include "fuzzyds/ds2.hpp"
#include "fuzzyds/hermitian_eigen.hpp"

using namespace fuzzyds;
using std::numbers::pi;

namespace {

// Dead-simple reference quantization: per-node nested sums, no factorization
// tricks. Slow, only for small truncations.
template <class F>
ComplexMatrix quantize_direct(const BasisSet &basis, F f,
                              const ProductGrid &grid) {
  const auto &time = grid.time();
  const int n_basis = basis.size();
  const int d = basis.component_dim();
  ComplexMatrix out(n_basis);
  std::vector<cdouble> zp(static_cast<std::size_t>(d)), zn(static_cast<std::size_t>(d));
  for (int a = 0; a < grid.compact_size(); ++a) {
    const auto ang = grid.angles_at(a);
    for (int t = 0; t < time.size(); ++t) {
      const double tau = time.nodes[std::size_t(t)];
      const double w =
          grid.compact_weight(a) * time.weights[std::size_t(t)];
      Point x{tau, {0, 0, 0}, int(ang.size())};
      for (std::size_t k = 0; k < ang.size(); ++k)
        x.angle_data[k] = ang[k];
      const cdouble fv = f(tau, ang);
      for (int np = 0; np < n_basis; ++np) {
        basis.evaluate(np, x, zp.data());
        for (int n = 0; n < n_basis; ++n) {
          basis.evaluate(n, x, zn.data());
          cdouble dot{};
          for (int s = 0; s < d; ++s)
            dot += std::conj(zp[std::size_t(s)]) * zn[std::size_t(s)];
          out(np, n) += w * fv * dot;
        }
      }
    }
  }
  return out;
}

// Fourier family with every member rotated by a fixed global phase.
class PhasedFourier final : public CompactFamily {
public:
  PhasedFourier(int M, double alpha)
      : inner_(M), phase_(std::polar(1.0, alpha)) {}
  int count() const override { return inner_.count(); }
  int component_dim() const override { return 1; }
  int angle_count() const override { return 1; }
  void evaluate(int n, std::span<const double> angles,
                cdouble *out) const override {
    inner_.evaluate(n, angles, out);
    out[0] *= phase_;
  }

private:
  ds2::FourierFamily inner_;
  cdouble phase_;
};

// Members 0 and 1 of the Fourier family mixed by a fixed 2x2 unitary.
class MixedFourier final : public CompactFamily {
public:
  explicit MixedFourier(int M) : inner_(M) {}
  int count() const override { return inner_.count(); }
  int component_dim() const override { return 1; }
  int angle_count() const override { return 1; }
  void evaluate(int n, std::span<const double> angles,
                cdouble *out) const override {
    if (n > 1) {
      inner_.evaluate(n, angles, out);
      return;
    }
    cdouble z0, z1;
    inner_.evaluate(0, angles, &z0);
    inner_.evaluate(1, angles, &z1);
    const double c = std::cos(0.3), s = std::sin(0.3);
    const cdouble u = std::polar(1.0, 0.7);
    out[0] = (n == 0) ? c * z0 + s * u * z1
                      : -s * std::conj(u) * z0 + c * z1;
  }

private:
  ds2::FourierFamily inner_;
};

// Single normalized Gaussian times the constant function on the circle.
class OneElementFamily final : public CompactFamily {
public:
  int count() const override { return 1; }
  int component_dim() const override { return 1; }
  int angle_count() const override { return 1; }
  void evaluate(int, std::span<const double>, cdouble *out) const override {
    out[0] = 1.0;
  }
};

BasisSet mixed_basis(int M, double epsilon,
                     std::shared_ptr<const CompactFamily> family) {
  std::vector<double> centers(std::size_t(2 * M + 1));
  for (int n = 0; n <= 2 * M; ++n)
    centers[std::size_t(n)] = double(n - M);
  return BasisSet(epsilon, std::move(centers), std::move(family));
}

} // namespace

TEST_CASE("normalization matches the truncated Gaussian-train sum") {
  const ds2::Params p(0.5, 2.0, 1.0, 10);
  const BasisSet b = ds2::basis(p);

  double oracle = 0.0;
  for (int m = -10; m <= 10; ++m)
    oracle += std::exp(-double(m) * m);
  oracle /= std::sqrt(pi);

  const double n0 = normalization(b, Point::cylinder(0.0, 0.0));
  CHECK(std::fabs(n0 - oracle) < 1e-15);
  CHECK(n0 == doctest::Approx(1.000104).epsilon(1e-6));

  // theta independence
  const double n1 = normalization(b, Point::cylinder(0.0, 2.17));
  CHECK(std::fabs(n0 - n1) < 1e-13);

  // shift by one label inside the window
  const ds2::Params p20(0.5, 2.0, 1.0, 20);
  const BasisSet b20 = ds2::basis(p20);
  CHECK(std::fabs(normalization(b20, Point::cylinder(0.3, 1.0)) -
                  normalization(b20, Point::cylinder(1.3, 1.0))) < 1e-12);
}

TEST_CASE("normalization is invariant under a global basis phase") {
  const int M = 6;
  const BasisSet plain =
      mixed_basis(M, 1.0, std::make_shared<ds2::FourierFamily>(M));
  const BasisSet phased =
      mixed_basis(M, 1.0, std::make_shared<PhasedFourier>(M, 1.1));
  const Point x = Point::cylinder(0.7, 0.9);
  CHECK(std::fabs(normalization(plain, x) - normalization(phased, x)) < 1e-14);
}

TEST_CASE("coherent states are normalized and peak at their center") {
  const ds2::Params p(0.5, 2.0, 0.5, 8);
  const BasisSet b = ds2::basis(p);

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> utau(-6.0, 6.0), uth(0.0, 2.0 * pi);
  for (int trial = 0; trial < 25; ++trial) {
    const auto cs = coherent_state(b, Point::cylinder(utau(rng), uth(rng)));
    double norm2 = 0.0;
    for (const auto &c : cs.coefficients)
      norm2 += std::norm(c);
    CHECK(std::fabs(norm2 - 1.0) < 1e-12);
  }

  const int m0 = 3;
  const auto cs = coherent_state(b, Point::cylinder(double(m0), 0.0));
  int argmax = 0;
  for (int n = 0; n < b.size(); ++n)
    if (std::abs(cs.coeff(0, n)) > std::abs(cs.coeff(0, argmax)))
      argmax = n;
  CHECK(argmax == m0 + p.M);

  // 2pi periodicity in theta
  const auto ca = coherent_state(b, Point::cylinder(0.4, 1.2));
  const auto cb = coherent_state(b, Point::cylinder(0.4, 1.2 + 2.0 * pi));
  for (int n = 0; n < b.size(); ++n)
    CHECK(std::abs(ca.coeff(0, n) - cb.coeff(0, n)) < 1e-13);
}

TEST_CASE("identity resolution defect") {
  SUBCASE("ds2 default grids resolve the identity") {
    const ds2::Params p(0.5, 2.0, 0.1, 10);
    CHECK(identity_resolution_defect(ds2::basis(p), ds2::default_grid(p)) <
          1e-10);
  }
  SUBCASE("one-element basis") {
    const BasisSet b(1.0, {0.0}, std::make_shared<OneElementFamily>());
    const auto grid = theta_circle_grid(4).with_time(tau_window_grid(0, 1.0));
    CHECK(identity_resolution_defect(b, grid) < 1e-12);
  }
  SUBCASE("defect norm is invariant under unitary re-mixing") {
    // members sharing one Gaussian center, so mixing the compact factors is
    // a unitary rotation of the basis functions; coarse grid so the defect
    // is well above the noise floor
    const int M = 1;
    const std::vector<double> centers(3, 0.0);
    const auto grid =
        theta_circle_grid(5).with_time(gauss_legendre(16, -14.0, 14.0));
    const BasisSet plain(1.0, centers, std::make_shared<ds2::FourierFamily>(M));
    const BasisSet mixed(1.0, centers, std::make_shared<MixedFourier>(M));
    const auto g1 = quantize(plain, Observable::constant(1.0), grid);
    const auto g2 = quantize(mixed, Observable::constant(1.0), grid);
    const auto id = ComplexMatrix::identity(plain.size());
    const double d1 = frobenius_norm(g1 - id);
    const double d2 = frobenius_norm(g2 - id);
    CHECK(d1 > 1e-4); // genuinely coarse
    CHECK(std::fabs(d1 - d2) < 1e-12 * (1.0 + d1));
  }
}

TEST_CASE("defect decreases along a doubling refinement sequence") {
  const int M = 4;
  const BasisSet b =
      mixed_basis(M, 1.0, std::make_shared<ds2::FourierFamily>(M));
  const int thetas[] = {3, 5, 9, 17};
  const int taus[] = {16, 32, 64, 128};
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const auto grid = theta_circle_grid(thetas[k])
                          .with_time(gauss_legendre(taus[k], -14.0, 14.0));
    const double defect = identity_resolution_defect(b, grid);
    CHECK(defect <= prev * 1.001 + 1e-14);
    prev = defect;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("quantize reproduces closed forms on the 2d chart") {
  const ds2::Params p(0.5, 2.0, 0.1, 10);
  const BasisSet b = ds2::basis(p);
  const auto grid = ds2::default_grid(p);

  const auto one = quantize(b, Observable::constant(1.0), grid, -p.M);
  CHECK(max_abs_diff(one, ComplexMatrix::identity(b.size(), -p.M)) < 1e-10);

  const auto atau =
      quantize(b, Observable::time_only([](double t) { return t; }), grid,
               -p.M);
  ComplexMatrix diag_m(b.size(), -p.M);
  for (int m = -p.M; m <= p.M; ++m)
    diag_m(m + p.M, m + p.M) = double(m);
  CHECK(max_abs_diff(atau, diag_m) < 1e-10);

  // e^{i theta} lands on the label-raising line with weight e^{-eps/4}
  const auto eip = quantize(
      b,
      Observable::compact_only(
          [](std::span<const double> a) { return std::polar(1.0, a[0]); }),
      grid, -p.M);
  const double expected = std::exp(-p.epsilon / 4.0);
  double worst_band = 0.0, worst_off = 0.0;
  for (int i = 0; i < b.size(); ++i)
    for (int j = 0; j < b.size(); ++j) {
      if (i == j + 1)
        worst_band = std::max(worst_band,
                              std::abs(eip(i, j) - cdouble(expected, 0.0)));
      else
        worst_off = std::max(worst_off, std::abs(eip(i, j)));
    }
  CHECK(worst_band < 1e-10);
  CHECK(worst_off < 1e-10);
}

TEST_CASE("quantize is linear and adjoint-covariant") {
  const ds2::Params p(1.0, 1.0, 0.8, 4);
  const BasisSet b = ds2::basis(p);
  const auto grid = ds2::default_grid(p, {8, 0});

  const auto f = [](double tau, std::span<const double> a) {
    return cdouble(tau * std::cos(a[0]), std::sin(a[0]));
  };
  const auto g = [](double tau, std::span<const double> a) {
    return cdouble(std::cos(2.0 * a[0]), tau);
  };
  const cdouble ca(0.7, -1.3), cb(-0.2, 2.1);
  const auto qf = quantize(b, Observable::general_complex(f), grid);
  const auto qg = quantize(b, Observable::general_complex(g), grid);
  const auto qsum = quantize(
      b,
      Observable::general_complex([&](double tau, std::span<const double> a) {
        return ca * f(tau, a) + cb * g(tau, a);
      }),
      grid);
  CHECK(max_abs_diff(qsum, ca * qf + cb * qg) < 1e-12);

  const auto qconj = quantize(
      b,
      Observable::general_complex([&](double tau, std::span<const double> a) {
        return std::conj(f(tau, a));
      }),
      grid);
  CHECK(max_abs_diff(qconj, adjoint(qf)) < 1e-12);
}

TEST_CASE("quantization of nonnegative observables is nonnegative") {
  const ds2::Params p(1.0, 1.0, 0.5, 6);
  const BasisSet b = ds2::basis(p);
  const auto grid = ds2::default_grid(p);

  const auto q1 = quantize(b,
                           Observable::compact_only(
                               [](std::span<const double> a) {
                                 return cdouble(1.0 + std::cos(a[0]), 0.0);
                               },
                               true),
                           grid);
  CHECK(hermitian_eigenvalues(q1).front() >= -1e-10);

  const auto q2 =
      quantize(b, Observable::time_only([](double t) { return t * t; }), grid);
  CHECK(hermitian_eigenvalues(q2).front() >= -1e-10);
}

TEST_CASE("fast quantization agrees with the direct nested-sum oracle") {
  const int M = 3;
  const BasisSet b =
      mixed_basis(M, 1.0, std::make_shared<ds2::FourierFamily>(M));
  const auto grid = theta_circle_grid(17).with_time(tau_window_grid(M, 1.0, 6));

  SUBCASE("general real observable") {
    const auto f = [](double tau, std::span<const double> a) {
      return tau * std::cos(a[0]);
    };
    const auto fast = quantize(b, Observable::general(f), grid);
    const auto slow = quantize_direct(
        b,
        [&](double t, std::span<const double> a) { return cdouble(f(t, a)); },
        grid);
    CHECK(max_abs_diff(fast, slow) < 1e-12);
  }
  SUBCASE("complex compact-only observable") {
    const auto f = [](std::span<const double> a) {
      return std::polar(1.0, 2.0 * a[0]);
    };
    const auto fast = quantize(b, Observable::compact_only(f), grid);
    const auto slow = quantize_direct(
        b, [&](double, std::span<const double> a) { return f(a); }, grid);
    CHECK(max_abs_diff(fast, slow) < 1e-12);
  }
  SUBCASE("time-only observable") {
    const auto fast =
        quantize(b, Observable::time_only([](double t) { return t * t; }), grid);
    const auto slow = quantize_direct(
        b,
        [](double t, std::span<const double>) { return cdouble(t * t, 0.0); },
        grid);
    CHECK(max_abs_diff(fast, slow) < 1e-12);
  }
}

TEST_CASE("non-finite observables are reported") {
  const ds2::Params p(1.0, 1.0, 1.0, 2);
  const BasisSet b = ds2::basis(p);
  const auto grid = ds2::default_grid(p, {4, 0});
  CHECK_THROWS_AS(
      quantize(b,
               Observable::general([](double, std::span<const double>) {
                 return std::numeric_limits<double>::infinity();
               }),
               grid),
      std::domain_error);
  CHECK_THROWS_AS(
      quantize(b,
               Observable::general([](double, std::span<const double>) {
                 return std::numeric_limits<double>::quiet_NaN();
               }),
               grid),
      std::domain_error);
}

TEST_CASE("lower symbol") {
  const ds2::Params p(0.5, 2.0, 1.0, 8);
  const BasisSet b = ds2::basis(p);
  const auto grid = ds2::default_grid(p);

  const auto id = ComplexMatrix::identity(b.size());
  const ComplexMatrix zero(b.size());
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> utau(-4.0, 4.0), uth(0.0, 2.0 * pi);
  for (int trial = 0; trial < 10; ++trial) {
    const Point x = Point::cylinder(utau(rng), uth(rng));
    CHECK(std::abs(lower_symbol(b, id, x) - cdouble(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(lower_symbol(b, zero, x)) == 0.0);
  }

  const auto atau =
      quantize(b, Observable::time_only([](double t) { return t; }), grid);
  for (const double m0 : {0.0, 2.0, -4.0}) {
    const cdouble v = lower_symbol(b, atau, Point::cylinder(m0, 1.3));
    CHECK(std::fabs(v.imag()) < 1e-12); // self-adjoint => real symbol
    CHECK(v.real() >= m0 - 1.0);
    CHECK(v.real() <= m0 + 1.0);
  }

  CHECK_THROWS_AS(lower_symbol(b, ComplexMatrix(3), Point::cylinder(0, 0)),
                  std::invalid_argument);
}

TEST_CASE("degenerate basis is reported") {
  // single Gaussian far from the evaluation point underflows N(x)
  const BasisSet b(1.0, {0.0}, std::make_shared<OneElementFamily>());
  CHECK_THROWS_AS(normalization(b, Point::cylinder(1e6, 0.0)),
                  std::domain_error);
}
