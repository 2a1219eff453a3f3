#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzyds/complex_matrix.hpp"
#include "fuzzyds/cs_core.hpp"
#include "fuzzyds/hyperspherical.hpp"
#include "fuzzyds/observable_expr.hpp"
#include "fuzzyds/quadrature.hpp"

namespace fuzzyds::ds4 {

// 4d de Sitter hyperboloid over R x S^3. The principal series is labeled by
// (nu, s) with spin s a positive half-integer; the curvature length
// H^{-1} = r s sqrt(nu^2 + 1/4) is a derived identity.
struct Params {
  double r;
  double nu;
  double s;
  double epsilon;

  Params(double r_, double nu_, double s_, double epsilon_)
      : r(r_), nu(nu_), s(s_), epsilon(epsilon_) {
    if (!(r > 0.0))
      throw std::invalid_argument("ds4: r must be > 0");
    if (!(nu > 0.0))
      throw std::invalid_argument("ds4: nu must be > 0 (principal series)");
    if (!(epsilon > 0.0))
      throw std::invalid_argument("ds4: epsilon must be > 0");
    const double two_s = 2.0 * s;
    if (!(s > 0.0) || std::floor(two_s) != two_s)
      throw std::invalid_argument(
          "ds4: s must be a positive half-integer (2s a positive integer)");
  }

  double h_inv() const { return r * s * std::sqrt(nu * nu + 0.25); }
  int component_dim() const { return int(std::lround(2.0 * s)) + 1; }
  // quartic Casimir eigenvalue in the (nu, s) principal series
  double casimir_constant() const { return (nu * nu + 0.25) * s * (s + 1.0); }
};

struct S3Point {
  double chi, theta, phi;

  std::array<double, 4> xi() const {
    const double sc = std::sin(chi);
    return {std::cos(chi), sc * std::sin(theta) * std::cos(phi),
            sc * std::sin(theta) * std::sin(phi), sc * std::cos(theta)};
  }
};

// Fixed orthogonal complex structure on R^4; xi_perp = J xi is a unit field
// on S^3 with xi . xi_perp = 0 everywhere.
inline std::array<double, 4> perp(const std::array<double, 4> &xi) {
  return {-xi[1], xi[0], -xi[3], xi[2]};
}

inline std::array<double, 5> embed4(const Params &p, double tau,
                                    const S3Point &pt) {
  const auto xi = pt.xi();
  const auto xp = perp(xi);
  const double h = p.h_inv();
  std::array<double, 5> x{};
  x[0] = p.r * tau;
  for (int k = 0; k < 4; ++k)
    x[std::size_t(k) + 1] = p.r * tau * xi[std::size_t(k)] + h * xp[std::size_t(k)];
  return x;
}

inline double eta_norm5(const std::array<double, 5> &x) {
  return x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3] - x[4] * x[4];
}

struct Label {
  int L, l, m, sigma; // sigma in 1..2s+1
  friend bool operator==(const Label &, const Label &) = default;
};

// Orthonormal eigenbasis of the fuzzy time operator on L^2_{C^{2s+1}}(S^3):
// labels with their spectrum values tau_i, and the C^{2s+1}-valued functions
// Z_J(xi). The principal-series construction only fixes this data abstractly,
// so it enters as an interface.
class BasisProvider : public CompactFamily {
public:
  int angle_count() const override { return 3; }
  virtual double tau_center(int i) const = 0;
  virtual Label label(int i) const = 0;
  virtual double spin() const = 0;
  virtual double nu() const = 0;

  double max_abs_center() const {
    double m = 0.0;
    for (int i = 0; i < count(); ++i)
      m = std::max(m, std::fabs(tau_center(i)));
    return m;
  }

  bool spectrum_symmetric(double tol = 1e-12) const {
    for (int i = 0; i < count(); ++i) {
      const double t = tau_center(i);
      bool found = false;
      for (int j = 0; j < count(); ++j)
        if (std::fabs(tau_center(j) + t) <= tol) {
          found = true;
          break;
        }
      if (!found)
        return false;
    }
    return true;
  }
};

// Assigns spectrum values tau_J to specific labels, overriding the model
// default tau_J = m.
class SpectrumTable {
public:
  void set(const Label &lab, double tau) { entries_.emplace_back(lab, tau); }
  std::optional<double> get(const Label &lab) const {
    for (const auto &e : entries_)
      if (e.first == lab)
        return e.second;
    return std::nullopt;
  }
  std::size_t size() const { return entries_.size(); }

private:
  std::vector<std::pair<Label, double>> entries_;
};

// Stand-in eigenbasis built from scalar hyperspherical harmonics tensored
// with the canonical C^{2s+1} unit vectors:
//   Z_{(L,l,m,sigma)}(xi) = Y_{Llm}(xi) e_sigma,  0 <= l <= L <= L_max.
// The default spectrum tau_J = m is a placeholder, not principal-series
// physics; override it with a SpectrumTable when actual eigenvalues are
// available.
class ModelProvider final : public BasisProvider {
public:
  ModelProvider(double spin, double nu, int l_max,
                const SpectrumTable *table = nullptr)
      : spin_(spin), nu_(nu) {
    if (l_max < 0)
      throw std::invalid_argument("ModelProvider: L_max must be >= 0");
    const int d = int(std::lround(2.0 * spin)) + 1;
    for (int L = 0; L <= l_max; ++L)
      for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m)
          for (int sigma = 1; sigma <= d; ++sigma) {
            const Label lab{L, l, m, sigma};
            labels_.push_back(lab);
            double tau = double(m);
            if (table) {
              if (const auto t = table->get(lab))
                tau = *t;
            }
            centers_.push_back(tau);
          }
    component_dim_ = d;
  }

  int count() const override { return int(labels_.size()); }
  int component_dim() const override { return component_dim_; }
  double tau_center(int i) const override { return centers_[std::size_t(i)]; }
  Label label(int i) const override { return labels_[std::size_t(i)]; }
  double spin() const override { return spin_; }
  double nu() const override { return nu_; }

  void evaluate(int i, std::span<const double> angles,
                cdouble *out) const override {
    const Label &lab = labels_[std::size_t(i)];
    for (int k = 0; k < component_dim_; ++k)
      out[k] = cdouble{};
    out[lab.sigma - 1] = hyperspherical_harmonic(lab.L, lab.l, lab.m,
                                                 angles[0], angles[1],
                                                 angles[2]);
  }

private:
  double spin_;
  double nu_;
  int component_dim_;
  std::vector<Label> labels_;
  std::vector<double> centers_;
};

inline std::shared_ptr<const BasisProvider>
model_provider(const Params &p, int l_max, const SpectrumTable *table = nullptr) {
  return std::make_shared<ModelProvider>(p.s, p.nu, l_max, table);
}

inline BasisSet provider_basis(const Params &p,
                               std::shared_ptr<const BasisProvider> provider) {
  std::vector<double> centers(std::size_t(provider->count()));
  for (int i = 0; i < provider->count(); ++i)
    centers[std::size_t(i)] = provider->tau_center(i);
  return BasisSet(p.epsilon, std::move(centers), provider);
}

struct GridOptions {
  int nodes_per_unit = 20;
  int n_chi = 32;
  int n_theta = 32;
  int n_phi = 32;
};

inline ProductGrid default_grid(const Params &p, const BasisProvider &provider,
                                const GridOptions &opt = {}) {
  const int max_center = int(std::ceil(provider.max_abs_center()));
  return s3_product_grid(opt.n_chi, opt.n_theta, opt.n_phi)
      .with_time(tau_window_grid(max_center, p.epsilon, opt.nodes_per_unit));
}

inline CoherentState vector_cs(const Params &p,
                               std::shared_ptr<const BasisProvider> provider,
                               double tau, const S3Point &pt) {
  return coherent_state(provider_basis(p, provider),
                        Point::r_x_s3(tau, pt.chi, pt.theta, pt.phi));
}

inline expr::Bindings chart_constants(const Params &p) {
  return expr::Bindings{{"r", p.r}, {"Hinv", p.h_inv()}};
}

inline Observable chart_observable(const Params &p, const expr::Expr &f) {
  return make_observable(f, {"chi", "theta", "phi"}, chart_constants(p));
}

inline ComplexMatrix quantize4(const Params &p,
                               std::shared_ptr<const BasisProvider> provider,
                               const expr::Expr &f, const ProductGrid &grid) {
  return quantize(provider_basis(p, provider), chart_observable(p, f), grid);
}

inline ComplexMatrix quantize4(const Params &p,
                               std::shared_ptr<const BasisProvider> provider,
                               const Observable &f, const ProductGrid &grid) {
  return quantize(provider_basis(p, provider), f, grid);
}

// Orthonormality defect of the compact family alone:
// max |int Z^dag_{J'} Z_J mu(dxi) - delta_{J'J}| on the given S^3 grid.
inline double orthonormality_defect(const CompactFamily &family,
                                    const ProductGrid &s3grid) {
  const int n = family.count();
  const int d = family.component_dim();
  ComplexMatrix gram(n);
  std::vector<cdouble> z(std::size_t(n) * d);
  for (int node = 0; node < s3grid.compact_size(); ++node) {
    const auto ang = s3grid.angles_at(node);
    const double w = s3grid.compact_weight(node);
    for (int i = 0; i < n; ++i)
      family.evaluate(i, ang, z.data() + std::size_t(i) * d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cdouble dot{};
        for (int sig = 0; sig < d; ++sig)
          dot += std::conj(z[std::size_t(i) * d + sig]) *
                 z[std::size_t(j) * d + sig];
        gram(i, j) += w * dot;
      }
  }
  return max_abs_diff(gram, ComplexMatrix::identity(n));
}

struct ConsistencyReport {
  double orthonormality_defect;
  double casimir_constant; // (nu^2 + 1/4) s (s+1)
  double fuzzy_radius_sq;  // r^2 s (s+1) (nu^2 + 1/4)
  double h_inv_sq;
  double relation_residual; // H^{-1} - r s sqrt(nu^2 + 1/4)
  bool spectrum_symmetric;
};

inline ConsistencyReport provider_consistency(const Params &p,
                                              const BasisProvider &provider,
                                              const ProductGrid &s3grid) {
  ConsistencyReport rep{};
  rep.orthonormality_defect = orthonormality_defect(provider, s3grid);
  const double nu = provider.nu();
  const double s = provider.spin();
  rep.casimir_constant = (nu * nu + 0.25) * s * (s + 1.0);
  rep.fuzzy_radius_sq = p.r * p.r * rep.casimir_constant;
  rep.h_inv_sq = p.h_inv() * p.h_inv();
  rep.relation_residual = p.h_inv() - p.r * p.s * std::sqrt(p.nu * p.nu + 0.25);
  rep.spectrum_symmetric = provider.spectrum_symmetric();
  return rep;
}

} // namespace fuzzyds::ds4
