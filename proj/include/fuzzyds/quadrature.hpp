#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fuzzyds {

enum class GridDomain { interval, periodic };

struct QuadratureGrid1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  GridDomain domain = GridDomain::interval;

  int size() const { return int(nodes.size()); }

  double total_weight() const {
    double s = 0.0;
    for (double w : weights)
      s += w;
    return s;
  }

  template <class F> auto integrate(F &&f) const {
    decltype(f(0.0)) s{};
    for (int i = 0; i < size(); ++i)
      s += weights[std::size_t(i)] * f(nodes[std::size_t(i)]);
    return s;
  }
};

// Gauss-Legendre nodes and weights on [a,b]; exact for polynomials of degree
// <= 2n-1. Newton iteration on the Legendre recurrence.
inline QuadratureGrid1D gauss_legendre(int n, double a, double b) {
  if (n < 1)
    throw std::invalid_argument("gauss_legendre: node count must be >= 1");
  if (!(a < b))
    throw std::invalid_argument("gauss_legendre: need a < b");

  QuadratureGrid1D g;
  g.nodes.resize(std::size_t(n));
  g.weights.resize(std::size_t(n));
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= 1e-15)
        break;
    }
    g.nodes[std::size_t(i - 1)] = xm - xl * z;
    g.nodes[std::size_t(n - i)] = xm + xl * z;
    g.weights[std::size_t(i - 1)] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    g.weights[std::size_t(n - i)] = g.weights[std::size_t(i - 1)];
  }
  return g;
}

// Uniform grid on [0, 2pi): nodes 2 pi k / n, weights 2 pi / n. Integrates
// e^{i k theta} exactly for all |k| < n.
inline QuadratureGrid1D periodic_trapezoid(int n) {
  if (n < 1)
    throw std::invalid_argument("periodic_trapezoid: node count must be >= 1");
  QuadratureGrid1D g;
  g.domain = GridDomain::periodic;
  const double w = 2.0 * std::numbers::pi / n;
  g.nodes.resize(std::size_t(n));
  g.weights.assign(std::size_t(n), w);
  for (int k = 0; k < n; ++k)
    g.nodes[std::size_t(k)] = w * k;
  return g;
}

inline double tau_window_halfwidth(int max_center, double epsilon) {
  return max_center + 10.0 / std::sqrt(epsilon);
}

// Composite Gauss-Legendre grid on [-T, T], T = max_center + 10/sqrt(eps),
// with panels of (approximately) unit length. The integrands of interest are
// Gaussian trains of width 1/sqrt(eps) centered on labels within
// [-max_center, max_center]; mass beyond the window is below erfc(10).
inline QuadratureGrid1D tau_window_grid(int max_center, double epsilon,
                                        int nodes_per_unit = 20) {
  if (max_center < 0)
    throw std::invalid_argument("tau_window_grid: max_center must be >= 0");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("tau_window_grid: epsilon must be > 0");
  if (nodes_per_unit < 1)
    throw std::invalid_argument("tau_window_grid: nodes_per_unit must be >= 1");

  const double T = tau_window_halfwidth(max_center, epsilon);
  const int panels = std::max(1, int(std::ceil(2.0 * T)));
  const QuadratureGrid1D unit = gauss_legendre(nodes_per_unit, 0.0, 1.0);

  QuadratureGrid1D g;
  g.nodes.reserve(std::size_t(panels) * unit.nodes.size());
  g.weights.reserve(std::size_t(panels) * unit.nodes.size());
  const double h = 2.0 * T / panels;
  for (int p = 0; p < panels; ++p) {
    const double left = -T + p * h;
    for (int k = 0; k < unit.size(); ++k) {
      g.nodes.push_back(left + h * unit.nodes[std::size_t(k)]);
      g.weights.push_back(h * unit.weights[std::size_t(k)]);
    }
  }
  return g;
}

// Product quadrature over a chart. The (optional) time factor is kept
// separate; the compact factors are flattened into a node list whose weights
// already include the geometric measure density.
class ProductGrid {
public:
  ProductGrid() = default;

  static ProductGrid compact(int angle_count, std::vector<double> angles,
                             std::vector<double> weights) {
    if (angle_count < 1 || angle_count > 3)
      throw std::invalid_argument("ProductGrid: angle_count must be 1..3");
    if (angles.size() != weights.size() * std::size_t(angle_count))
      throw std::invalid_argument("ProductGrid: angle/weight size mismatch");
    ProductGrid g;
    g.angle_count_ = angle_count;
    g.angles_ = std::move(angles);
    g.weights_ = std::move(weights);
    return g;
  }

  ProductGrid with_time(QuadratureGrid1D time) const {
    ProductGrid g = *this;
    g.time_ = std::move(time);
    g.has_time_ = true;
    return g;
  }

  bool has_time() const { return has_time_; }
  const QuadratureGrid1D &time() const {
    if (!has_time_)
      throw std::logic_error("ProductGrid: no time factor");
    return time_;
  }

  int angle_count() const { return angle_count_; }
  int compact_size() const { return int(weights_.size()); }

  std::span<const double> angles_at(int i) const {
    return {angles_.data() + std::size_t(i) * angle_count_,
            std::size_t(angle_count_)};
  }
  double compact_weight(int i) const { return weights_[std::size_t(i)]; }

  double compact_total() const {
    double s = 0.0;
    for (double w : weights_)
      s += w;
    return s;
  }

  double total_weight() const {
    return has_time_ ? time_.total_weight() * compact_total() : compact_total();
  }

  // integral of f(angles) over the compact factor alone
  template <class F> auto integrate_compact(F &&f) const {
    decltype(f(angles_at(0))) s{};
    for (int i = 0; i < compact_size(); ++i)
      s += compact_weight(i) * f(angles_at(i));
    return s;
  }

  // integral of f(tau, angles) over the full chart grid
  template <class F> auto integrate(F &&f) const {
    const auto &t = time();
    decltype(f(0.0, angles_at(0))) s{};
    for (int i = 0; i < compact_size(); ++i) {
      const auto ang = angles_at(i);
      decltype(s) inner{};
      for (int k = 0; k < t.size(); ++k)
        inner += t.weights[std::size_t(k)] * f(t.nodes[std::size_t(k)], ang);
      s += compact_weight(i) * inner;
    }
    return s;
  }

private:
  QuadratureGrid1D time_;
  bool has_time_ = false;
  int angle_count_ = 1;
  std::vector<double> angles_;  // angle_count_ entries per node
  std::vector<double> weights_; // one entry per node
};

// Circle grid carrying the 2d invariant measure d theta / (2 pi); total
// weight 1.
inline ProductGrid theta_circle_grid(int n_theta) {
  QuadratureGrid1D t = periodic_trapezoid(n_theta);
  std::vector<double> w(t.weights);
  for (double &x : w)
    x /= 2.0 * std::numbers::pi;
  return ProductGrid::compact(1, std::move(t.nodes), std::move(w));
}

// S^3 grid in hyperspherical angles (chi, theta, phi) with density
// sin^2(chi) sin(theta); total weight 2 pi^2.
inline ProductGrid s3_product_grid(int n_chi, int n_theta, int n_phi) {
  const QuadratureGrid1D gchi = gauss_legendre(n_chi, 0.0, std::numbers::pi);
  const QuadratureGrid1D gtheta = gauss_legendre(n_theta, 0.0, std::numbers::pi);
  const QuadratureGrid1D gphi = periodic_trapezoid(n_phi);

  const std::size_t total =
      std::size_t(n_chi) * std::size_t(n_theta) * std::size_t(n_phi);
  std::vector<double> angles;
  std::vector<double> weights;
  angles.reserve(3 * total);
  weights.reserve(total);
  for (int a = 0; a < n_chi; ++a) {
    const double chi = gchi.nodes[std::size_t(a)];
    const double schi = std::sin(chi);
    const double wchi = gchi.weights[std::size_t(a)] * schi * schi;
    for (int b = 0; b < n_theta; ++b) {
      const double theta = gtheta.nodes[std::size_t(b)];
      const double wtheta = gtheta.weights[std::size_t(b)] * std::sin(theta);
      for (int c = 0; c < n_phi; ++c) {
        angles.push_back(chi);
        angles.push_back(theta);
        angles.push_back(gphi.nodes[std::size_t(c)]);
        weights.push_back(wchi * wtheta * gphi.weights[std::size_t(c)]);
      }
    }
  }
  return ProductGrid::compact(3, std::move(angles), std::move(weights));
}

} // namespace fuzzyds
