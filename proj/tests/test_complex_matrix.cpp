#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzyds/complex_matrix.hpp"
#include "fuzzyds/hermitian_eigen.hpp"

using namespace fuzzyds;

namespace {

ComplexMatrix random_matrix(std::mt19937 &rng, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix a(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a(i, j) = cdouble(u(rng), u(rng));
  return a;
}

// unit shift on labels: entry (j+1, j) = 1
ComplexMatrix shift_up(int dim, int offset = 0) {
  ComplexMatrix s(dim, offset);
  for (int j = 0; j + 1 < dim; ++j)
    s(j + 1, j) = 1.0;
  return s;
}

} // namespace

TEST_CASE("commutator basics") {
  std::mt19937 rng(1234);
  const auto a = random_matrix(rng, 6);
  CHECK(max_abs(commutator(a, a)) == 0.0);

  // [diag(m), S] = S: the shift raises the label by one
  const int dim = 7;
  ComplexMatrix d(dim, -3);
  for (int i = 0; i < dim; ++i)
    d(i, i) = double(i - 3);
  const auto s = shift_up(dim, -3);
  CHECK(max_abs_diff(commutator(d, s), s) == 0.0);
}

TEST_CASE("adjoint") {
  const auto s = shift_up(5);
  const auto st = adjoint(s);
  for (int j = 0; j + 1 < 5; ++j)
    CHECK(st(j, j + 1) == cdouble(1.0, 0.0));
  CHECK(st(1, 0) == cdouble(0.0, 0.0));

  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + int(rng() % 16);
    const auto a = random_matrix(rng, dim);
    CHECK(max_abs_diff(adjoint(adjoint(a)), a) == 0.0);
    const auto b = random_matrix(rng, dim);
    CHECK(max_abs_diff(adjoint(matmul(a, b)),
                       matmul(adjoint(b), adjoint(a))) < 1e-13);
  }
}

TEST_CASE("commutator antisymmetry is exact") {
  std::mt19937 rng(7);
  const auto a = random_matrix(rng, 9);
  const auto b = random_matrix(rng, 9);
  CHECK(max_abs(commutator(a, b) + commutator(b, a)) == 0.0);
}

TEST_CASE("Jacobi identity holds to machine precision") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + int(rng() % 8);
    const auto a = random_matrix(rng, dim);
    const auto b = random_matrix(rng, dim);
    const auto c = random_matrix(rng, dim);
    const auto j = commutator(a, commutator(b, c)) +
                   commutator(b, commutator(c, a)) +
                   commutator(c, commutator(a, b));
    CHECK(max_abs(j) < 1e-13);
  }
}

TEST_CASE("shape mismatches are rejected") {
  const ComplexMatrix a(3), b(4);
  CHECK_THROWS_AS(matmul(a, b), std::invalid_argument);
  CHECK_THROWS_AS(commutator(a, b), std::invalid_argument);
  const ComplexMatrix c(3, -1);
  CHECK_THROWS_AS(matmul(a, c), std::invalid_argument);
  CHECK_THROWS_AS(ComplexMatrix(0), std::invalid_argument);
}

TEST_CASE("interior_norm excludes margin rows and columns") {
  const ComplexMatrix zero(8);
  CHECK(interior_norm(zero, 2) == 0.0);

  const auto id5 = ComplexMatrix::identity(5);
  CHECK(interior_norm(id5, 1) == doctest::Approx(std::sqrt(3.0)));

  CHECK(interior_norm(shift_up(5), 1) == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(interior_norm(id5, 3), std::invalid_argument);
  CHECK_THROWS_AS(interior_norm(id5, -1), std::invalid_argument);
}

TEST_CASE("hermitian_eigenvalues on known matrices") {
  ComplexMatrix d(4);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  d(2, 2) = 0.5;
  d(3, 3) = 3.0;
  const auto ev = hermitian_eigenvalues(d);
  CHECK(ev[0] == doctest::Approx(-1.0));
  CHECK(ev[1] == doctest::Approx(0.5));
  CHECK(ev[2] == doctest::Approx(3.0));
  CHECK(ev[3] == doctest::Approx(3.0));

  // [[1, 2+i], [2-i, 3]] has eigenvalues 2 +- sqrt(6)
  ComplexMatrix h(2);
  h(0, 0) = 1.0;
  h(1, 1) = 3.0;
  h(0, 1) = cdouble(2.0, 1.0);
  h(1, 0) = cdouble(2.0, -1.0);
  const auto ev2 = hermitian_eigenvalues(h);
  CHECK(ev2[0] == doctest::Approx(2.0 - std::sqrt(6.0)).epsilon(1e-12));
  CHECK(ev2[1] == doctest::Approx(2.0 + std::sqrt(6.0)).epsilon(1e-12));
}

TEST_CASE("hermitian_eigenvalues under a known unitary conjugation") {
  // U assembled from complex Givens rotations is unitary by construction,
  // so U D U^dagger must reproduce D's spectrum.
  const int n = 5;
  ComplexMatrix u = ComplexMatrix::identity(n);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ang(0.0, 6.28);
  for (int rot = 0; rot < 8; ++rot) {
    const int p = int(rng() % std::size_t(n));
    int q = int(rng() % std::size_t(n));
    if (p == q)
      q = (q + 1) % n;
    const double t = ang(rng), ph = ang(rng);
    ComplexMatrix g = ComplexMatrix::identity(n);
    g(p, p) = std::cos(t);
    g(q, q) = std::cos(t);
    g(p, q) = std::polar(std::sin(t), ph);
    g(q, p) = -std::polar(std::sin(t), -ph);
    u = matmul(u, g);
  }
  const double dvals[5] = {-4.0, -0.5, 0.0, 1.25, 9.0};
  ComplexMatrix d(n);
  for (int i = 0; i < n; ++i)
    d(i, i) = dvals[i];
  const auto a = matmul(u, matmul(d, adjoint(u)));
  const auto ev = hermitian_eigenvalues(a);
  for (int i = 0; i < n; ++i)
    CHECK(ev[std::size_t(i)] == doctest::Approx(dvals[i]).epsilon(1e-11));
}

TEST_CASE("hermitian_eigenvalues matches trace moments") {
  std::mt19937 rng(555);
  const auto b = random_matrix(rng, 8);
  const auto a = b + adjoint(b); // Hermitian
  const auto ev = hermitian_eigenvalues(a);

  const auto trace_of = [](const ComplexMatrix &m) {
    cdouble t{};
    for (int i = 0; i < m.dim(); ++i)
      t += m(i, i);
    return t.real();
  };
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (double v : ev) {
    s1 += v;
    s2 += v * v;
    s3 += v * v * v;
  }
  CHECK(s1 == doctest::Approx(trace_of(a)).epsilon(1e-11));
  CHECK(s2 == doctest::Approx(trace_of(matmul(a, a))).epsilon(1e-11));
  CHECK(s3 == doctest::Approx(trace_of(matmul(a, matmul(a, a)))).epsilon(1e-11));
}
