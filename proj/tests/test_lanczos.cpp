#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "slq/experiments.hpp"
#include "slq/lanczos.hpp"
#include "slq/palindrome.hpp"
#include "slq/quadrature.hpp"
#include "test_support.hpp"

using namespace slq;

namespace {

DenseSymmetric exchange2() {
  DenseMatrix m(2, 2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 1.0;
  return DenseSymmetric(std::move(m));
}

}  // namespace

TEST_CASE("exchange matrix recurrence by hand") {
  const auto a = exchange2();
  const auto res =
      tridiagonalize(a, std::vector<double>{1.0, 0.0}, 2, Reorth::none);
  REQUIRE(res.effective_m == 2);
  REQUIRE_FALSE(res.breakdown);
  REQUIRE(res.jacobi.alpha == std::vector<double>{0.0, 0.0});
  REQUIRE(res.jacobi.beta == std::vector<double>{1.0});
}

TEST_CASE("one-dimensional operator returns its entry") {
  DenseMatrix m(1, 1);
  m.at(0, 0) = 5.0;
  const DenseSymmetric a(std::move(m));
  const auto res = tridiagonalize(a, std::vector<double>{3.0}, 1, Reorth::none);
  REQUIRE(res.jacobi.alpha == std::vector<double>{5.0});
  REQUIRE(res.jacobi.beta.empty());
}

TEST_CASE("built-in case 1 has Ritz values symmetric about 0.51") {
  const auto cp = make_case_problem(1);
  const auto res = tridiagonalize(cp.matrix, cp.start, 10, Reorth::full);
  const auto rep = classify_symmetry(golub_welsch(res.jacobi), 0.51, 1e-8);
  REQUIRE(rep.symmetric);
  REQUIRE(rep.unpaired_nodes == 0);
}

TEST_CASE("zero starting vector and bad m are rejected") {
  const auto a = exchange2();
  REQUIRE_THROWS_AS(
      tridiagonalize(a, std::vector<double>{0.0, 0.0}, 2, Reorth::none),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      tridiagonalize(a, std::vector<double>{1.0, 0.0}, 0, Reorth::none),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      tridiagonalize(a, std::vector<double>{1.0}, 2, Reorth::none),
      std::invalid_argument);
}

TEST_CASE("m beyond the dimension is clamped, not fatal") {
  const auto a = exchange2();
  const auto res =
      tridiagonalize(a, std::vector<double>{1.0, 0.0}, 9, Reorth::none);
  REQUIRE(res.jacobi.size() == 2);
}

TEST_CASE("breakdown flag matches the requested-versus-effective gap") {
  // Identity: the Krylov space is one-dimensional from any start.
  const auto id = DenseSymmetric::identity(4);
  const std::vector<double> u{0.5, -0.5, 0.5, -0.5};
  const auto res = tridiagonalize(id, u, 4, Reorth::none);
  REQUIRE(res.breakdown);
  REQUIRE(res.effective_m == 1);
  REQUIRE(res.jacobi.alpha == std::vector<double>{1.0});

  const auto full = tridiagonalize(id, u, 1, Reorth::none);
  REQUIRE_FALSE(full.breakdown);
  REQUIRE(full.effective_m == 1);
}

TEST_CASE("stored betas are strictly positive") {
  Rng rng(11);
  const auto a = testsup::random_dense_symmetric(20, rng);
  std::vector<double> u(20);
  for (double& x : u) x = rng.gaussian();
  const auto res = tridiagonalize(a, u, 20, Reorth::full);
  REQUIRE(res.jacobi.alpha.size() == res.jacobi.beta.size() + 1);
  for (double b : res.jacobi.beta) REQUIRE(b > 0.0);
}

TEST_CASE("shifting the operator shifts alphas and keeps betas") {
  Rng rng(21);
  const std::size_t n = 16;
  const auto a = testsup::random_dense_symmetric(n, rng);
  const double s = 0.7;
  DenseMatrix shifted_m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      shifted_m.at(i, j) = a.at(i, j) - (i == j ? s : 0.0);
  const DenseSymmetric shifted(std::move(shifted_m));

  std::vector<double> u(n);
  for (double& x : u) x = rng.gaussian();
  const auto r0 = tridiagonalize(a, u, n, Reorth::full);
  const auto r1 = tridiagonalize(shifted, u, n, Reorth::full);
  REQUIRE(r0.jacobi.size() == r1.jacobi.size());
  for (std::size_t k = 0; k < r0.jacobi.alpha.size(); ++k)
    REQUIRE_THAT(r1.jacobi.alpha[k],
                 Catch::Matchers::WithinAbs(r0.jacobi.alpha[k] - s, 1e-10));
  for (std::size_t k = 0; k < r0.jacobi.beta.size(); ++k)
    REQUIRE_THAT(r1.jacobi.beta[k],
                 Catch::Matchers::WithinAbs(r0.jacobi.beta[k], 1e-12));
}

TEST_CASE("full reorthogonalization keeps the basis orthonormal") {
  Rng rng(31);
  const std::size_t n = 40;
  const auto a = testsup::random_dense_symmetric(n, rng);
  std::vector<double> u(n);
  for (double& x : u) x = rng.gaussian();
  const auto res = tridiagonalize(a, u, n, Reorth::full, true);
  REQUIRE(res.basis.size() == res.jacobi.size());
  for (std::size_t i = 0; i < res.basis.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double d = testsup::dot(res.basis[i], res.basis[j]);
      REQUIRE_THAT(d, Catch::Matchers::WithinAbs(i == j ? 1.0 : 0.0, 1e-8));
    }
}

TEST_CASE("partial starts on Jordan-Wielandt operators zero the diagonal") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n1 = 1 + rng.next_u64() % 12;
    const std::size_t n2 = 1 + rng.next_u64() % 12;
    const auto jw =
        compose_jordan_wielandt(testsup::random_dense(n1, n2, rng));
    PartialVectorSpec spec;
    spec.n1 = n1;
    spec.n2 = n2;
    spec.side = trial % 2 ? PartialVectorSpec::Side::upper
                          : PartialVectorSpec::Side::lower;
    const auto v = make_partial_vector(spec, rng);
    const Reorth reorth = trial % 3 ? Reorth::none : Reorth::full;
    const auto res = tridiagonalize(jw, v, n1 + n2, reorth);
    const double bound = 1e-10 * jw.one_norm_estimate();
    for (double alpha : res.jacobi.alpha) REQUIRE(std::abs(alpha) <= bound);
  }
}

TEST_CASE("bidiagonalize scalar and diagonal blocks by hand") {
  DenseMatrix b1(1, 1);
  b1.at(0, 0) = 1.0;
  const auto r1 = bidiagonalize(b1, std::vector<double>{1.0}, 1);
  REQUIRE(r1.bidiagonal.alpha == std::vector<double>{1.0});
  REQUIRE(r1.bidiagonal.beta.empty());

  DenseMatrix b2(2, 2);
  b2.at(0, 0) = 3.0;
  b2.at(1, 1) = 4.0;
  const auto r2 = bidiagonalize(b2, std::vector<double>{1.0, 0.0}, 1);
  REQUIRE(r2.bidiagonal.alpha == std::vector<double>{3.0});
}

TEST_CASE("bidiagonalize rejects zero starts and bad shapes") {
  DenseMatrix b(2, 2);
  b.at(0, 0) = 1.0;
  REQUIRE_THROWS_AS(bidiagonalize(b, std::vector<double>{0.0, 0.0}, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(bidiagonalize(b, std::vector<double>{1.0}, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(bidiagonalize(b, std::vector<double>{1.0, 0.0}, 0),
                    std::invalid_argument);
}

TEST_CASE("interlaced bidiagonal equals the Jordan-Wielandt off-diagonals") {
  Rng rng(51);
  const std::size_t n1 = 8, n2 = 5, m = 4;
  const auto b = testsup::random_dense(n1, n2, rng);
  std::vector<double> v(n2);
  for (double& x : v) x = rng.gaussian();

  const auto bid = bidiagonalize(b, v, m);
  REQUIRE(bid.effective_m == m);
  const auto seq = interlace(bid.bidiagonal);

  DenseMatrix bcopy(n1, n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) bcopy.at(i, j) = b.at(i, j);
  const auto jw = compose_jordan_wielandt(std::move(bcopy));
  std::vector<double> start(n1 + n2, 0.0);
  for (std::size_t j = 0; j < n2; ++j) start[n1 + j] = v[j];
  const auto tri = tridiagonalize(jw, start, 2 * m, Reorth::none);

  REQUIRE(seq.size() == tri.jacobi.beta.size());
  for (std::size_t k = 0; k < seq.size(); ++k)
    REQUIRE_THAT(seq[k], Catch::Matchers::WithinAbs(tri.jacobi.beta[k], 1e-13));
  for (double alpha : tri.jacobi.alpha) REQUIRE(alpha == 0.0);
}

TEST_CASE("jacobi prefix slices the leading block") {
  JacobiMatrix t{{1.0, 2.0, 3.0}, {0.5, 0.25}};
  const auto p = t.prefix(2);
  REQUIRE(p.alpha == std::vector<double>{1.0, 2.0});
  REQUIRE(p.beta == std::vector<double>{0.5});
  REQUIRE_THROWS_AS(t.prefix(0), std::invalid_argument);
  REQUIRE_THROWS_AS(t.prefix(4), std::invalid_argument);
}
