#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "slq/experiments.hpp"
#include "slq/linop.hpp"
#include "slq/palindrome.hpp"
#include "test_support.hpp"

using namespace slq;

namespace {

// Shift the diagonal so the spectrum is centered at zero.
DenseSymmetric shifted(const DenseSymmetric& a, double s) {
  const std::size_t n = a.dimension();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m.at(i, j) = a.at(i, j) - (i == j ? s : 0.0);
  return DenseSymmetric(std::move(m));
}

}  // namespace

TEST_CASE("partial absolute palindrome predicate") {
  const std::vector<double> w1{1.0, 2.0, -1.0};
  REQUIRE(is_r_partial_absolute_palindrome(w1, 2, 1e-12));

  const std::vector<double> w2{1.0, 2.0, 3.0, 4.0};
  REQUIRE_FALSE(is_r_partial_absolute_palindrome(w2, 4, 1e-12));

  const std::vector<double> w3{3.0, -5.0, 0.0, 5.0, 3.0};
  REQUIRE(is_r_partial_absolute_palindrome(w3, 4, 1e-12));

  REQUIRE(is_r_partial_absolute_palindrome(w2, 0, 1e-12));
  REQUIRE_THROWS_AS(is_r_partial_absolute_palindrome(w1, 1, 1e-12),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(is_r_partial_absolute_palindrome(w1, 4, 1e-12),
                    std::invalid_argument);
}

TEST_CASE("unit partial vector places a single one") {
  Rng rng(1);
  PartialVectorSpec spec;
  spec.n1 = 2;
  spec.n2 = 3;
  spec.side = PartialVectorSpec::Side::upper;
  spec.family = PartialVectorSpec::Family::unit;
  spec.unit_index = 0;
  REQUIRE(make_partial_vector(spec, rng) ==
          std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("smallest lower rademacher vector") {
  Rng rng(2);
  PartialVectorSpec spec;
  spec.n1 = 1;
  spec.n2 = 1;
  spec.side = PartialVectorSpec::Side::lower;
  const auto v = make_partial_vector(spec, rng);
  REQUIRE(v.size() == 2);
  REQUIRE(v[0] == 0.0);
  REQUIRE(std::abs(v[1]) == 1.0);
}

TEST_CASE("lower rademacher vector zeroes the leading block") {
  Rng rng(3);
  PartialVectorSpec spec;
  spec.n1 = 3;
  spec.n2 = 2;
  spec.side = PartialVectorSpec::Side::lower;
  const auto v = make_partial_vector(spec, rng);
  REQUIRE(v.size() == 5);
  for (std::size_t i = 0; i < 3; ++i) REQUIRE(v[i] == 0.0);
  for (std::size_t i = 3; i < 5; ++i) REQUIRE(std::abs(v[i]) == 1.0);
}

TEST_CASE("degenerate custom blocks are rejected") {
  Rng rng(4);
  PartialVectorSpec spec;
  spec.n1 = 2;
  spec.n2 = 2;
  spec.family = PartialVectorSpec::Family::custom;
  spec.custom_block = {0.0, 0.0};
  REQUIRE_THROWS_AS(make_partial_vector(spec, rng), std::invalid_argument);
  spec.custom_block = {1.0};
  REQUIRE_THROWS_AS(make_partial_vector(spec, rng), std::invalid_argument);
  spec.custom_block = {1.0, 0.0};
  REQUIRE(make_partial_vector(spec, rng) ==
          std::vector<double>{1.0, 0.0, 0.0, 0.0});

  PartialVectorSpec empty;
  empty.n1 = 0;
  empty.n2 = 3;
  REQUIRE_THROWS_AS(make_partial_vector(empty, rng), std::invalid_argument);
}

TEST_CASE("sufficient condition on the exchange matrix") {
  DenseMatrix m(2, 2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 1.0;
  const DenseSymmetric a(std::move(m));
  const auto rep =
      verify_sufficient_condition(a, std::vector<double>{1.0, 0.0}, 1e-8);
  REQUIRE(rep.spectrum_symmetric);
  REQUIRE(rep.rank == 2);
  REQUIRE(rep.palindrome);
  REQUIRE(rep.max_palindrome_violation <= 1e-10);
}

TEST_CASE("asymmetric spectrum is reported as such") {
  DenseMatrix m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 2.0;
  const DenseSymmetric a(std::move(m));
  const auto rep =
      verify_sufficient_condition(a, std::vector<double>{1.0, 1.0}, 1e-8);
  REQUIRE_FALSE(rep.spectrum_symmetric);
}

TEST_CASE("built-in case 1 satisfies and case 3 violates the palindrome") {
  const auto c1 = make_case_problem(1);
  const auto r1 =
      verify_sufficient_condition(shifted(c1.matrix, 0.51), c1.start, 1e-8);
  REQUIRE(r1.spectrum_symmetric);
  REQUIRE(r1.palindrome);

  const auto c3 = make_case_problem(3);
  const auto r3 =
      verify_sufficient_condition(shifted(c3.matrix, 0.51), c3.start, 1e-8);
  REQUIRE(r3.spectrum_symmetric);
  REQUIRE_FALSE(r3.palindrome);
}

TEST_CASE("partial vectors realize the palindrome with twice the block rank") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n1 = 1 + rng.next_u64() % 12;
    const std::size_t n2 = 1 + rng.next_u64() % 12;
    const auto b = testsup::random_dense(n1, n2, rng);
    const auto jw = compose_jordan_wielandt(b);

    PartialVectorSpec spec;
    spec.n1 = n1;
    spec.n2 = n2;
    spec.side = trial % 2 ? PartialVectorSpec::Side::upper
                          : PartialVectorSpec::Side::lower;
    const auto v = make_partial_vector(spec, rng);

    const auto rep = verify_sufficient_condition(jw.to_dense(), v, 1e-8);
    REQUIRE(rep.palindrome);
    // Gaussian blocks are full rank almost surely.
    REQUIRE(rep.rank == 2 * std::min(n1, n2));
    REQUIRE(rep.max_palindrome_violation <= 1e-8);
  }
}

TEST_CASE("rank-deficient blocks still satisfy the palindrome") {
  Rng rng(7);
  const std::size_t n1 = 5, n2 = 4;
  std::vector<double> u(n1), w(n2);
  for (double& x : u) x = rng.gaussian();
  for (double& x : w) x = rng.gaussian();
  DenseMatrix b(n1, n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) b.at(i, j) = u[i] * w[j];
  const auto jw = compose_jordan_wielandt(std::move(b));

  PartialVectorSpec spec;
  spec.n1 = n1;
  spec.n2 = n2;
  const auto v = make_partial_vector(spec, rng);
  const auto rep = verify_sufficient_condition(jw.to_dense(), v, 1e-8);
  REQUIRE(rep.rank == 2);
  REQUIRE(rep.palindrome);
}
