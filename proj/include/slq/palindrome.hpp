#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "slq/dense_eigen.hpp"
#include "slq/linop.hpp"
#include "slq/rng.hpp"

namespace slq {

// True iff |w_i| matches |w_{n+1-i}| for i = 1..r/2. r must be even: the
// pairing is outside-in and an odd count cannot pair.
inline bool is_r_partial_absolute_palindrome(std::span<const double> w,
                                             std::size_t r, double tol) {
  if (r % 2 != 0)
    throw std::invalid_argument(
        "is_r_partial_absolute_palindrome: r must be even");
  if (r > w.size())
    throw std::invalid_argument(
        "is_r_partial_absolute_palindrome: r exceeds length");
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < r / 2; ++i)
    if (std::abs(std::abs(w[i]) - std::abs(w[n - 1 - i])) > tol) return false;
  return true;
}

struct PartialVectorSpec {
  enum class Side { upper, lower };
  enum class Family { rademacher, unit, custom };

  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Side side = Side::upper;
  Family family = Family::rademacher;
  std::size_t unit_index = 0;         // within the nonzero block
  std::vector<double> custom_block;   // for Family::custom
};

// Vector of length n1+n2 with one Jordan-Wielandt block filled and the other
// exactly zero: the starting vectors that force symmetric quadrature.
inline std::vector<double> make_partial_vector(const PartialVectorSpec& spec,
                                               Rng& rng) {
  if (spec.n1 < 1 || spec.n2 < 1)
    throw std::invalid_argument("make_partial_vector: blocks must be nonempty");
  const bool upper = spec.side == PartialVectorSpec::Side::upper;
  const std::size_t fill = upper ? spec.n1 : spec.n2;
  const std::size_t offset = upper ? 0 : spec.n1;
  std::vector<double> v(spec.n1 + spec.n2, 0.0);
  switch (spec.family) {
    case PartialVectorSpec::Family::rademacher:
      for (std::size_t i = 0; i < fill; ++i) v[offset + i] = rng.rademacher();
      break;
    case PartialVectorSpec::Family::unit:
      if (spec.unit_index >= fill)
        throw std::invalid_argument("make_partial_vector: unit index in block");
      v[offset + spec.unit_index] = 1.0;
      break;
    case PartialVectorSpec::Family::custom: {
      if (spec.custom_block.size() != fill)
        throw std::invalid_argument(
            "make_partial_vector: custom block has wrong length");
      bool nonzero = false;
      for (double x : spec.custom_block) nonzero = nonzero || x != 0.0;
      if (!nonzero)
        throw std::invalid_argument(
            "make_partial_vector: custom block must be nonzero");
      std::copy(spec.custom_block.begin(), spec.custom_block.end(),
                v.begin() + static_cast<std::ptrdiff_t>(offset));
      break;
    }
  }
  return v;
}

struct SufficientConditionReport {
  bool spectrum_symmetric = false;  // nonzero eigenvalues pair as +-lambda
  std::size_t rank = 0;             // eigenvalues above the rank threshold
  bool palindrome = false;          // mu = Q^T v / ||v|| is rank-partial
  double max_spectrum_asymmetry = 0.0;
  double max_palindrome_violation = 0.0;
};

// Diagnostic for the symmetric-quadrature sufficient condition: dense
// eigendecomposition (test scale, n <= 256), +-pairing of the nonzero
// spectrum, and the partial-absolute-palindrome test on the rotated starting
// vector. The rank threshold is tol relative to the largest magnitude.
inline SufficientConditionReport verify_sufficient_condition(
    const DenseSymmetric& a, std::span<const double> v, double tol) {
  const std::size_t n = a.dimension();
  if (v.size() != n)
    throw std::invalid_argument("verify_sufficient_condition: length mismatch");
  if (n > 256)
    throw std::invalid_argument(
        "verify_sufficient_condition: dense verification capped at n=256");

  const DenseEigen eig = jacobi_eigh(a);
  double lam_max = 0.0;
  for (double lam : eig.values) lam_max = std::max(lam_max, std::abs(lam));
  const double thr = tol * std::max(1.0, lam_max);

  SufficientConditionReport rep;
  for (double lam : eig.values)
    if (std::abs(lam) > thr) rep.rank++;

  // Pair the nonzero spectrum outermost-in.
  std::size_t lo = 0, hi = n;
  while (lo < n && std::abs(eig.values[lo]) <= thr) ++lo;
  while (hi > lo && std::abs(eig.values[hi - 1]) <= thr) --hi;
  bool sym = true;
  std::size_t i = lo, j = hi;
  while (i < j && j > 0) {
    if (i == j - 1) {  // odd count of nonzero eigenvalues cannot pair
      sym = false;
      rep.max_spectrum_asymmetry =
          std::max(rep.max_spectrum_asymmetry, std::abs(eig.values[i]));
      break;
    }
    const double dev = std::abs(eig.values[i] + eig.values[j - 1]);
    rep.max_spectrum_asymmetry = std::max(rep.max_spectrum_asymmetry, dev);
    if (dev > thr) sym = false;
    ++i;
    --j;
  }
  rep.spectrum_symmetric = sym;

  double norm_v = 0.0;
  for (double x : v) norm_v += x * x;
  norm_v = std::sqrt(norm_v);
  if (norm_v == 0.0)
    throw std::invalid_argument("verify_sufficient_condition: zero vector");
  std::vector<double> mu(n, 0.0);
  for (std::size_t col = 0; col < n; ++col) {
    double s = 0.0;
    for (std::size_t row = 0; row < n; ++row)
      s += eig.vectors.at(row, col) * v[row];
    mu[col] = s / norm_v;
  }

  const std::size_t r_even = rep.rank - (rep.rank % 2);
  for (std::size_t k = 0; k < r_even / 2; ++k)
    rep.max_palindrome_violation =
        std::max(rep.max_palindrome_violation,
                 std::abs(std::abs(mu[k]) - std::abs(mu[n - 1 - k])));
  rep.palindrome = rep.rank % 2 == 0 &&
                   is_r_partial_absolute_palindrome(mu, r_even, tol);
  return rep;
}

}  // namespace slq
