#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "slq/linop.hpp"
#include "slq/rng.hpp"

namespace slq {

struct CaseProblem {
  DenseSymmetric matrix;
  std::vector<double> start;
};

// Built-in 50x50 diagnostics for Ritz-value symmetry. With the Householder
// reflector H = I - (2/n) 11^T and A = H diag(lambda) H, the entries reduce to
// A_ij = delta_ij lambda_i - c (lambda_i + lambda_j) + c^2 sum(lambda), which
// is symmetric as stored without any copying.
//   case 1: lambda_i = i/50, start along 1   -> spectrum symmetric about 0.51
//   case 2: lambda_i = 1/(51-i), start along 1 -> asymmetric spectrum
//   case 3: lambda_i = i/50, start along (1..50) -> rotated start is not an
//           absolute palindrome, so symmetry fails despite the spectrum
inline CaseProblem make_case_problem(int which) {
  const std::size_t n = 50;
  std::vector<double> lambda(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double idx = static_cast<double>(i + 1);
    switch (which) {
      case 1:
      case 3:
        lambda[i] = idx / 50.0;
        break;
      case 2:
        lambda[i] = 1.0 / (51.0 - idx);
        break;
      default:
        throw std::invalid_argument("make_case_problem: case must be 1, 2 or 3");
    }
  }
  double sum = 0.0;
  for (double l : lambda) sum += l;
  const double c = 2.0 / static_cast<double>(n);
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double v = -c * (lambda[i] + lambda[j]) + c * c * sum;
      if (i == j) v += lambda[i];
      a.at(i, j) = v;
    }
  std::vector<double> start(n, 1.0);
  if (which == 3)
    for (std::size_t i = 0; i < n; ++i) start[i] = static_cast<double>(i + 1);
  return {DenseSymmetric(std::move(a)), std::move(start)};
}

namespace detail {

// Orthonormal columns from a Gaussian draw, by modified Gram-Schmidt with a
// second pass. Degenerate draws are resampled.
inline std::vector<std::vector<double>> random_orthonormal(std::size_t n,
                                                           std::size_t k,
                                                           Rng& rng) {
  std::vector<std::vector<double>> q;
  q.reserve(k);
  while (q.size() < k) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.gaussian();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& prev : q) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += v[i] * prev[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= d * prev[i];
      }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (double& x : v) x /= norm;
    q.push_back(std::move(v));
  }
  return q;
}

}  // namespace detail

// Synthetic Jordan-Wielandt block B = U diag(s) V^T with orthonormalized
// Gaussian factors and standard-normal singular values.
inline DenseMatrix make_synthetic_block(std::size_t n1, std::size_t n2,
                                        std::uint64_t seed) {
  if (n1 < 1 || n2 < 1)
    throw std::invalid_argument("make_synthetic_block: empty shape");
  const std::size_t k = std::min(n1, n2);
  Rng rng_u = Rng::for_stream(seed, stream::tagged(stream::kConstruction, 0));
  Rng rng_v = Rng::for_stream(seed, stream::tagged(stream::kConstruction, 1));
  Rng rng_s = Rng::for_stream(seed, stream::tagged(stream::kConstruction, 2));
  const auto u = detail::random_orthonormal(n1, k, rng_u);
  const auto v = detail::random_orthonormal(n2, k, rng_v);
  std::vector<double> s(k);
  for (std::size_t l = 0; l < k; ++l) s[l] = rng_s.gaussian();
  DenseMatrix b(n1, n2);
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t i = 0; i < n1; ++i) {
      const double ui = s[l] * u[l][i];
      for (std::size_t j = 0; j < n2; ++j) b.at(i, j) += ui * v[l][j];
    }
  return b;
}

// Random directed adjacency with edge probability p and binary weights;
// self-loops allowed. A stand-in for small directed graph datasets.
inline SparseCsr make_random_directed_adjacency(std::size_t n, double p,
                                                std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("adjacency: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("adjacency: p must be in [0,1]");
  Rng rng = Rng::for_stream(seed, stream::tagged(stream::kConstruction, 3));
  std::vector<std::tuple<std::size_t, std::size_t, double>> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng.next_double() < p) t.emplace_back(i, j, 1.0);
  return SparseCsr::from_triplets(n, n, std::move(t));
}

}  // namespace slq
