#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "slq/detail/tridiag_ql.hpp"
#include "slq/lanczos.hpp"

namespace slq {

struct TridiagEigen {
  std::vector<double> values;            // ascending
  std::vector<double> first_components;  // first entry of each eigenvector
};

// Eigenvalues plus first-row eigenvector components of a Jacobi matrix:
// exactly the ingredients of the quadrature rule. Signs of the components are
// unspecified; only their squares are consumed downstream.
inline TridiagEigen eig_tridiagonal(const JacobiMatrix& t) {
  const std::size_t m = t.size();
  if (m == 0) throw std::invalid_argument("eig_tridiagonal: empty matrix");
  if (t.beta.size() + 1 != m)
    throw std::invalid_argument("eig_tridiagonal: beta must have m-1 entries");
  if (m == 1) return {{t.alpha[0]}, {1.0}};

  std::vector<double> d = t.alpha;
  std::vector<double> e = t.beta;
  e.resize(m, 0.0);
  std::vector<double> z(m, 0.0);
  z[0] = 1.0;
  detail::tridiag_ql(d, e, &z);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagEigen out;
  out.values.resize(m);
  out.first_components.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    out.values[k] = d[order[k]];
    out.first_components[k] = z[order[k]];
  }
  return out;
}

struct BidiagSvd {
  std::vector<double> singular_values;         // descending, >= 0
  std::vector<double> right_first_components;  // first entry of each right
                                               // singular vector
};

// SVD of an upper bidiagonal J through its 2m-point Jordan-Wielandt
// embedding: a zero-diagonal tridiagonal whose off-diagonals interlace J's
// diagonal and superdiagonal, and whose eigenvalues are the pairs +-sigma_i.
// Forming J^T J would square the condition number and is avoided.
inline BidiagSvd svd_bidiagonal(const BidiagonalMatrix& j) {
  const std::size_t m = j.size();
  if (m == 0) throw std::invalid_argument("svd_bidiagonal: empty matrix");
  if (j.beta.size() + 1 != m)
    throw std::invalid_argument("svd_bidiagonal: beta must have m-1 entries");

  const std::size_t n = 2 * m;
  std::vector<double> d(n, 0.0), e(n, 0.0), z(n, 0.0);
  const std::vector<double> inter = interlace(j);
  for (std::size_t k = 0; k < inter.size(); ++k) e[k] = inter[k];
  z[0] = 1.0;
  detail::tridiag_ql(d, e, &z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  // Top half of the +-sigma spectrum, largest first. The embedded rule puts
  // weight tau = y_1^2 / 2 on each of +-sigma, so the right-vector first
  // component is sqrt(2 tau).
  BidiagSvd out;
  out.singular_values.resize(m);
  out.right_first_components.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t src = order[n - 1 - k];
    out.singular_values[k] = std::max(d[src], 0.0);
    out.right_first_components[k] = std::sqrt(2.0) * std::abs(z[src]);
  }
  return out;
}

}  // namespace slq
