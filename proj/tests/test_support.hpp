#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "slq/dense_eigen.hpp"
#include "slq/linop.hpp"
#include "slq/rng.hpp"

namespace testsup {

inline slq::DenseMatrix random_dense(std::size_t rows, std::size_t cols,
                                     slq::Rng& rng) {
  slq::DenseMatrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b.at(i, j) = rng.gaussian();
  return b;
}

inline slq::DenseSymmetric random_dense_symmetric(std::size_t n,
                                                  slq::Rng& rng) {
  slq::DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = rng.gaussian();
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  return slq::DenseSymmetric(std::move(a));
}

// Quadratic form u^T f(A) u through the dense Jacobi-rotation
// eigendecomposition; independent of the Lanczos/QL code paths.
template <class F>
inline double oracle_quadform(const slq::DenseSymmetric& a,
                              const std::vector<double>& u, F&& f) {
  const slq::DenseEigen eig = slq::jacobi_eigh(a);
  const std::size_t n = a.dimension();
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += eig.vectors.at(i, k) * u[i];
    total += f(eig.values[k]) * proj * proj;
  }
  return total;
}

template <class F>
inline double oracle_trace(const slq::DenseSymmetric& a, F&& f) {
  const slq::DenseEigen eig = slq::jacobi_eigh(a);
  double total = 0.0;
  for (double lam : eig.values) total += f(lam);
  return total;
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

}  // namespace testsup
