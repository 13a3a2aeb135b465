#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "slq/detail/tridiag_ql.hpp"
#include "slq/errors.hpp"
#include "slq/linop.hpp"

namespace slq {

struct DenseEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // columns match values
};

// Cyclic Jacobi rotations. Deliberately a different algorithm family from the
// tridiagonal QL path so it can serve as an independent oracle in tests.
inline DenseEigen jacobi_eigh(const DenseSymmetric& A) {
  const std::size_t n = A.dimension();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = A.at(i, j);
  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  const double stop = 1e-15 * (frob > 0.0 ? frob : 1.0);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    off = std::sqrt(2.0 * off);
    if (off <= stop) {
      DenseEigen out{std::vector<double>(n), std::move(v)};
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x * n + x] < a[y * n + y];
      });
      DenseMatrix sorted(n, n);
      for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a[order[k] * n + order[k]];
        for (std::size_t i = 0; i < n; ++i)
          sorted.at(i, k) = out.vectors.at(i, order[k]);
      }
      out.vectors = std::move(sorted);
      return out;
    }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v.at(k, p), vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
  }
  throw NumericalError("jacobi_eigh: no convergence in 60 sweeps");
}

// Householder reduction to tridiagonal form, eigenvalues only. Much faster
// than Jacobi at the dimensions the CLI reference traces allow (up to 2000).
inline std::vector<double> dense_eigenvalues(const DenseSymmetric& A) {
  const std::size_t n = A.dimension();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = A.at(i, j);
  std::vector<double> d(n, 0.0), e(n, 0.0);

  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a[i * n + k]);
      if (scale == 0.0) {
        e[i] = a[i * n + l];
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a[i * n + k] /= scale;
          h += a[i * n + k] * a[i * n + k];
        }
        double f = a[i * n + l];
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a[i * n + l] = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += a[j * n + k] * a[i * n + k];
          for (std::size_t k = j + 1; k <= l; ++k)
            g += a[k * n + j] * a[i * n + k];
          e[j] = g / h;
          f += e[j] * a[i * n + j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = a[i * n + j];
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k)
            a[j * n + k] -= f * e[k] + g * a[i * n + k];
        }
      }
    } else {
      e[i] = a[i * n + l];
    }
    d[i] = h;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i];
  // Shift the subdiagonal so e[k] couples d[k] and d[k+1].
  for (std::size_t k = 0; k + 1 < n; ++k) e[k] = e[k + 1];
  e[n - 1] = 0.0;

  detail::tridiag_ql(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace slq
