#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "slq/errors.hpp"

namespace slq::detail {

// Implicit-shift QL on the symmetric tridiagonal (d, e); e[i] couples d[i] and
// d[i+1], e[n-1] is a zero sentinel. Eigenvalues come back in d, unsorted.
// When z is non-null it is treated as a row vector (initially e_1^T of the
// identity) and rotated along, so it finishes as the first components of the
// eigenvectors; the full eigenvector matrix is never formed.
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                       std::vector<double>* z) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  e.resize(d.size(), 0.0);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw NumericalError("tridiag_ql: too many QL iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {  // underflow: deflate and restart this block
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            f = (*z)[i + 1];
            (*z)[i + 1] = s * (*z)[i] + c * f;
            (*z)[i] = c * (*z)[i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace slq::detail
