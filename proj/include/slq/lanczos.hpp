#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <vector>

#include "slq/linop.hpp"

namespace slq {

namespace detail {

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

inline void axpy(std::span<double> y, double a, std::span<const double> x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= a * x[i];
}

}  // namespace detail

// Symmetric tridiagonal with diagonal alpha and off-diagonal beta; every
// stored beta is strictly positive because a vanishing beta stops the
// iteration before it is stored.
struct JacobiMatrix {
  std::vector<double> alpha;
  std::vector<double> beta;  // alpha.size() - 1 entries

  std::size_t size() const { return alpha.size(); }

  JacobiMatrix prefix(std::size_t m) const {
    if (m < 1 || m > size())
      throw std::invalid_argument("JacobiMatrix::prefix: bad length");
    return {std::vector<double>(alpha.begin(), alpha.begin() + m),
            std::vector<double>(beta.begin(), beta.begin() + (m - 1))};
  }
};

// Upper bidiagonal with diagonal alpha and superdiagonal beta, all positive.
struct BidiagonalMatrix {
  std::vector<double> alpha;
  std::vector<double> beta;  // alpha.size() - 1 entries

  std::size_t size() const { return alpha.size(); }
};

// The interlaced sequence {alpha_1, beta_1, alpha_2, ..., alpha_m}: these are
// the off-diagonals of the order-2m tridiagonal produced by running the
// symmetric iteration on the Jordan-Wielandt operator of the same block.
inline std::vector<double> interlace(const BidiagonalMatrix& j) {
  std::vector<double> out;
  out.reserve(2 * j.alpha.size() - 1);
  for (std::size_t k = 0; k < j.alpha.size(); ++k) {
    out.push_back(j.alpha[k]);
    if (k < j.beta.size()) out.push_back(j.beta[k]);
  }
  return out;
}

enum class Reorth { none, full };

// Full reorthogonalization is the safe default once runs are long enough for
// Ritz convergence to start leaking; short runs skip the cost.
inline Reorth default_reorth(std::size_t m) {
  return m > 30 ? Reorth::full : Reorth::none;
}

struct LanczosResult {
  JacobiMatrix jacobi;
  std::size_t effective_m = 0;
  bool breakdown = false;
  std::vector<std::vector<double>> basis;  // retained only on request
};

// Three-term Lanczos recurrence: alpha_k = v_k^T A v_k, beta_k the norm of the
// orthogonalized residual. Stops early when beta falls below
// 1e-12 * ||A||_1 (estimated), flagging breakdown; the quadrature built from
// the result is then exact for the underlying measure.
inline LanczosResult tridiagonalize(const LinearOperator& op,
                                    std::span<const double> u, std::size_t m,
                                    Reorth reorth, bool keep_basis = false) {
  const std::size_t n = op.dimension();
  if (m < 1) throw std::invalid_argument("tridiagonalize: m must be >= 1");
  if (u.size() != n)
    throw std::invalid_argument("tridiagonalize: dimension mismatch");
  if (m > n) {
    std::fprintf(stderr,
                 "warning: tridiagonalize: m=%zu exceeds dimension %zu, "
                 "clamping\n",
                 m, n);
    m = n;
  }
  const double norm_u = detail::norm2(u);
  if (norm_u == 0.0)
    throw std::invalid_argument("tridiagonalize: zero initial vector");
  const double tol = 1e-12 * op.one_norm_estimate();

  std::vector<double> v(n), v_prev(n, 0.0), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / norm_u;

  const bool store = keep_basis || reorth == Reorth::full;
  LanczosResult res;
  if (store) res.basis.push_back(v);

  double beta_prev = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    op.apply(v, w);
    const double alpha_k = detail::dot(w, v);
    res.jacobi.alpha.push_back(alpha_k);
    if (k + 1 == m) break;

    detail::axpy(w, alpha_k, v);
    detail::axpy(w, beta_prev, v_prev);
    if (reorth == Reorth::full) {
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : res.basis) detail::axpy(w, detail::dot(w, b), b);
    }

    const double beta_k = detail::norm2(w);
    if (beta_k <= tol) {
      res.effective_m = k + 1;
      res.breakdown = true;
      if (!keep_basis) res.basis.clear();
      return res;
    }
    res.jacobi.beta.push_back(beta_k);
    v_prev = v;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / beta_k;
    if (store) res.basis.push_back(v);
    beta_prev = beta_k;
  }
  res.effective_m = m;
  res.breakdown = false;
  if (!keep_basis) res.basis.clear();
  return res;
}

inline LanczosResult tridiagonalize(const LinearOperator& op,
                                    std::span<const double> u, std::size_t m) {
  return tridiagonalize(op, u, m, default_reorth(m));
}

struct BidiagonalizeResult {
  BidiagonalMatrix bidiagonal;
  std::size_t effective_m = 0;
  bool breakdown = false;
};

// Golub-Kahan bidiagonalization of the rectangular block B: alternating
// products with B and B^T, norms interlacing into the bidiagonal. Both break
// branches (alpha = 0, beta = 0) stop the iteration exactly as written.
template <class Block>
inline BidiagonalizeResult bidiagonalize(const Block& b,
                                         std::span<const double> v0,
                                         std::size_t m) {
  const std::size_t n1 = b.rows(), n2 = b.cols();
  if (m < 1) throw std::invalid_argument("bidiagonalize: m must be >= 1");
  if (v0.size() != n2)
    throw std::invalid_argument("bidiagonalize: vector length must equal cols");
  const std::size_t mmax = std::min(n1, n2);
  if (m > mmax) {
    std::fprintf(stderr,
                 "warning: bidiagonalize: m=%zu exceeds min(n1,n2)=%zu, "
                 "clamping\n",
                 m, mmax);
    m = mmax;
  }
  const double norm_v = detail::norm2(v0);
  if (norm_v == 0.0)
    throw std::invalid_argument("bidiagonalize: zero initial vector");
  const double tol = 1e-12 * std::max(b.one_norm(), b.inf_norm());

  std::vector<double> v(n2), u(n1), u_prev(n1, 0.0), vbar(n2);
  for (std::size_t i = 0; i < n2; ++i) v[i] = v0[i] / norm_v;

  BidiagonalizeResult res;
  double beta_prev = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    b.apply_nt(v, u);
    detail::axpy(u, beta_prev, u_prev);
    const double alpha_k = detail::norm2(u);
    if (alpha_k <= tol) {
      res.effective_m = k;
      res.breakdown = true;
      if (!res.bidiagonal.beta.empty()) res.bidiagonal.beta.pop_back();
      return res;
    }
    res.bidiagonal.alpha.push_back(alpha_k);
    for (std::size_t i = 0; i < n1; ++i) u[i] /= alpha_k;
    if (k + 1 == m) break;

    b.apply_t(u, vbar);
    detail::axpy(vbar, alpha_k, v);
    const double beta_k = detail::norm2(vbar);
    if (beta_k <= tol) {
      res.effective_m = k + 1;
      res.breakdown = true;
      return res;
    }
    res.bidiagonal.beta.push_back(beta_k);
    for (std::size_t i = 0; i < n2; ++i) v[i] = vbar[i] / beta_k;
    u_prev = u;
    beta_prev = beta_k;
  }
  res.effective_m = res.bidiagonal.alpha.size();
  res.breakdown = res.effective_m < m;
  return res;
}

}  // namespace slq
