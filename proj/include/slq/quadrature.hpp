#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "slq/errors.hpp"
#include "slq/spectral.hpp"

namespace slq {

// Gauss quadrature rule: nodes ascending, weights matching, weights sum to 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// Nodes are the Ritz values, weights the squared first eigenvector
// components of the Jacobi matrix.
inline QuadratureRule golub_welsch(const JacobiMatrix& t) {
  TridiagEigen e = eig_tridiagonal(t);
  QuadratureRule r;
  r.nodes = std::move(e.values);
  r.weights.resize(e.first_components.size());
  for (std::size_t k = 0; k < r.weights.size(); ++k)
    r.weights[k] = e.first_components[k] * e.first_components[k];
  return r;
}

// 2m-node rule from a bidiagonal: nodes are the pairs +-sigma_k, each member
// of a pair carrying half the squared right-vector first component.
inline QuadratureRule quadrature_from_bidiagonal(const BidiagonalMatrix& j) {
  const BidiagSvd s = svd_bidiagonal(j);
  const std::size_t m = s.singular_values.size();
  QuadratureRule r;
  r.nodes.resize(2 * m);
  r.weights.resize(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    const double w =
        0.5 * s.right_first_components[k] * s.right_first_components[k];
    r.nodes[k] = -s.singular_values[k];  // descending sv -> ascending negatives
    r.weights[k] = w;
    r.nodes[2 * m - 1 - k] = s.singular_values[k];
    r.weights[2 * m - 1 - k] = w;
  }
  return r;
}

// norm_sq * sum_k tau_k f(theta_k): the quadratic-form approximation.
template <class F>
inline double evaluate(const QuadratureRule& r, F&& f, double norm_sq) {
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double fv = f(r.nodes[k]);
    if (!std::isfinite(fv))
      throw NumericalError("evaluate: integrand non-finite at a node");
    s += r.weights[k] * fv;
  }
  return norm_sq * s;
}

struct SymmetryReport {
  bool symmetric = false;
  double shift = 0.0;
  double max_node_asymmetry = 0.0;    // max |theta_p + theta_q - 2 s|
  double max_weight_asymmetry = 0.0;  // max |tau_p - tau_q|
  std::size_t unpaired_nodes = 0;     // 1 for odd rules, else 0
};

// Pairs nodes outermost-in about the shift. Node deviations are measured
// relative to the spectral span; weight deviations are absolute. An odd rule
// may leave one middle node, which must sit at the shift.
inline SymmetryReport classify_symmetry(const QuadratureRule& r, double shift,
                                        double tol) {
  if (tol <= 0.0) throw std::invalid_argument("classify_symmetry: tol <= 0");
  const std::size_t m = r.size();
  SymmetryReport rep;
  rep.shift = shift;
  if (m == 0) {
    rep.symmetric = true;
    return rep;
  }
  const double span = r.nodes.back() - r.nodes.front();
  const double node_tol =
      tol * (span > 0.0 ? span : std::max(1.0, std::abs(r.nodes.front())));

  bool ok = true;
  std::size_t i = 0, j = m - 1;
  while (i < j) {
    const double node_dev = std::abs(r.nodes[i] + r.nodes[j] - 2.0 * shift);
    const double weight_dev = std::abs(r.weights[i] - r.weights[j]);
    rep.max_node_asymmetry = std::max(rep.max_node_asymmetry, node_dev);
    rep.max_weight_asymmetry = std::max(rep.max_weight_asymmetry, weight_dev);
    if (node_dev > node_tol || weight_dev > tol) ok = false;
    ++i;
    --j;
  }
  if (i == j) {
    rep.unpaired_nodes = 1;
    if (std::abs(r.nodes[i] - shift) > node_tol) ok = false;
  }
  rep.symmetric = ok;
  return rep;
}

// Piecewise-constant distribution function: jumps increments[j] at
// breakpoints[j], inclusive on the left breakpoint.
class MeasureFunction {
 public:
  MeasureFunction(std::vector<double> breakpoints, std::vector<double> increments)
      : breakpoints_(std::move(breakpoints)), increments_(std::move(increments)) {
    if (breakpoints_.size() != increments_.size())
      throw std::invalid_argument("MeasureFunction: size mismatch");
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k)
      if (breakpoints_[k] > breakpoints_[k + 1])
        throw std::invalid_argument("MeasureFunction: breakpoints not sorted");
    for (double inc : increments_)
      if (inc < 0.0)
        throw std::invalid_argument("MeasureFunction: negative increment");
  }

  double value_at(double t) const {
    double s = 0.0;
    for (std::size_t k = 0; k < breakpoints_.size() && breakpoints_[k] <= t; ++k)
      s += increments_[k];
    return s;
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& increments() const { return increments_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> increments_;
};

// Measure induced by eigenvalues and the rotated starting vector: the jump at
// lambda_j is mu_j^2.
inline MeasureFunction measure_oracle(std::span<const double> eigvals,
                                      std::span<const double> mu) {
  if (eigvals.size() != mu.size())
    throw std::invalid_argument("measure_oracle: size mismatch");
  std::vector<double> inc(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) inc[k] = mu[k] * mu[k];
  return MeasureFunction(std::vector<double>(eigvals.begin(), eigvals.end()),
                         std::move(inc));
}

// The exact integral: sum_j f(lambda_j) mu_j^2.
template <class F>
inline double riemann_stieltjes(const MeasureFunction& mu, F&& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < mu.breakpoints().size(); ++k) {
    const double fv = f(mu.breakpoints()[k]);
    if (!std::isfinite(fv))
      throw NumericalError("riemann_stieltjes: integrand non-finite");
    s += mu.increments()[k] * fv;
  }
  return s;
}

struct IterationBounds {
  double m_sym = 0.0;
  double m_asym = 0.0;
  double m_star = 0.0;  // m_asym - m_sym, always positive
};

// Iteration lower bounds for reaching absolute accuracy eps with an integrand
// analytic inside the Bernstein ellipse of parameter rho (bound M_rho there).
// The symmetric-rule bound is smaller; the gap m_star depends only on rho.
inline IterationBounds iteration_bounds(double rho, double m_rho, double eps) {
  if (!(rho > 1.0))
    throw std::domain_error("iteration_bounds: rho must exceed 1");
  if (!(m_rho > 0.0))
    throw std::domain_error("iteration_bounds: M_rho must be positive");
  if (!(eps > 0.0))
    throw std::domain_error("iteration_bounds: eps must be positive");
  const double log_rho = std::log(rho);
  const double base = std::log(4.0 * m_rho) - std::log(eps);
  IterationBounds b;
  b.m_asym = (base - std::log(1.0 - 1.0 / rho)) / (2.0 * log_rho);
  b.m_sym = (base - std::log(1.0 - 1.0 / (rho * rho))) / (2.0 * log_rho);
  b.m_star = std::log1p(1.0 / rho) / (2.0 * log_rho);
  return b;
}

}  // namespace slq
