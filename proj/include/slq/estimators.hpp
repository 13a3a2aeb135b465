#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slq/errors.hpp"
#include "slq/lanczos.hpp"
#include "slq/linop.hpp"
#include "slq/palindrome.hpp"
#include "slq/parallel.hpp"
#include "slq/quadrature.hpp"
#include "slq/rng.hpp"

namespace slq {

// Named scalar function applied node-wise; the name and parameter survive
// into reports so a run can be reproduced from its manifest.
class ScalarFunction {
 public:
  ScalarFunction() : ScalarFunction(identity()) {}

  static ScalarFunction identity() {
    return ScalarFunction("identity", 0.0, [](double t) { return t; });
  }
  static ScalarFunction square() {
    return ScalarFunction("square", 0.0, [](double t) { return t * t; });
  }
  // f(t) = exp(scale * t); scale plays the role of beta or gamma.
  static ScalarFunction exp_scaled(double scale) {
    return ScalarFunction("exp", scale,
                          [scale](double t) { return std::exp(scale * t); });
  }
  static ScalarFunction from_name(const std::string& name, double param) {
    if (name == "identity") return identity();
    if (name == "square") return square();
    if (name == "exp") return exp_scaled(param);
    throw std::invalid_argument("unknown scalar function '" + name + "'");
  }

  double operator()(double t) const { return fn_(t); }
  const std::string& name() const { return name_; }
  double param() const { return param_; }

 private:
  ScalarFunction(std::string name, double param, std::function<double(double)> fn)
      : name_(std::move(name)), param_(param), fn_(std::move(fn)) {}

  std::string name_;
  double param_;
  std::function<double(double)> fn_;
};

enum class VectorFamily { full_rademacher, upper_partial, lower_partial };

inline const char* family_name(VectorFamily f) {
  switch (f) {
    case VectorFamily::full_rademacher: return "full_rademacher";
    case VectorFamily::upper_partial: return "upper_partial";
    case VectorFamily::lower_partial: return "lower_partial";
  }
  return "?";
}

struct EstimatorConfig {
  std::size_t N = 1;  // sample count
  std::size_t m = 1;  // Lanczos steps per sample
  std::uint64_t seed = 0;
  VectorFamily family = VectorFamily::full_rademacher;
  ScalarFunction function = ScalarFunction::identity();
  std::optional<Reorth> reorth;  // unset: full when m > 30, else none
};

struct EstimatorReport {
  double estimate = 0.0;
  double sample_variance = 0.0;  // unbiased; 0 when N < 2
  double std_error = 0.0;
  double constant_term = 0.0;
  std::vector<double> samples;  // post-scaling, pre-constant-term
  EstimatorConfig config;
};

inline std::vector<double> rademacher_vector(std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("rademacher_vector: n must be >= 1");
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rng.rademacher();
  return z;
}

namespace detail {

// One quadratic-form sample: z^T f(A) z through the m-step quadrature rule.
inline double quadform_sample(const LinearOperator& op,
                              std::span<const double> z, std::size_t m,
                              Reorth reorth, const ScalarFunction& f) {
  double norm_sq = 0.0;
  for (double x : z) norm_sq += x * x;
  const LanczosResult lan = tridiagonalize(op, z, m, reorth);
  return evaluate(golub_welsch(lan.jacobi), f, norm_sq);
}

inline void validate_config(const EstimatorConfig& cfg) {
  if (cfg.N < 1) throw std::invalid_argument("EstimatorConfig: N must be >= 1");
  if (cfg.m < 1) throw std::invalid_argument("EstimatorConfig: m must be >= 1");
}

// Clamp m once up front so per-sample calls never warn individually.
inline std::size_t clamp_steps(std::size_t m, std::size_t dim) {
  if (m > dim) {
    std::fprintf(stderr,
                 "warning: estimator m=%zu exceeds dimension %zu, clamping\n",
                 m, dim);
    return dim;
  }
  return m;
}

// Mean over samples in index order, then the exact report identity
// estimate = mean(samples) + constant_term.
inline EstimatorReport assemble_report(std::vector<double> samples,
                                       double constant_term,
                                       EstimatorConfig cfg) {
  EstimatorReport rep;
  rep.constant_term = constant_term;
  const std::size_t n = samples.size();
  double mean = 0.0;
  if (n > 0) {
    double s = 0.0;
    for (double x : samples) s += x;
    mean = s / static_cast<double>(n);
  }
  rep.estimate = mean + constant_term;
  if (n > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    rep.sample_variance = ss / static_cast<double>(n - 1);
    rep.std_error = std::sqrt(rep.sample_variance / static_cast<double>(n));
  }
  rep.samples = std::move(samples);
  rep.config = std::move(cfg);
  return rep;
}

}  // namespace detail

// tr(f(A)) ~ (1/N) sum_k z_k^T f(A) z_k over full Rademacher probes.
inline EstimatorReport hutchinson_trace(const LinearOperator& op,
                                        const EstimatorConfig& cfg) {
  detail::validate_config(cfg);
  if (cfg.family != VectorFamily::full_rademacher)
    throw std::invalid_argument(
        "hutchinson_trace: config must use the full Rademacher family");
  const std::size_t n = op.dimension();
  const std::size_t m = detail::clamp_steps(cfg.m, n);
  const Reorth reorth = cfg.reorth.value_or(default_reorth(m));

  std::vector<double> samples(cfg.N);
  parallel_for(cfg.N, [&](std::size_t i) {
    Rng rng = Rng::for_stream(cfg.seed, stream::tagged(stream::kSamples, i));
    const std::vector<double> z = rademacher_vector(n, rng);
    samples[i] = detail::quadform_sample(op, z, m, reorth, cfg.function);
  });
  return detail::assemble_report(std::move(samples), 0.0, cfg);
}

// Unbiased partial-Rademacher trace estimator for Jordan-Wielandt operators:
// samples are 2 z^T f(A) z with z supported on one block, plus the closed-form
// correction (n2-n1) f(0) for the upper family or (n1-n2) f(0) for the lower.
// Equal blocks make the correction vanish.
inline EstimatorReport partial_rademacher_trace(const JordanWielandtOperator& op,
                                                const EstimatorConfig& cfg) {
  detail::validate_config(cfg);
  if (cfg.family == VectorFamily::full_rademacher)
    throw std::invalid_argument(
        "partial_rademacher_trace: config must use a partial family");
  const bool upper = cfg.family == VectorFamily::upper_partial;
  const std::size_t n1 = op.n1(), n2 = op.n2();
  const std::size_t m = detail::clamp_steps(cfg.m, op.dimension());
  const Reorth reorth = cfg.reorth.value_or(default_reorth(m));

  const double f0 = cfg.function(0.0);
  if (!std::isfinite(f0))
    throw NumericalError("partial_rademacher_trace: f(0) is non-finite");
  const double constant =
      (upper ? (static_cast<double>(n2) - static_cast<double>(n1))
             : (static_cast<double>(n1) - static_cast<double>(n2))) *
      f0;

  PartialVectorSpec spec;
  spec.n1 = n1;
  spec.n2 = n2;
  spec.side =
      upper ? PartialVectorSpec::Side::upper : PartialVectorSpec::Side::lower;
  spec.family = PartialVectorSpec::Family::rademacher;

  std::vector<double> samples(cfg.N);
  parallel_for(cfg.N, [&](std::size_t i) {
    Rng rng = Rng::for_stream(cfg.seed, stream::tagged(stream::kSamples, i));
    const std::vector<double> z = make_partial_vector(spec, rng);
    samples[i] =
        2.0 * detail::quadform_sample(op, z, m, reorth, cfg.function);
  });
  return detail::assemble_report(std::move(samples), constant, cfg);
}

// Hutch++-style estimator: ceil(q/3) sketch queries build an orthonormal
// deflation basis from A-probes, the projected trace is summed exactly over
// that basis, and the remaining budget drives Hutchinson sampling on the
// deflated complement. Quadratic forms under f go through the same m-step
// Lanczos quadrature as the other estimators.
inline EstimatorReport hutchpp_trace(const LinearOperator& op,
                                     std::size_t total_queries, std::size_t m,
                                     const ScalarFunction& f,
                                     std::uint64_t seed) {
  if (total_queries < 3)
    throw std::invalid_argument("hutchpp_trace: budget must be >= 3");
  const std::size_t n = op.dimension();
  const std::size_t m_eff = detail::clamp_steps(m, n);
  const Reorth reorth = default_reorth(m_eff);
  const std::size_t k = (total_queries + 2) / 3;
  const std::size_t remainder =
      total_queries > 2 * k ? total_queries - 2 * k : 0;

  // Sketch Y = A * Omega, then modified Gram-Schmidt with a second pass;
  // columns that collapse are dropped, which handles rank-deficient A.
  std::vector<std::vector<double>> q_cols;
  std::vector<double> y(n);
  for (std::size_t col = 0; col < k; ++col) {
    Rng rng = Rng::for_stream(seed, stream::tagged(stream::kSketch, col));
    const std::vector<double> omega = rademacher_vector(n, rng);
    op.apply(omega, y);
    double norm0 = detail::norm2(y);
    if (norm0 == 0.0) continue;
    std::vector<double> q = y;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& prev : q_cols)
        detail::axpy(q, detail::dot(q, prev), prev);
    const double norm1 = detail::norm2(q);
    if (norm1 <= 1e-10 * norm0) continue;
    for (double& x : q) x /= norm1;
    q_cols.push_back(std::move(q));
  }

  double projected = 0.0;
  for (const auto& q : q_cols)
    projected += detail::quadform_sample(op, q, m_eff, reorth, f);

  std::vector<double> samples(remainder);
  parallel_for(remainder, [&](std::size_t i) {
    Rng rng = Rng::for_stream(seed, stream::tagged(stream::kRemainder, i));
    std::vector<double> g = rademacher_vector(n, rng);
    for (const auto& q : q_cols) detail::axpy(g, detail::dot(g, q), q);
    if (detail::norm2(g) == 0.0) {
      samples[i] = 0.0;
      return;
    }
    samples[i] = detail::quadform_sample(op, g, m_eff, reorth, f);
  });

  EstimatorConfig echo;
  echo.N = remainder;
  echo.m = m_eff;
  echo.seed = seed;
  echo.family = VectorFamily::full_rademacher;
  echo.function = f;
  return detail::assemble_report(std::move(samples), projected,
                                 std::move(echo));
}

// Spectral radius by norm-tracking power iteration; the norm estimate is
// stable even when the extreme eigenvalues come in +- pairs, as they do for
// Jordan-Wielandt operators.
inline double power_iteration_lmax(const LinearOperator& op, int steps = 100,
                                   double rtol = 1e-6, std::uint64_t seed = 0) {
  const std::size_t n = op.dimension();
  Rng rng = Rng::for_stream(seed, stream::tagged(stream::kPowerIteration, 0));
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng.gaussian();
  double est = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double nx = detail::norm2(x);
    if (nx == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] /= nx;
    op.apply(x, y);
    const double ny = detail::norm2(y);
    if (s > 0 && std::abs(ny - est) <= rtol * std::abs(ny)) return ny;
    est = ny;
    x = y;
  }
  return est;
}

// Estrada index tr(e^{beta A}), dispatched to the configured estimator with
// f(t) = e^{beta t}. Partial families demand the Jordan-Wielandt structure.
inline EstimatorReport estrada_index(const LinearOperator& op, double beta,
                                     EstimatorConfig cfg) {
  if (!std::isfinite(beta))
    throw std::invalid_argument("estrada_index: beta must be finite");
  cfg.function = ScalarFunction::exp_scaled(beta);
  if (cfg.family == VectorFamily::full_rademacher)
    return hutchinson_trace(op, cfg);
  const auto* jw = dynamic_cast<const JordanWielandtOperator*>(&op);
  if (!jw)
    throw StructureError(
        "estrada_index: partial families require a Jordan-Wielandt operator");
  return partial_rademacher_trace(*jw, cfg);
}

}  // namespace slq
