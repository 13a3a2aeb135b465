// Command-line surface for the stochastic Lanczos quadrature library:
//   estrada            trace-of-matrix-exponential estimation on graphs
//   variance-experiment per-family sample variances of the quadratic forms
//   error-vs-queries   percentile relative error against a dense reference
//   inspect-quadrature nodes, weights, symmetry report, measure breakpoints
//
// Exit codes: 0 success, 1 unexpected, 2 parse/usage, 3 structure,
// 4 numerical, 5 dense reference infeasible.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slq/slq.hpp"

namespace {

struct OracleLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}
std::string f17(double v) { return fmt(v, 17); }
std::string f12(double v) { return fmt(v, 12); }

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Streaming JSON writer with fixed key order; numbers carry 17 significant
// digits so reruns are byte-comparable.
class JsonWriter {
 public:
  void begin_object(const char* key = nullptr) {
    open(key);
    out_ += '{';
    depth_++;
    fresh_ = true;
  }
  void end_object() {
    depth_--;
    if (!fresh_) newline();
    out_ += '}';
    fresh_ = false;
  }
  void kv(const char* key, double v) { scalar(key, f17(v)); }
  void kv_int(const char* key, long long v) { scalar(key, std::to_string(v)); }
  void kv_uint(const char* key, unsigned long long v) {
    scalar(key, std::to_string(v));
  }
  void kv_bool(const char* key, bool v) { scalar(key, v ? "true" : "false"); }
  void kv_str(const char* key, const std::string& v) {
    scalar(key, "\"" + json_escape(v) + "\"");
  }
  void kv_array(const char* key, const std::vector<double>& v) {
    std::string body = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) body += ", ";
      body += f17(v[i]);
    }
    body += "]";
    scalar(key, body);
  }
  std::string finish() {
    out_ += '\n';
    return std::move(out_);
  }

 private:
  void newline() {
    out_ += '\n';
    out_.append(static_cast<std::size_t>(2 * depth_), ' ');
  }
  void open(const char* key) {
    if (!fresh_ && depth_ > 0) out_ += ',';
    if (depth_ > 0) newline();
    if (key) {
      out_ += '"';
      out_ += json_escape(key);
      out_ += "\": ";
    }
  }
  void scalar(const char* key, const std::string& rendered) {
    open(key);
    out_ += rendered;
    fresh_ = false;
  }

  std::string out_;
  int depth_ = 0;
  bool fresh_ = true;
};

// RFC-4180 field quoting: quote when a comma, quote, or line break appears.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += "\"\"";
    else q += c;
  }
  q += '"';
  return q;
}

void csv_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
}

// Resolved command + flags, embedded in every output so a run can be
// reproduced from its artifact alone.
struct Manifest {
  explicit Manifest(std::string command) {
    entries.emplace_back("command", std::move(command));
    entries.emplace_back("version", slq::kVersion);
  }
  void add(const std::string& k, std::string v) {
    entries.emplace_back(k, std::move(v));
  }
  void add(const std::string& k, double v) { entries.emplace_back(k, f17(v)); }
  void add_uint(const std::string& k, unsigned long long v) {
    entries.emplace_back(k, std::to_string(v));
  }
  void add(const std::string& k, bool v) {
    entries.emplace_back(k, v ? "true" : "false");
  }

  void write_json(JsonWriter& w, long long duration_ms) const {
    w.begin_object("manifest");
    for (const auto& [k, v] : entries) w.kv_str(k.c_str(), v);
    w.kv_int("duration_ms", duration_ms);
    w.end_object();
  }
  // One row per entry; the value sits in the last column, middles padded.
  void write_csv(std::string& out, std::size_t columns,
                 long long duration_ms) const {
    auto row = [&](const std::string& k, const std::string& v) {
      std::vector<std::string> fields(columns);
      fields.front() = "manifest." + k;
      fields.back() = v;
      csv_row(out, fields);
    };
    for (const auto& [k, v] : entries) row(k, v);
    row("duration_ms", std::to_string(duration_ms));
  }

  std::vector<std::pair<std::string, std::string>> entries;
};

using Clock = std::chrono::steady_clock;

long long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start)
      .count();
}

// Either a Jordan-Wielandt operator (block known) or a plain symmetric one.
struct Bundle {
  std::unique_ptr<slq::JordanWielandtOperator> jw;
  std::unique_ptr<slq::SparseSymmetric> sym;
  std::unique_ptr<slq::DenseSymmetric> dense;  // built-in case path

  const slq::LinearOperator& op() const {
    if (jw) return *jw;
    if (sym) return *sym;
    return *dense;
  }
  bool is_jw() const { return jw != nullptr; }

  slq::DenseSymmetric to_dense() const {
    if (jw) return jw->to_dense();
    if (dense) return *dense;
    return slq::DenseSymmetric(sym->csr().to_dense());
  }
};

Bundle load_matrix(const std::string& path, bool bipartize_flag,
                   std::size_t split) {
  slq::SparseCsr a = slq::read_matrix_market(path);
  Bundle b;
  if (bipartize_flag) {
    if (a.rows() != a.cols())
      throw slq::StructureError(
          "--bipartize requires a square adjacency matrix, got " +
          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    b.jw = std::make_unique<slq::JordanWielandtOperator>(std::move(a));
  } else if (split > 0) {
    auto block = slq::try_split_jordan_wielandt(a, split);
    if (!block)
      throw slq::StructureError(
          "matrix is not Jordan-Wielandt under --split " +
          std::to_string(split) + " (diagonal blocks must be zero)");
    b.jw = std::make_unique<slq::JordanWielandtOperator>(std::move(*block));
  } else {
    b.sym = std::make_unique<slq::SparseSymmetric>(std::move(a));
  }
  return b;
}

Bundle make_synthetic(const std::vector<std::uint64_t>& triple) {
  Bundle b;
  b.jw = std::make_unique<slq::JordanWielandtOperator>(slq::make_synthetic_block(
      static_cast<std::size_t>(triple[0]), static_cast<std::size_t>(triple[1]),
      triple[2]));
  return b;
}

constexpr std::size_t kDenseOracleCap = 2000;

std::vector<double> reference_spectrum(const Bundle& b) {
  const std::size_t n = b.op().dimension();
  if (n > kDenseOracleCap)
    throw OracleLimitError(
        "dimension " + std::to_string(n) + " exceeds the dense-reference cap " +
        std::to_string(kDenseOracleCap) +
        "; use variance-experiment, which needs no reference");
  return slq::dense_eigenvalues(b.to_dense());
}

double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Payload to --out (with a one-line stdout summary) or to stdout directly.
int emit(const std::string& payload, const std::string& out_path,
         const std::string& summary) {
  if (out_path.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
      throw std::runtime_error("cannot open '" + out_path + "' for writing");
    f << payload;
    std::printf("%s -> %s\n", summary.c_str(), out_path.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// estrada

struct EstradaParams {
  std::string matrix;
  double beta = 0.0;
  double beta_over_lmax = 0.0;
  bool beta_set = false;
  bool bol_set = false;
  std::string estimator = "hutchinson";
  std::size_t n_samples = 1;
  std::size_t m = 100;
  std::uint64_t seed = 0;
  bool bipartize = false;
  std::size_t split = 0;
  std::string format = "json";
  std::string out;
};

int cmd_estrada(const EstradaParams& p) {
  const auto start = Clock::now();
  Bundle b = load_matrix(p.matrix, p.bipartize, p.split);

  std::optional<double> lambda_max;
  double beta = p.beta;
  if (p.bol_set) {
    lambda_max = slq::power_iteration_lmax(b.op(), 100, 1e-6, p.seed);
    if (*lambda_max <= 0.0)
      throw slq::NumericalError(
          "--beta-over-lmax: spectral radius estimate is not positive");
    beta = p.beta_over_lmax / *lambda_max;
  }

  slq::EstimatorConfig cfg;
  cfg.N = p.n_samples;
  cfg.m = p.m;
  cfg.seed = p.seed;
  cfg.function = slq::ScalarFunction::exp_scaled(beta);

  slq::EstimatorReport rep;
  if (p.estimator == "hutchinson") {
    cfg.family = slq::VectorFamily::full_rademacher;
    rep = slq::hutchinson_trace(b.op(), cfg);
  } else if (p.estimator == "partial-upper" || p.estimator == "partial-lower") {
    if (!b.is_jw())
      throw slq::StructureError(
          "estimator '" + p.estimator +
          "' requires Jordan-Wielandt structure; pass --split or --bipartize");
    cfg.family = p.estimator == "partial-upper"
                     ? slq::VectorFamily::upper_partial
                     : slq::VectorFamily::lower_partial;
    rep = slq::partial_rademacher_trace(*b.jw, cfg);
  } else {  // hutchpp; --N is the total query budget
    rep = slq::hutchpp_trace(b.op(), p.n_samples, p.m, cfg.function, p.seed);
  }

  Manifest man("estrada");
  man.add("matrix", p.matrix);
  man.add("estimator", p.estimator);
  if (p.beta_set) man.add("beta", p.beta);
  if (p.bol_set) man.add("beta_over_lmax", p.beta_over_lmax);
  man.add_uint("N", p.n_samples);
  man.add_uint("m", p.m);
  man.add_uint("seed", p.seed);
  man.add("bipartize", p.bipartize);
  man.add_uint("split", p.split);
  man.add("format", p.format);

  const long long ms = elapsed_ms(start);
  std::string payload;
  if (p.format == "json") {
    JsonWriter w;
    w.begin_object();
    man.write_json(w, ms);
    w.kv("beta", beta);
    if (lambda_max) w.kv("lambda_max", *lambda_max);
    w.kv("estimate", rep.estimate);
    w.kv("sample_variance", rep.sample_variance);
    w.kv("std_error", rep.std_error);
    w.kv("constant_term", rep.constant_term);
    w.kv_array("samples", rep.samples);
    w.end_object();
    payload = w.finish();
  } else {
    csv_row(payload, {"key", "value"});
    man.write_csv(payload, 2, ms);
    csv_row(payload, {"beta", f12(beta)});
    if (lambda_max) csv_row(payload, {"lambda_max", f12(*lambda_max)});
    csv_row(payload, {"estimate", f12(rep.estimate)});
    csv_row(payload, {"sample_variance", f12(rep.sample_variance)});
    csv_row(payload, {"std_error", f12(rep.std_error)});
    csv_row(payload, {"constant_term", f12(rep.constant_term)});
    for (std::size_t i = 0; i < rep.samples.size(); ++i)
      csv_row(payload, {"sample." + std::to_string(i), f12(rep.samples[i])});
  }
  return emit(payload, p.out,
              "estimate " + f12(rep.estimate) + " +- " + f12(rep.std_error));
}

// ---------------------------------------------------------------------------
// variance-experiment

struct VarianceParams {
  std::string matrix;
  std::vector<std::uint64_t> synthetic;
  std::size_t trials = 100;
  std::size_t m = 50;
  std::string function = "exp";
  double gamma = 1.0;
  double gamma_over_lmax = 0.0;
  bool gol_set = false;
  std::uint64_t seed = 0;
  bool bipartize = false;
  std::size_t split = 0;
  std::string out;
};

int cmd_variance_experiment(const VarianceParams& p) {
  const auto start = Clock::now();
  if (p.matrix.empty() == p.synthetic.empty())
    throw std::invalid_argument(
        "variance-experiment: give exactly one of <matrix.mtx> or --synthetic "
        "n1 n2 seed");
  Bundle b = p.matrix.empty() ? make_synthetic(p.synthetic)
                              : load_matrix(p.matrix, p.bipartize, p.split);
  if (!b.is_jw())
    throw slq::StructureError(
        "variance-experiment compares Jordan-Wielandt vector families; pass "
        "--split or --bipartize, or use --synthetic");
  if (p.trials < 1)
    throw std::invalid_argument("variance-experiment: --trials must be >= 1");

  std::optional<double> lambda_max;
  double gamma = p.gamma;
  if (p.gol_set) {
    lambda_max = slq::power_iteration_lmax(b.op(), 100, 1e-6, p.seed);
    if (*lambda_max <= 0.0)
      throw slq::NumericalError(
          "--gamma-over-lmax: spectral radius estimate is not positive");
    gamma = p.gamma_over_lmax / *lambda_max;
  }

  slq::EstimatorConfig cfg;
  cfg.N = p.trials;
  cfg.m = p.m;
  cfg.seed = p.seed;
  cfg.function = slq::ScalarFunction::from_name(p.function, gamma);

  // Per-trial single samples come straight out of one N=trials run per family.
  cfg.family = slq::VectorFamily::lower_partial;
  const auto lower = slq::partial_rademacher_trace(*b.jw, cfg);
  cfg.family = slq::VectorFamily::upper_partial;
  const auto upper = slq::partial_rademacher_trace(*b.jw, cfg);
  cfg.family = slq::VectorFamily::full_rademacher;
  const auto full = slq::hutchinson_trace(b.op(), cfg);

  Manifest man("variance-experiment");
  if (!p.matrix.empty()) man.add("matrix", p.matrix);
  if (!p.synthetic.empty()) {
    man.add_uint("synthetic.n1", p.synthetic[0]);
    man.add_uint("synthetic.n2", p.synthetic[1]);
    man.add_uint("synthetic.seed", p.synthetic[2]);
  }
  man.add_uint("trials", p.trials);
  man.add_uint("m", p.m);
  man.add("function", p.function);
  man.add("gamma", gamma);
  if (p.gol_set) man.add("gamma_over_lmax", p.gamma_over_lmax);
  man.add_uint("seed", p.seed);
  man.add("bipartize", p.bipartize);
  man.add_uint("split", p.split);

  std::string payload;
  csv_row(payload, {"record", "trial", "family", "value"});
  const std::array<std::pair<const char*, const slq::EstimatorReport*>, 3>
      families{{{"lower", &lower}, {"upper", &upper}, {"full", &full}}};
  for (const auto& [name, rep] : families)
    for (std::size_t t = 0; t < rep->samples.size(); ++t)
      csv_row(payload,
              {"sample", std::to_string(t), name, f12(rep->samples[t])});
  for (const auto& [name, rep] : families)
    csv_row(payload, {"variance", "", name, f12(rep->sample_variance)});
  man.write_csv(payload, 4, elapsed_ms(start));

  return emit(payload, p.out,
              "variances lower " + f12(lower.sample_variance) + ", upper " +
                  f12(upper.sample_variance) + ", full " +
                  f12(full.sample_variance));
}

// ---------------------------------------------------------------------------
// error-vs-queries

struct ErrorQueriesParams {
  std::string matrix;
  std::vector<std::uint64_t> synthetic;
  std::vector<std::size_t> queries;
  std::size_t trials = 100;
  std::size_t m = 20;
  std::string function = "exp";
  double gamma = 1.0;
  double gamma_over_lmax = 0.0;
  bool gol_set = false;
  std::vector<std::string> estimators;
  std::uint64_t seed = 0;
  bool bipartize = false;
  std::size_t split = 0;
  std::string out;
};

int cmd_error_vs_queries(const ErrorQueriesParams& p) {
  const auto start = Clock::now();
  if (p.matrix.empty() == p.synthetic.empty())
    throw std::invalid_argument(
        "error-vs-queries: give exactly one of <matrix.mtx> or --synthetic "
        "n1 n2 seed");
  Bundle b = p.matrix.empty() ? make_synthetic(p.synthetic)
                              : load_matrix(p.matrix, p.bipartize, p.split);
  if (p.trials < 1)
    throw std::invalid_argument("error-vs-queries: --trials must be >= 1");

  std::vector<std::size_t> queries = p.queries;
  if (queries.empty()) queries = {30, 60, 120};
  std::sort(queries.begin(), queries.end());
  for (std::size_t q : queries)
    if (q < 1)
      throw std::invalid_argument("error-vs-queries: queries must be >= 1");

  std::vector<std::string> estimators = p.estimators;
  if (estimators.empty()) {
    estimators = {"hutchinson-full"};
    if (b.is_jw()) {
      estimators.push_back("hutchinson-upper");
      estimators.push_back("hutchinson-lower");
    }
    estimators.push_back("hutchpp");
  }
  for (const auto& e : estimators) {
    if (e != "hutchinson-full" && e != "hutchinson-upper" &&
        e != "hutchinson-lower" && e != "hutchpp")
      throw std::invalid_argument("error-vs-queries: unknown estimator '" + e +
                                  "'");
    if ((e == "hutchinson-upper" || e == "hutchinson-lower") && !b.is_jw())
      throw slq::StructureError("estimator '" + e +
                                "' requires Jordan-Wielandt structure");
    if (e == "hutchpp" && queries.front() < 3)
      throw std::invalid_argument(
          "error-vs-queries: hutchpp needs every query budget >= 3");
  }

  std::optional<double> lambda_max;
  double gamma = p.gamma;
  if (p.gol_set) {
    lambda_max = slq::power_iteration_lmax(b.op(), 100, 1e-6, p.seed);
    if (*lambda_max <= 0.0)
      throw slq::NumericalError(
          "--gamma-over-lmax: spectral radius estimate is not positive");
    gamma = p.gamma_over_lmax / *lambda_max;
  }
  const slq::ScalarFunction f = slq::ScalarFunction::from_name(p.function, gamma);

  const std::vector<double> spectrum = reference_spectrum(b);
  double exact = 0.0;
  for (double lam : spectrum) exact += f(lam);
  if (exact == 0.0 || !std::isfinite(exact))
    throw slq::NumericalError(
        "error-vs-queries: reference trace is zero or non-finite; relative "
        "error undefined");

  auto estimate_once = [&](const std::string& est, std::size_t q,
                           std::uint64_t trial_seed) {
    slq::EstimatorConfig cfg;
    cfg.N = q;
    cfg.m = p.m;
    cfg.seed = trial_seed;
    cfg.function = f;
    if (est == "hutchinson-full") {
      return slq::hutchinson_trace(b.op(), cfg).estimate;
    } else if (est == "hutchinson-upper") {
      cfg.family = slq::VectorFamily::upper_partial;
      return slq::partial_rademacher_trace(*b.jw, cfg).estimate;
    } else if (est == "hutchinson-lower") {
      cfg.family = slq::VectorFamily::lower_partial;
      return slq::partial_rademacher_trace(*b.jw, cfg).estimate;
    }
    return slq::hutchpp_trace(b.op(), q, p.m, f, trial_seed).estimate;
  };

  std::string payload;
  csv_row(payload, {"estimator", "queries", "p25", "p50", "p75"});
  for (const auto& est : estimators)
    for (std::size_t q : queries) {
      std::vector<double> errs(p.trials);
      for (std::size_t t = 0; t < p.trials; ++t) {
        const double e = estimate_once(est, q, p.seed + t);
        errs[t] = std::abs(e - exact) / std::abs(exact);
      }
      std::sort(errs.begin(), errs.end());
      csv_row(payload,
              {est, std::to_string(q), f12(percentile(errs, 25.0)),
               f12(percentile(errs, 50.0)), f12(percentile(errs, 75.0))});
    }

  Manifest man("error-vs-queries");
  if (!p.matrix.empty()) man.add("matrix", p.matrix);
  if (!p.synthetic.empty()) {
    man.add_uint("synthetic.n1", p.synthetic[0]);
    man.add_uint("synthetic.n2", p.synthetic[1]);
    man.add_uint("synthetic.seed", p.synthetic[2]);
  }
  {
    std::string qs;
    for (std::size_t q : queries) {
      if (!qs.empty()) qs += ' ';
      qs += std::to_string(q);
    }
    man.add("queries", qs);
    std::string es;
    for (const auto& e : estimators) {
      if (!es.empty()) es += ' ';
      es += e;
    }
    man.add("estimators", es);
  }
  man.add_uint("trials", p.trials);
  man.add_uint("m", p.m);
  man.add("function", p.function);
  man.add("gamma", gamma);
  if (p.gol_set) man.add("gamma_over_lmax", p.gamma_over_lmax);
  man.add_uint("seed", p.seed);
  man.add("bipartize", p.bipartize);
  man.add_uint("split", p.split);
  man.add("reference_trace", exact);
  man.write_csv(payload, 5, elapsed_ms(start));

  return emit(payload, p.out, "error percentiles for " +
                                  std::to_string(estimators.size()) +
                                  " estimators");
}

// ---------------------------------------------------------------------------
// inspect-quadrature

struct InspectParams {
  std::string matrix;
  std::string builtin;
  std::string vector_mode = "ones";
  bool vector_set = false;
  std::string vector_file;
  std::size_t m = 10;
  double shift = 0.0;
  bool auto_shift = false;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool bipartize = false;
  std::size_t split = 0;
  std::string out;
};

std::vector<double> read_vector_file(const std::string& path, std::size_t n) {
  const slq::SparseCsr v = slq::read_matrix_market(path);
  const bool column = v.cols() == 1 && v.rows() == n;
  const bool row = v.rows() == 1 && v.cols() == n;
  if (!column && !row)
    throw slq::StructureError("--vector-file: expected a " + std::to_string(n) +
                              "-vector, got " + std::to_string(v.rows()) + "x" +
                              std::to_string(v.cols()));
  const slq::DenseMatrix d = v.to_dense();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = column ? d.at(i, 0) : d.at(0, i);
  return x;
}

int cmd_inspect_quadrature(const InspectParams& p) {
  const auto start = Clock::now();
  if (p.matrix.empty() == p.builtin.empty())
    throw std::invalid_argument(
        "inspect-quadrature: give exactly one of <matrix.mtx> or --builtin "
        "case1|case2|case3");

  Bundle b;
  std::vector<double> v;
  if (!p.builtin.empty()) {
    const int which = p.builtin == "case1" ? 1 : p.builtin == "case2" ? 2 : 3;
    auto cp = slq::make_case_problem(which);
    b.dense = std::make_unique<slq::DenseSymmetric>(std::move(cp.matrix));
    if (!p.vector_set) v = std::move(cp.start);
  } else {
    b = load_matrix(p.matrix, p.bipartize, p.split);
  }
  const std::size_t n = b.op().dimension();

  if (v.empty()) {
    if (p.vector_mode == "ones") {
      v.assign(n, 1.0);
    } else if (p.vector_mode == "partial-upper" ||
               p.vector_mode == "partial-lower") {
      if (!b.is_jw())
        throw slq::StructureError(
            "--vector " + p.vector_mode +
            " requires Jordan-Wielandt structure; pass --split or --bipartize");
      slq::PartialVectorSpec spec;
      spec.n1 = b.jw->n1();
      spec.n2 = b.jw->n2();
      spec.side = p.vector_mode == "partial-upper"
                      ? slq::PartialVectorSpec::Side::upper
                      : slq::PartialVectorSpec::Side::lower;
      slq::Rng rng = slq::Rng::for_stream(
          p.seed, slq::stream::tagged(slq::stream::kSamples, 0));
      v = slq::make_partial_vector(spec, rng);
    } else {  // file
      if (p.vector_file.empty())
        throw std::invalid_argument(
            "--vector file requires --vector-file <path.mtx>");
      v = read_vector_file(p.vector_file, n);
    }
  }

  const auto lan = slq::tridiagonalize(b.op(), v, p.m);
  const auto rule = slq::golub_welsch(lan.jacobi);

  double shift = p.shift;
  if (p.auto_shift) {
    const std::vector<double> spectrum = reference_spectrum(b);
    shift = 0.5 * (spectrum.front() + spectrum.back());
  }
  const auto sym = slq::classify_symmetry(rule, shift, p.tol);

  constexpr std::size_t kMeasureCap = 256;
  std::optional<slq::MeasureFunction> measure;
  if (n <= kMeasureCap) {
    const slq::DenseEigen eig = slq::jacobi_eigh(b.to_dense());
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    std::vector<double> mu(n);
    for (std::size_t col = 0; col < n; ++col) {
      double s = 0.0;
      for (std::size_t row = 0; row < n; ++row)
        s += eig.vectors.at(row, col) * v[row];
      mu[col] = s / norm;
    }
    measure = slq::measure_oracle(eig.values, mu);
  }

  Manifest man("inspect-quadrature");
  if (!p.matrix.empty()) man.add("matrix", p.matrix);
  if (!p.builtin.empty()) man.add("builtin", p.builtin);
  man.add("vector", p.builtin.empty() || p.vector_set ? p.vector_mode
                                                      : "builtin-start");
  if (!p.vector_file.empty()) man.add("vector_file", p.vector_file);
  man.add_uint("m", p.m);
  man.add("shift", shift);
  man.add("auto_shift", p.auto_shift);
  man.add("tol", p.tol);
  man.add_uint("seed", p.seed);
  man.add("bipartize", p.bipartize);
  man.add_uint("split", p.split);

  JsonWriter w;
  w.begin_object();
  man.write_json(w, elapsed_ms(start));
  w.kv_uint("dimension", n);
  w.kv_uint("effective_m", lan.effective_m);
  w.kv_bool("breakdown", lan.breakdown);
  w.kv_array("nodes", rule.nodes);
  w.kv_array("weights", rule.weights);
  w.begin_object("symmetry");
  w.kv_bool("symmetric", sym.symmetric);
  w.kv("shift", sym.shift);
  w.kv("max_node_asymmetry", sym.max_node_asymmetry);
  w.kv("max_weight_asymmetry", sym.max_weight_asymmetry);
  w.kv_uint("unpaired_nodes", sym.unpaired_nodes);
  w.end_object();
  if (measure) {
    w.begin_object("measure");
    w.kv_array("breakpoints", measure->breakpoints());
    w.kv_array("increments", measure->increments());
    w.end_object();
  }
  w.end_object();

  return emit(w.finish(), p.out,
              std::string("rule is ") +
                  (sym.symmetric ? "symmetric" : "asymmetric") + " about " +
                  f12(shift));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic Lanczos quadrature toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  auto add_seed = [](CLI::App* cmd, std::uint64_t& seed) {
    cmd->add_option("--seed", seed, "RNG seed (env SLQ_SEED, flag wins)")
        ->envname("SLQ_SEED");
  };

  // estrada ----------------------------------------------------------------
  auto ep = std::make_shared<EstradaParams>();
  {
    CLI::App* c = app.add_subcommand(
        "estrada", "estimate tr(exp(beta*A)) of a Matrix Market graph");
    c->add_option("matrix", ep->matrix, "Matrix Market file")->required();
    auto* g = c->add_option_group("beta", "exponent scale");
    auto* ob = g->add_option("--beta", ep->beta, "explicit beta");
    auto* ol = g->add_option("--beta-over-lmax", ep->beta_over_lmax,
                             "beta = value / lambda_max(A)");
    g->require_option(1);
    c->add_option("--estimator", ep->estimator, "estimator family")
        ->check(CLI::IsMember(
            {"hutchinson", "partial-upper", "partial-lower", "hutchpp"}));
    c->add_option("--N", ep->n_samples,
                  "sample count (hutchpp: total query budget)");
    c->add_option("--m", ep->m, "Lanczos steps per sample");
    add_seed(c, ep->seed);
    c->add_flag("--bipartize", ep->bipartize,
                "treat input as directed adjacency, embed as [[0,B],[B^T,0]]");
    c->add_option("--split", ep->split,
                  "declare rows 1..n1 as the upper Jordan-Wielandt block");
    c->add_option("--format", ep->format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--out", ep->out, "write report here instead of stdout");
    c->callback([ep, ob, ol, &action] {
      ep->beta_set = ob->count() > 0;
      ep->bol_set = ol->count() > 0;
      action = [ep] { return cmd_estrada(*ep); };
    });
  }

  // variance-experiment ----------------------------------------------------
  auto vp = std::make_shared<VarianceParams>();
  {
    CLI::App* c = app.add_subcommand(
        "variance-experiment",
        "per-family sample variances of the quadratic-form estimators");
    c->add_option("matrix", vp->matrix, "Matrix Market file");
    c->add_option("--synthetic", vp->synthetic,
                  "synthetic Jordan-Wielandt block: n1 n2 seed")
        ->expected(3);
    c->add_option("--trials", vp->trials, "number of single-sample trials");
    c->add_option("--m", vp->m, "Lanczos steps per sample");
    c->add_option("--function", vp->function, "integrand")
        ->check(CLI::IsMember({"identity", "square", "exp"}));
    auto* og = c->add_option("--gamma", vp->gamma, "scale inside exp");
    auto* ogl = c->add_option("--gamma-over-lmax", vp->gamma_over_lmax,
                              "gamma = value / lambda_max(A)");
    ogl->excludes(og);
    add_seed(c, vp->seed);
    c->add_flag("--bipartize", vp->bipartize, "embed directed adjacency");
    c->add_option("--split", vp->split, "declared upper-block rows");
    c->add_option("--out", vp->out, "write CSV here instead of stdout");
    c->callback([vp, ogl, &action] {
      vp->gol_set = ogl->count() > 0;
      action = [vp] { return cmd_variance_experiment(*vp); };
    });
  }

  // error-vs-queries -------------------------------------------------------
  auto qp = std::make_shared<ErrorQueriesParams>();
  {
    CLI::App* c = app.add_subcommand(
        "error-vs-queries",
        "percentile relative error against the dense reference trace");
    c->add_option("matrix", qp->matrix, "Matrix Market file");
    c->add_option("--synthetic", qp->synthetic,
                  "synthetic Jordan-Wielandt block: n1 n2 seed")
        ->expected(3);
    c->add_option("--queries", qp->queries, "query budgets, e.g. 30 60 120");
    c->add_option("--trials", qp->trials, "trials per (estimator, budget)");
    c->add_option("--m", qp->m, "Lanczos steps per sample");
    c->add_option("--function", qp->function, "integrand")
        ->check(CLI::IsMember({"identity", "square", "exp"}));
    auto* og = c->add_option("--gamma", qp->gamma, "scale inside exp");
    auto* ogl = c->add_option("--gamma-over-lmax", qp->gamma_over_lmax,
                              "gamma = value / lambda_max(A)");
    ogl->excludes(og);
    c->add_option("--estimators", qp->estimators,
                  "subset of hutchinson-full hutchinson-upper "
                  "hutchinson-lower hutchpp");
    add_seed(c, qp->seed);
    c->add_flag("--bipartize", qp->bipartize, "embed directed adjacency");
    c->add_option("--split", qp->split, "declared upper-block rows");
    c->add_option("--out", qp->out, "write CSV here instead of stdout");
    c->callback([qp, ogl, &action] {
      qp->gol_set = ogl->count() > 0;
      action = [qp] { return cmd_error_vs_queries(*qp); };
    });
  }

  // inspect-quadrature -----------------------------------------------------
  auto ip = std::make_shared<InspectParams>();
  {
    CLI::App* c = app.add_subcommand(
        "inspect-quadrature",
        "nodes, weights, symmetry report and measure of one Lanczos run");
    c->add_option("matrix", ip->matrix, "Matrix Market file");
    c->add_option("--builtin", ip->builtin, "built-in 50x50 diagnostic case")
        ->check(CLI::IsMember({"case1", "case2", "case3"}));
    auto* ov = c->add_option("--vector", ip->vector_mode, "starting vector")
                   ->check(CLI::IsMember(
                       {"ones", "partial-upper", "partial-lower", "file"}));
    c->add_option("--vector-file", ip->vector_file,
                  "Matrix Market n-vector for --vector file");
    c->add_option("--m", ip->m, "Lanczos steps");
    auto* os = c->add_option("--shift", ip->shift, "symmetry center");
    c->add_flag("--auto-shift", ip->auto_shift,
                "center at the spectrum midpoint (dense reference)")
        ->excludes(os);
    c->add_option("--tol", ip->tol, "symmetry tolerance")
        ->check(CLI::PositiveNumber);
    add_seed(c, ip->seed);
    c->add_flag("--bipartize", ip->bipartize, "embed directed adjacency");
    c->add_option("--split", ip->split, "declared upper-block rows");
    c->add_option("--out", ip->out, "write JSON here instead of stdout");
    c->callback([ip, ov, &action] {
      ip->vector_set = ov->count() > 0;
      action = [ip] { return cmd_inspect_quadrature(*ip); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const slq::ParseError& e) {
    if (e.line() > 0)
      std::fprintf(stderr, "parse error (line %ld): %s\n", e.line(), e.what());
    else
      std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const slq::StructureError& e) {
    std::fprintf(stderr, "structure error: %s\n", e.what());
    return 3;
  } catch (const slq::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 4;
  } catch (const OracleLimitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
