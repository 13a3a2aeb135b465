#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <tuple>
#include <variant>
#include <vector>

#include "slq/errors.hpp"
#include "slq/rng.hpp"

namespace slq {

// Dense rectangular matrix, row-major. Used for Jordan-Wielandt blocks and
// test-scale materializations; not itself a LinearOperator (may be non-square).
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("DenseMatrix: empty shape");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  // y = B x
  void apply_nt(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      const double* row = &a_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
      y[i] = s;
    }
  }

  // y = B^T x
  void apply_t(std::span<const double> x, std::span<double> y) const {
    for (std::size_t j = 0; j < cols_; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double xi = x[i];
      const double* row = &a_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) y[j] += row[j] * xi;
    }
  }

  double one_norm() const {  // max absolute column sum
    std::vector<double> col(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) col[j] += std::abs(at(i, j));
    return *std::max_element(col.begin(), col.end());
  }

  double inf_norm() const {  // max absolute row sum
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += std::abs(at(i, j));
      best = std::max(best, s);
    }
    return best;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
};

// Compressed-row sparse matrix, possibly rectangular.
class SparseCsr {
 public:
  SparseCsr(std::size_t n_rows, std::size_t n_cols,
            std::vector<std::size_t> row_ptr, std::vector<std::size_t> col_idx,
            std::vector<double> values)
      : n_rows_(n_rows),
        n_cols_(n_cols),
        row_ptr_(std::move(row_ptr)),
        col_idx_(std::move(col_idx)),
        values_(std::move(values)) {
    if (row_ptr_.size() != n_rows_ + 1)
      throw std::invalid_argument("SparseCsr: row_ptr length must be n_rows+1");
    for (std::size_t i = 0; i + 1 < row_ptr_.size(); ++i)
      if (row_ptr_[i] > row_ptr_[i + 1])
        throw std::invalid_argument("SparseCsr: row_ptr must be nondecreasing");
    if (row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size())
      throw std::invalid_argument("SparseCsr: inconsistent nnz");
    for (std::size_t c : col_idx_)
      if (c >= n_cols_)
        throw std::invalid_argument("SparseCsr: column index out of range");
  }

  // Duplicate coordinates are summed; rows and columns are sorted.
  static SparseCsr from_triplets(
      std::size_t n_rows, std::size_t n_cols,
      std::vector<std::tuple<std::size_t, std::size_t, double>> t) {
    for (const auto& [i, j, v] : t) {
      if (i >= n_rows || j >= n_cols)
        throw std::invalid_argument("SparseCsr: triplet index out of range");
      (void)v;
    }
    std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) <
             std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::vector<std::size_t> rp(n_rows + 1, 0), ci;
    std::vector<double> vals;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const auto& [i, j, v] = t[k];
      if (k > 0 && std::get<0>(t[k - 1]) == i && std::get<1>(t[k - 1]) == j) {
        vals.back() += v;
      } else {
        rp[i + 1]++;
        ci.push_back(j);
        vals.push_back(v);
      }
    }
    for (std::size_t i = 0; i < n_rows; ++i) rp[i + 1] += rp[i];
    return SparseCsr(n_rows, n_cols, std::move(rp), std::move(ci),
                     std::move(vals));
  }

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }
  std::size_t nnz() const { return values_.size(); }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  void apply_nt(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < n_rows_; ++i) {
      double s = 0.0;
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        s += values_[k] * x[col_idx_[k]];
      y[i] = s;
    }
  }

  void apply_t(std::span<const double> x, std::span<double> y) const {
    for (std::size_t j = 0; j < n_cols_; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < n_rows_; ++i) {
      const double xi = x[i];
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        y[col_idx_[k]] += values_[k] * xi;
    }
  }

  double one_norm() const {
    std::vector<double> col(n_cols_, 0.0);
    for (std::size_t k = 0; k < values_.size(); ++k)
      col[col_idx_[k]] += std::abs(values_[k]);
    return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
  }

  double inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_rows_; ++i) {
      double s = 0.0;
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        s += std::abs(values_[k]);
      best = std::max(best, s);
    }
    return best;
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(n_rows_, n_cols_);
    for (std::size_t i = 0; i < n_rows_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        d.at(i, col_idx_[k]) += values_[k];
    return d;
  }

  SparseCsr transposed() const {
    std::vector<std::tuple<std::size_t, std::size_t, double>> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < n_rows_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        t.emplace_back(col_idx_[k], i, values_[k]);
    return from_triplets(n_cols_, n_rows_, std::move(t));
  }

  bool is_symmetric() const {
    if (n_rows_ != n_cols_) return false;
    const SparseCsr tr = transposed();
    return row_ptr_ == tr.row_ptr_ && col_idx_ == tr.col_idx_ &&
           values_ == tr.values_;
  }

 private:
  std::size_t n_rows_, n_cols_;
  std::vector<std::size_t> row_ptr_, col_idx_;
  std::vector<double> values_;
};

// Abstract symmetric operator: all the Krylov code needs is a dimension and a
// matrix-vector product.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t dimension() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;

  // Scale used by breakdown tests. Exact for explicit matrices (overridden);
  // the black-box fallback probes with 8 Rademacher vectors and returns
  // max ||A x||_1 / ||x||_1, a lower bound of the true 1-norm with the right
  // order of magnitude.
  virtual double one_norm_estimate() const {
    const std::size_t n = dimension();
    Rng rng = Rng::for_stream(0xA11CEULL, 0);
    std::vector<double> x(n), y(n);
    double best = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      for (std::size_t i = 0; i < n; ++i) x[i] = rng.rademacher();
      apply(x, y);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::abs(y[i]);
      best = std::max(best, s / static_cast<double>(n));
    }
    return best;
  }
};

inline std::vector<double> matvec(const LinearOperator& op,
                                  std::span<const double> x) {
  if (x.size() != op.dimension())
    throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(op.dimension());
  op.apply(x, y);
  return y;
}

// Dense symmetric matrix; symmetry is validated exactly as stored.
class DenseSymmetric : public LinearOperator {
 public:
  explicit DenseSymmetric(DenseMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw std::invalid_argument("DenseSymmetric: matrix must be square");
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = i + 1; j < m_.cols(); ++j)
        if (m_.at(i, j) != m_.at(j, i))
          throw std::invalid_argument("DenseSymmetric: entries not symmetric");
  }

  static DenseSymmetric identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return DenseSymmetric(std::move(m));
  }

  std::size_t dimension() const override { return m_.rows(); }
  void apply(std::span<const double> x, std::span<double> y) const override {
    m_.apply_nt(x, y);
  }
  double one_norm_estimate() const override { return m_.one_norm(); }

  double at(std::size_t i, std::size_t j) const { return m_.at(i, j); }
  double& at(std::size_t i, std::size_t j) { return m_.at(i, j); }
  const DenseMatrix& dense() const { return m_; }

 private:
  DenseMatrix m_;
};

// Square sparse matrix checked for exact symmetry at construction.
class SparseSymmetric : public LinearOperator {
 public:
  explicit SparseSymmetric(SparseCsr m) : m_(std::move(m)) {
    if (!m_.is_symmetric())
      throw StructureError("SparseSymmetric: matrix is not symmetric");
  }

  std::size_t dimension() const override { return m_.rows(); }
  void apply(std::span<const double> x, std::span<double> y) const override {
    m_.apply_nt(x, y);
  }
  double one_norm_estimate() const override { return m_.one_norm(); }
  const SparseCsr& csr() const { return m_; }

 private:
  SparseCsr m_;
};

// A = [[0, B], [B^T, 0]] applied blockwise; the full matrix is never formed.
class JordanWielandtOperator : public LinearOperator {
 public:
  explicit JordanWielandtOperator(DenseMatrix b) : block_(std::move(b)) {}
  explicit JordanWielandtOperator(SparseCsr b) : block_(std::move(b)) {}

  std::size_t n1() const {
    return std::visit([](const auto& b) { return b.rows(); }, block_);
  }
  std::size_t n2() const {
    return std::visit([](const auto& b) { return b.cols(); }, block_);
  }
  std::size_t dimension() const override { return n1() + n2(); }

  // [x_u; x_d] -> [B x_d; B^T x_u]
  void apply(std::span<const double> x, std::span<double> y) const override {
    const std::size_t r = n1();
    std::visit(
        [&](const auto& b) {
          b.apply_nt(x.subspan(r), y.subspan(0, r));
          b.apply_t(x.subspan(0, r), y.subspan(r));
        },
        block_);
  }

  // ||A||_1 = max(||B||_1, ||B||_inf): columns of A are columns of B^T or B.
  double one_norm_estimate() const override {
    return std::visit(
        [](const auto& b) { return std::max(b.one_norm(), b.inf_norm()); },
        block_);
  }

  void block_apply_nt(std::span<const double> x, std::span<double> y) const {
    std::visit([&](const auto& b) { b.apply_nt(x, y); }, block_);
  }
  void block_apply_t(std::span<const double> x, std::span<double> y) const {
    std::visit([&](const auto& b) { b.apply_t(x, y); }, block_);
  }

  DenseMatrix block_dense() const {
    if (const auto* d = std::get_if<DenseMatrix>(&block_)) return *d;
    return std::get<SparseCsr>(block_).to_dense();
  }

  DenseSymmetric to_dense() const {
    const DenseMatrix b = block_dense();
    const std::size_t r = b.rows(), c = b.cols();
    DenseMatrix a(r + c, r + c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        a.at(i, r + j) = b.at(i, j);
        a.at(r + j, i) = b.at(i, j);
      }
    return DenseSymmetric(std::move(a));
  }

 private:
  std::variant<DenseMatrix, SparseCsr> block_;
};

inline JordanWielandtOperator compose_jordan_wielandt(DenseMatrix b) {
  return JordanWielandtOperator(std::move(b));
}
inline JordanWielandtOperator compose_jordan_wielandt(SparseCsr b) {
  return JordanWielandtOperator(std::move(b));
}

// Directed adjacency B becomes the undirected supra-adjacency [[0,B],[B^T,0]].
// Self-loops stay as edges between a node's row copy and column copy.
inline JordanWielandtOperator bipartize(DenseMatrix b) {
  if (b.rows() != b.cols())
    throw std::invalid_argument("bipartize: adjacency must be square");
  return JordanWielandtOperator(std::move(b));
}
inline JordanWielandtOperator bipartize(SparseCsr b) {
  if (b.rows() != b.cols())
    throw std::invalid_argument("bipartize: adjacency must be square");
  return JordanWielandtOperator(std::move(b));
}

// Recognizes a symmetric matrix as Jordan-Wielandt under a declared split:
// both diagonal blocks must be entirely zero. Returns the upper-right block.
inline std::optional<SparseCsr> try_split_jordan_wielandt(const SparseCsr& a,
                                                          std::size_t n1) {
  if (a.rows() != a.cols() || n1 == 0 || n1 >= a.rows()) return std::nullopt;
  const std::size_t n = a.rows(), n2 = n - n1;
  std::vector<std::tuple<std::size_t, std::size_t, double>> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const std::size_t j = a.col_idx()[k];
      const double v = a.values()[k];
      const bool upper_block = i < n1, upper_col = j < n1;
      if (upper_block == upper_col) {
        if (v != 0.0) return std::nullopt;  // nonzero inside a diagonal block
        continue;
      }
      if (upper_block) t.emplace_back(i, j - n1, v);
    }
  return SparseCsr::from_triplets(n1, n2, std::move(t));
}

}  // namespace slq
