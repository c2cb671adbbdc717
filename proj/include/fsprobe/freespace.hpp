#pragma once

// The free-space matrix and its query oracle.
//
// For curves P (|P| = n) and Q (|Q| = m) and a threshold delta, the free-space
// matrix M has n columns and m rows; entry (i, j) is 0 iff
// dist(P[i], Q[j]) <= delta, and 1 otherwise (note: zero means "free"/close).
// Indices are 1-based everywhere at this layer: column i belongs to the i-th
// vertex of P, row j to the j-th vertex of Q.
//
// Algorithms never see the matrix itself. They see an oracle that answers one
// kind of question: "give me the sorted positions of the zero entries of
// column i (or row j)". Every such answer costs exactly one query, which is
// the resource all tester guarantees are stated in.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fsprobe/errors.hpp"
#include "fsprobe/geometry.hpp"

namespace fsprobe {

/// Sorted 1-based positions of the zero entries of one slice. Views returned
/// by an oracle stay valid until the next query on the same axis of that
/// oracle (concrete oracles may guarantee more; callers must not assume it).
using zero_list = std::span<const std::int32_t>;

/// Which kind of slice a statement is about.
enum class axis { columns, rows };

inline const char* axis_name(axis a) {
  return a == axis::columns ? "columns" : "rows";
}

/// Dense explicit 0/1 matrix, 1-based, column-major. Small instances only.
struct bit_matrix {
  int n = 0;  ///< number of columns
  int m = 0;  ///< number of rows
  std::vector<std::uint8_t> v;  ///< v[(i-1)*m + (j-1)], values 0 or 1

  bit_matrix() = default;
  bit_matrix(int n_, int m_, std::uint8_t fill = 1)
      : n(n_), m(m_),
        v(static_cast<std::size_t>(n_) * static_cast<std::size_t>(m_), fill) {
    if (n_ < 1 || m_ < 1) throw bad_param("bit_matrix: need n, m >= 1");
  }

  std::uint8_t at(int i, int j) const {
    return v[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) +
             static_cast<std::size_t>(j - 1)];
  }
  void set(int i, int j, std::uint8_t val) {
    v[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) +
      static_cast<std::size_t>(j - 1)] = val;
  }
};

/// Explicit free-space matrix of two curves at threshold delta.
inline bit_matrix free_space_matrix(const curve& p, const curve& q,
                                    double delta) {
  validate(p);
  validate(q);
  if (p.dim() != q.dim()) throw bad_param("free_space_matrix: dim mismatch");
  bit_matrix mat(static_cast<int>(p.size()), static_cast<int>(q.size()));
  for (int i = 1; i <= mat.n; ++i)
    for (int j = 1; j <= mat.m; ++j)
      if (dist(p[static_cast<std::size_t>(i - 1)],
               q[static_cast<std::size_t>(j - 1)]) <= delta)
        mat.set(i, j, 0);
  return mat;
}

/// Immutable zero-entry storage for one matrix: the zero positions of every
/// column and every row, each sorted, in one flat array per axis. Built once
/// and shared (read-only) by any number of oracles.
class free_space_data {
 public:
  /// From explicit column zero-lists (each sorted ascending, values in
  /// [1, m]). by_col[i-1] holds the zeros of column i.
  static free_space_data from_column_zeros(
      int n, int m, const std::vector<std::vector<std::int32_t>>& by_col) {
    if (n < 1 || m < 1) throw bad_param("free_space_data: need n, m >= 1");
    if (static_cast<int>(by_col.size()) != n)
      throw bad_param("free_space_data: by_col size must equal n");
    free_space_data d;
    d.n_ = n;
    d.m_ = m;
    d.col_off_.assign(static_cast<std::size_t>(n) + 1, 0);
    std::size_t total = 0;
    for (const auto& col : by_col) total += col.size();
    d.col_zeros_.reserve(total);
    std::vector<std::size_t> row_counts(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < n; ++i) {
      std::int32_t prev = 0;
      for (std::int32_t j : by_col[static_cast<std::size_t>(i)]) {
        if (j < 1 || j > m || j <= prev)
          throw bad_param("free_space_data: column zeros must be sorted, in [1,m]");
        prev = j;
        d.col_zeros_.push_back(j);
        ++row_counts[static_cast<std::size_t>(j - 1)];
      }
      d.col_off_[static_cast<std::size_t>(i) + 1] = d.col_zeros_.size();
    }
    // Transpose into row lists (counting sort keeps each row sorted by i).
    d.row_off_.assign(static_cast<std::size_t>(m) + 1, 0);
    for (int j = 0; j < m; ++j)
      d.row_off_[static_cast<std::size_t>(j) + 1] =
          d.row_off_[static_cast<std::size_t>(j)] +
          row_counts[static_cast<std::size_t>(j)];
    d.row_zeros_.resize(total);
    std::vector<std::size_t> cursor(d.row_off_.begin(), d.row_off_.end() - 1);
    for (int i = 0; i < n; ++i)
      for (std::size_t k = d.col_off_[static_cast<std::size_t>(i)];
           k < d.col_off_[static_cast<std::size_t>(i) + 1]; ++k) {
        std::int32_t j = d.col_zeros_[k];
        d.row_zeros_[cursor[static_cast<std::size_t>(j - 1)]++] =
            static_cast<std::int32_t>(i + 1);
      }
    return d;
  }

  static free_space_data from_matrix(const bit_matrix& mat) {
    std::vector<std::vector<std::int32_t>> by_col(
        static_cast<std::size_t>(mat.n));
    for (int i = 1; i <= mat.n; ++i)
      for (int j = 1; j <= mat.m; ++j)
        if (mat.at(i, j) == 0)
          by_col[static_cast<std::size_t>(i - 1)].push_back(j);
    return from_column_zeros(mat.n, mat.m, by_col);
  }

  static free_space_data from_curves(const curve& p, const curve& q,
                                     double delta) {
    validate(p);
    validate(q);
    if (p.dim() != q.dim()) throw bad_param("free_space_data: dim mismatch");
    int n = static_cast<int>(p.size()), m = static_cast<int>(q.size());
    std::vector<std::vector<std::int32_t>> by_col(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (dist(p[static_cast<std::size_t>(i)],
                 q[static_cast<std::size_t>(j)]) <= delta)
          by_col[static_cast<std::size_t>(i)].push_back(
              static_cast<std::int32_t>(j + 1));
    return from_column_zeros(n, m, by_col);
  }

  int n_cols() const { return n_; }
  int n_rows() const { return m_; }
  std::size_t zero_count() const { return col_zeros_.size(); }

  zero_list column(int i) const {
    return {col_zeros_.data() + col_off_[static_cast<std::size_t>(i - 1)],
            col_zeros_.data() + col_off_[static_cast<std::size_t>(i)]};
  }
  zero_list row(int j) const {
    return {row_zeros_.data() + row_off_[static_cast<std::size_t>(j - 1)],
            row_zeros_.data() + row_off_[static_cast<std::size_t>(j)]};
  }

  /// Dense rendering (small matrices; for witnesses and reference checks).
  bit_matrix to_matrix() const {
    bit_matrix mat(n_, m_);
    for (int i = 1; i <= n_; ++i)
      for (std::int32_t j : column(i)) mat.set(i, j, 0);
    return mat;
  }

 private:
  int n_ = 0, m_ = 0;
  std::vector<std::int32_t> col_zeros_, row_zeros_;
  std::vector<std::size_t> col_off_, row_off_;
};

/// The query interface every tester runs against. Implementations count one
/// query per column/row request.
class query_oracle {
 public:
  virtual ~query_oracle() = default;
  virtual int n_cols() const = 0;
  virtual int n_rows() const = 0;
  /// Sorted zero positions of column i (1-based). Costs one query.
  virtual zero_list query_column(int i) = 0;
  /// Sorted zero positions of row j (1-based). Costs one query.
  virtual zero_list query_row(int j) = 0;
  /// Total queries answered so far.
  virtual std::uint64_t query_count() const = 0;
};

/// Counting oracle over shared immutable zero storage. Thread-safe: the
/// storage is read-only and the counter is atomic, so independent trials may
/// share one free_space_data through separate oracle instances or even one.
class free_space_oracle final : public query_oracle {
 public:
  explicit free_space_oracle(std::shared_ptr<const free_space_data> data)
      : data_(std::move(data)) {
    if (!data_) throw bad_param("free_space_oracle: null data");
  }
  free_space_oracle(const curve& p, const curve& q, double delta)
      : free_space_oracle(std::make_shared<const free_space_data>(
            free_space_data::from_curves(p, q, delta))) {}
  explicit free_space_oracle(const bit_matrix& mat)
      : free_space_oracle(std::make_shared<const free_space_data>(
            free_space_data::from_matrix(mat))) {}

  int n_cols() const override { return data_->n_cols(); }
  int n_rows() const override { return data_->n_rows(); }

  zero_list query_column(int i) override {
    if (i < 1 || i > data_->n_cols())
      throw index_out_of_range("query_column: index " + std::to_string(i) +
                               " outside [1, " +
                               std::to_string(data_->n_cols()) + "]");
    count_.fetch_add(1, std::memory_order_relaxed);
    return data_->column(i);
  }
  zero_list query_row(int j) override {
    if (j < 1 || j > data_->n_rows())
      throw index_out_of_range("query_row: index " + std::to_string(j) +
                               " outside [1, " +
                               std::to_string(data_->n_rows()) + "]");
    count_.fetch_add(1, std::memory_order_relaxed);
    return data_->row(j);
  }
  std::uint64_t query_count() const override {
    return count_.load(std::memory_order_relaxed);
  }

  const std::shared_ptr<const free_space_data>& data() const { return data_; }

 private:
  std::shared_ptr<const free_space_data> data_;
  std::atomic<std::uint64_t> count_{0};
};

/// Sparsification stride: beta = max(1, floor(eps_prime * delta / (2 *
/// alpha))), where alpha is the longest edge length of the input curves.
inline long long compute_beta(double eps_prime, double delta, double alpha) {
  if (!(eps_prime > 0.0) || !(delta > 0.0) || !(alpha > 0.0))
    throw bad_param("compute_beta: need eps_prime, delta, alpha > 0");
  return std::max(1LL,
                  static_cast<long long>(std::floor(eps_prime * delta /
                                                    (2.0 * alpha))));
}

/// View of every beta-th column and row of an inner oracle: entry (i, j) of
/// the reduced matrix is entry (i*beta, j*beta) of the inner one, with
/// i in [1, floor(n/beta)] and j in [1, floor(m/beta)]. Each reduced query
/// issues exactly one inner query (the inner slice is filtered locally).
/// Returned views live in per-axis scratch buffers: they are invalidated by
/// the next reduced query on the same axis. Not thread-safe.
class reduced_oracle final : public query_oracle {
 public:
  reduced_oracle(query_oracle& inner, long long beta)
      : inner_(inner), beta_(static_cast<int>(beta)) {
    if (beta < 1 || beta > std::min(inner.n_cols(), inner.n_rows()))
      throw bad_param("reduced_oracle: need 1 <= beta <= min(n, m)");
    n_ = inner.n_cols() / beta_;
    m_ = inner.n_rows() / beta_;
  }

  int n_cols() const override { return n_; }
  int n_rows() const override { return m_; }
  long long beta() const { return beta_; }

  zero_list query_column(int i) override {
    if (i < 1 || i > n_)
      throw index_out_of_range("reduced query_column: index out of range");
    return filter(inner_.query_column(i * beta_), m_, col_buf_);
  }
  zero_list query_row(int j) override {
    if (j < 1 || j > m_)
      throw index_out_of_range("reduced query_row: index out of range");
    return filter(inner_.query_row(j * beta_), n_, row_buf_);
  }
  std::uint64_t query_count() const override { return inner_.query_count(); }

 private:
  zero_list filter(zero_list inner_zeros, int limit,
                   std::vector<std::int32_t>& buf) const {
    buf.clear();
    for (std::int32_t v : inner_zeros)
      if (v % beta_ == 0 && v / beta_ <= limit) buf.push_back(v / beta_);
    return {buf.data(), buf.size()};
  }

  query_oracle& inner_;
  int beta_;
  int n_ = 0, m_ = 0;
  std::vector<std::int32_t> col_buf_, row_buf_;
};

}  // namespace fsprobe
