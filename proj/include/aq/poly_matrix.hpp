#pragma once

#include "aq/polynomial.hpp"

#include <vector>

namespace aq {

/// Dense matrix of polynomials sharing one chart (anchor matrices, Ω, π).
template <class Scalar>
class PolyMatrix {
public:
  using Poly = Polynomial<Scalar>;

  PolyMatrix(ChartPtr chart, std::size_t rows, std::size_t cols)
      : chart_(std::move(chart)), rows_(rows), cols_(cols), data_(rows * cols, Poly(chart_)) {}

  static PolyMatrix identity(ChartPtr chart, std::size_t n) {
    PolyMatrix m(chart, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Poly::constant(chart, Scalar(1));
    return m;
  }

  const ChartPtr& chart() const { return chart_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Poly& operator()(std::size_t i, std::size_t j) { return data_.at(i * cols_ + j); }
  const Poly& operator()(std::size_t i, std::size_t j) const { return data_.at(i * cols_ + j); }

  bool is_zero() const {
    for (const auto& p : data_)
      if (!p.is_zero()) return false;
    return true;
  }
  bool is_constant() const {
    for (const auto& p : data_)
      if (!p.is_constant()) return false;
    return true;
  }
  bool is_antisymmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (!((*this)(i, j) + (*this)(j, i)).is_zero()) return false;
    return true;
  }

  PolyMatrix transpose() const {
    PolyMatrix t(chart_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) {
    a.require_shape(b, "matrix +");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) {
    a.require_shape(b, "matrix -");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    require_same_chart(a.chart_, b.chart_, "matrix *");
    if (a.cols_ != b.rows_) throw ChartMismatch("matrix *: inner dimensions differ");
    PolyMatrix r(a.chart_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
      }
    return r;
  }
  friend PolyMatrix operator*(PolyMatrix a, const Scalar& s) {
    for (auto& p : a.data_) p *= s;
    return a;
  }
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Laplace expansion along the first row, skipping zero entries.
  Poly determinant() const {
    if (rows_ != cols_) throw ChartMismatch("determinant: matrix not square");
    std::vector<std::size_t> rows(rows_), cols(cols_);
    for (std::size_t k = 0; k < rows_; ++k) rows[k] = cols[k] = k;
    return minor_det(rows, cols);
  }

  /// Exact inverse; requires the determinant to be a nonzero constant.
  PolyMatrix inverse() const {
    const Poly det = determinant();
    if (det.is_zero()) throw PreconditionError("inverse: matrix is singular");
    if (!det.is_constant())
      throw PreconditionError("inverse: determinant " + to_string(det) + " is not a nonzero constant");
    const Scalar inv_det = Scalar(1) / det.constant_term();
    PolyMatrix r(chart_, rows_, cols_);
    std::vector<std::size_t> all(rows_);
    for (std::size_t k = 0; k < rows_; ++k) all[k] = k;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        std::vector<std::size_t> rs, cs;
        for (auto k : all)
          if (k != j) rs.push_back(k);
        for (auto k : all)
          if (k != i) cs.push_back(k);
        Poly cof = minor_det(rs, cs);
        if ((i + j) % 2 == 1) cof = -cof;
        r(i, j) = cof * inv_det;
      }
    return r;
  }

  /// Entry-wise evaluation at a point.
  template <class T>
  std::vector<std::vector<T>> evaluate(std::span<const T> point) const {
    std::vector<std::vector<T>> out(rows_, std::vector<T>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j).evaluate(point);
    return out;
  }

private:
  Poly minor_det(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    if (rs.empty()) return Poly::constant(chart_, Scalar(1));
    if (rs.size() == 1) return (*this)(rs[0], cs[0]);
    Poly acc(chart_);
    const std::vector<std::size_t> sub_rows(rs.begin() + 1, rs.end());
    for (std::size_t c = 0; c < cs.size(); ++c) {
      const Poly& a = (*this)(rs[0], cs[c]);
      if (a.is_zero()) continue;
      std::vector<std::size_t> sub_cols;
      for (std::size_t k = 0; k < cs.size(); ++k)
        if (k != c) sub_cols.push_back(cs[k]);
      Poly term = a * minor_det(sub_rows, sub_cols);
      if (c % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
    return acc;
  }

  void require_shape(const PolyMatrix& o, const char* what) const {
    require_same_chart(chart_, o.chart_, what);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ChartMismatch(std::string(what) + ": shapes differ");
  }

  ChartPtr chart_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Poly> data_;
};

} // namespace aq
