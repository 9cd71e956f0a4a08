#pragma once

#include "aq/chart.hpp"
#include "aq/rational.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace aq {

template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using RatMatrix = Matrix<Rational>;
using RatVector = Vector<Rational>;

/// Rank by exact Gaussian elimination.
inline std::size_t exact_rank(RatMatrix m) {
  std::size_t rank = 0;
  for (Eigen::Index col = 0; col < m.cols() && static_cast<Eigen::Index>(rank) < m.rows(); ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = rank; r < m.rows(); ++r)
      if (!m(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(rank));
    for (Eigen::Index r = rank + 1; r < m.rows(); ++r) {
      if (m(r, col).is_zero()) continue;
      const Rational factor = m(r, col) / m(rank, col);
      for (Eigen::Index c = col; c < m.cols(); ++c) m(r, c) -= factor * m(rank, c);
    }
    ++rank;
  }
  return rank;
}

inline Rational exact_determinant(RatMatrix m) {
  if (m.rows() != m.cols()) throw ChartMismatch("determinant: matrix not square");
  Rational det(1);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = col; r < m.rows(); ++r)
      if (!m(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Rational(0);
    if (pivot != col) {
      m.row(pivot).swap(m.row(col));
      det = -det;
    }
    det *= m(col, col);
    for (Eigen::Index r = col + 1; r < m.rows(); ++r) {
      if (m(r, col).is_zero()) continue;
      const Rational factor = m(r, col) / m(col, col);
      for (Eigen::Index c = col; c < m.cols(); ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

/// Gauss-Jordan inverse; throws when singular.
inline RatMatrix exact_inverse(RatMatrix m) {
  if (m.rows() != m.cols()) throw ChartMismatch("inverse: matrix not square");
  const Eigen::Index n = m.rows();
  RatMatrix inv = RatMatrix::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = col; r < n; ++r)
      if (!m(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw PreconditionError("inverse: matrix is singular");
    m.row(pivot).swap(m.row(col));
    inv.row(pivot).swap(inv.row(col));
    const Rational p = m(col, col);
    m.row(col) /= p;
    inv.row(col) /= p;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col || m(r, col).is_zero()) continue;
      const Rational factor = m(r, col);
      m.row(r) -= factor * m.row(col);
      inv.row(r) -= factor * inv.row(col);
    }
  }
  return inv;
}

/// Sylvester's criterion on a symmetric matrix.
inline bool is_positive_definite(const RatMatrix& m) {
  if (m != m.transpose()) return false;
  for (Eigen::Index k = 1; k <= m.rows(); ++k)
    if (exact_determinant(m.topLeftCorner(k, k)) <= 0) return false;
  return true;
}

/// All principal minors nonnegative (symmetric input; intended for small sizes).
inline bool is_positive_semidefinite(const RatMatrix& m) {
  if (m != m.transpose()) return false;
  const Eigen::Index n = m.rows();
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < n; ++k)
      if (mask & (1ul << k)) idx.push_back(k);
    RatMatrix sub(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = m(idx[a], idx[b]);
    if (exact_determinant(sub) < 0) return false;
  }
  return true;
}

inline Matrix<double> to_double(const RatMatrix& m) {
  return m.unaryExpr([](const Rational& r) { return r.convert_to<double>(); });
}

} // namespace aq
