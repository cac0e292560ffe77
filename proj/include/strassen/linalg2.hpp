#pragma once

// Exact 2x2 linear algebra over the scalars of field.hpp, plus a small
// Gauss-Jordan solver and rank computation. Matrix arithmetic itself is
// Eigen's; this header adds the predicates and exact solves Eigen's
// floating-point decompositions cannot provide.

#include <array>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "strassen/field.hpp"

namespace strassen {

template <class S>
using Mat2 = Eigen::Matrix<S, 2, 2>;
template <class S>
using ColVec2 = Eigen::Matrix<S, 2, 1>;
template <class S>
using RowVec2 = Eigen::Matrix<S, 1, 2>;
template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// Row-major (a11, a12, a21, a22) entries.
template <class S>
using Flat4 = std::array<S, 4>;

template <FieldScalar S>
Mat2<S> mat2(const FieldDescriptor& d, long long a11, long long a12, long long a21, long long a22) {
  Mat2<S> m;
  m << from_int<S>(d, a11), from_int<S>(d, a12), from_int<S>(d, a21), from_int<S>(d, a22);
  return m;
}

template <FieldScalar S>
Mat2<S> identity2(const FieldDescriptor& d) {
  return mat2<S>(d, 1, 0, 0, 1);
}

template <FieldScalar S>
Mat2<S> zero2(const FieldDescriptor& d) {
  return mat2<S>(d, 0, 0, 0, 0);
}

template <FieldScalar S>
ColVec2<S> col2(const FieldDescriptor& d, long long a, long long b) {
  return ColVec2<S>(from_int<S>(d, a), from_int<S>(d, b));
}

/// The standard matrix unit e_ij with i, j in {0, 1}; `index` = 2i + j.
template <FieldScalar S>
Mat2<S> unit2(const FieldDescriptor& d, int index) {
  Mat2<S> m = zero2<S>(d);
  m(index / 2, index % 2) = one<S>(d);
  return m;
}

template <class S>
Flat4<S> flatten(const Mat2<S>& a) {
  return {a(0, 0), a(0, 1), a(1, 0), a(1, 1)};
}

template <class S>
Mat2<S> unflatten(std::span<const S, 4> f) {
  Mat2<S> m;
  m << f[0], f[1], f[2], f[3];
  return m;
}

template <class S>
S trace(const Mat2<S>& a) {
  return a(0, 0) + a(1, 1);
}

template <class S>
S det(const Mat2<S>& a) {
  return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
}

template <ExactScalar S>
bool is_zero(const Mat2<S>& a) {
  return is_zero(a(0, 0)) && is_zero(a(0, 1)) && is_zero(a(1, 0)) && is_zero(a(1, 1));
}

/// True when `a` equals c * id for some scalar c.
template <ExactScalar S>
bool is_scalar_matrix(const Mat2<S>& a) {
  return is_zero(a(0, 1)) && is_zero(a(1, 0)) && a(0, 0) == a(1, 1);
}

/// Adjugate over determinant. Throws SingularMatrix when det(a) = 0.
template <ExactScalar S>
Mat2<S> inverse(const Mat2<S>& a) {
  const S d = det(a);
  if (is_zero(d)) throw Error(ErrorCode::SingularMatrix, "determinant is zero");
  const S inv_d = d.inverse();
  Mat2<S> r;
  r << a(1, 1) * inv_d, -a(0, 1) * inv_d, -a(1, 0) * inv_d, a(0, 0) * inv_d;
  const FieldDescriptor fd = descriptor_of(d);
  if (!(a * r == identity2<S>(fd)))
    throw Error(ErrorCode::InternalInvariantViolation, "adjugate inverse failed to invert");
  return r;
}

/// P^-1 * A * P.
template <ExactScalar S>
Mat2<S> conjugate(const Mat2<S>& a, const Mat2<S>& p) {
  return inverse(p) * a * p;
}

// ---------------------------------------------------------------------------

/// A square linear system coefficients * x = rhs.
template <class S, int N = Eigen::Dynamic>
struct SquareSystem {
  Eigen::Matrix<S, N, N> coefficients;
  Eigen::Matrix<S, N, 1> rhs;
};

/// Gauss-Jordan elimination taking the first nonzero pivot in each column.
/// Throws SingularSystem when the solution is not unique.
template <ExactScalar S, int N>
Eigen::Matrix<S, N, 1> solve(const SquareSystem<S, N>& system) {
  const Eigen::Index n = system.coefficients.rows();
  if (system.coefficients.cols() != n || system.rhs.rows() != n)
    throw Error(ErrorCode::DimensionMismatch, "system is not square");
  Eigen::Matrix<S, N, N> a = system.coefficients;
  Eigen::Matrix<S, N, 1> b = system.rhs;
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && is_zero(a(pivot, col))) ++pivot;
    if (pivot == n) throw Error(ErrorCode::SingularSystem, "no pivot in column " + std::to_string(col));
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(b(pivot), b(col));
    }
    const S inv = a(col, col).inverse();
    a.row(col) *= inv;
    b(col) *= inv;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col || is_zero(a(r, col))) continue;
      const S f = a(r, col);
      a.row(r) -= f * a.row(col);
      b(r) -= f * b(col);
    }
  }
  return b;
}

/// Row rank by forward elimination.
template <ExactScalar S>
Eigen::Index rank(MatX<S> a) {
  Eigen::Index rank = 0;
  for (Eigen::Index col = 0; col < a.cols() && rank < a.rows(); ++col) {
    Eigen::Index pivot = rank;
    while (pivot < a.rows() && is_zero(a(pivot, col))) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != rank) a.row(pivot).swap(a.row(rank));
    const S inv = a(rank, col).inverse();
    for (Eigen::Index r = rank + 1; r < a.rows(); ++r) {
      if (is_zero(a(r, col))) continue;
      const S f = a(r, col) * inv;
      a.row(r) -= f * a.row(rank);
    }
    ++rank;
  }
  return rank;
}

/// Rank of the matrices' row-major flattenings stacked as rows.
template <ExactScalar S>
Eigen::Index span_rank(std::span<const Mat2<S>> mats) {
  MatX<S> rows(static_cast<Eigen::Index>(mats.size()), 4);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const auto f = flatten(mats[i]);
    for (int j = 0; j < 4; ++j) rows(static_cast<Eigen::Index>(i), j) = f[static_cast<std::size_t>(j)];
  }
  return rank(rows);
}

}  // namespace strassen
