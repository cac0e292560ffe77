#pragma once

// Derivation of a rank-7 bilinear algorithm for 2x2 matrix multiplication
// from an order-3 matrix D and a vector u.
//
//   D       trace -1, determinant 1, not scalar; hence D^3 = id
//   u_perp  the row vector with u_perp * u = 0 and u_perp * D * u = 1
//   M       u * u_perp, nilpotent
//
// X is expanded in (D, M, D^-1 M D, D M D^-1) and Y in
// (D^-1, M, D^-1 M D, D M D^-1); the products of those basis elements only
// produce seven distinct matrices, which are the seven W_k.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "strassen/field.hpp"
#include "strassen/linalg2.hpp"

namespace strassen {

/// A validated order-3 matrix: trace -1, determinant 1, not scalar.
template <ExactScalar S>
class Rotation {
 public:
  const Mat2<S>& matrix() const { return d_; }
  const Mat2<S>& inverse() const { return d_inv_; }
  FieldDescriptor descriptor() const { return descriptor_of(d_(0, 0)); }

 private:
  template <ExactScalar T>
  friend Rotation<T> validate_rotation(const Mat2<T>& d);

  Rotation(Mat2<S> d, Mat2<S> d_inv) : d_(std::move(d)), d_inv_(std::move(d_inv)) {}

  Mat2<S> d_;
  Mat2<S> d_inv_;
};

/// Checks trace, determinant and non-scalarity, then re-verifies
/// D^3 = id, id + D + D^-1 = 0 and trace(D^-1) = -1 exactly.
/// Throws BadTrace, BadDeterminant or ScalarMatrix.
template <ExactScalar T>
Rotation<T> validate_rotation(const Mat2<T>& d) {
  const FieldDescriptor fd = descriptor_of(d(0, 0));
  const T minus_one = from_int<T>(fd, -1);
  if (!(trace(d) == minus_one)) throw Error(ErrorCode::BadTrace, "trace(D) = " + scalar_traits<T>::format(trace(d)) + ", need -1");
  if (!(det(d) == one<T>(fd))) throw Error(ErrorCode::BadDeterminant, "det(D) = " + scalar_traits<T>::format(det(d)) + ", need 1");
  if (is_scalar_matrix(d)) throw Error(ErrorCode::ScalarMatrix, "D is a multiple of the identity");

  Mat2<T> d_inv = inverse(d);
  const Mat2<T> id = identity2<T>(fd);
  if (!(d * d * d == id) || !is_zero(Mat2<T>(id + d + d_inv)) || !(trace(d_inv) == minus_one) ||
      !(d_inv == d * d))
    throw Error(ErrorCode::InternalInvariantViolation, "order-3 identities failed for a valid D");
  return Rotation<T>(d, std::move(d_inv));
}

/// The companion matrix [[0, -1], [1, -1]] of x^2 + x + 1.
template <ExactScalar S>
Rotation<S> default_rotation(const FieldDescriptor& d) {
  require_field<S>(d);
  return validate_rotation(mat2<S>(d, 0, -1, 1, -1));
}

/// Row vector times column vector.
template <class S>
S row_times_col(const RowVec2<S>& r, const ColVec2<S>& c) {
  return r(0) * c(0) + r(1) * c(1);
}

/// A column vector u together with its perp row vector.
template <ExactScalar S>
struct PerpPair {
  ColVec2<S> u;
  RowVec2<S> u_perp;
};

/// Solves u_perp * [u | D u] = [0, 1]. Throws ZeroVector for u = 0 and
/// EigenvectorInput when u and D u are dependent.
template <ExactScalar S>
PerpPair<S> perp_vector(const Rotation<S>& rot, const ColVec2<S>& u) {
  if (is_zero(u(0)) && is_zero(u(1))) throw Error(ErrorCode::ZeroVector, "u must be nonzero");
  const FieldDescriptor fd = rot.descriptor();
  const ColVec2<S> du = rot.matrix() * u;
  // Transposed: [u^T; (D u)^T] * u_perp^T = (0, 1)^T.
  SquareSystem<S, 2> system;
  system.coefficients << u(0), u(1), du(0), du(1);
  system.rhs << zero<S>(fd), one<S>(fd);
  ColVec2<S> solution;
  try {
    solution = solve(system);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularSystem) throw;
    throw Error(ErrorCode::EigenvectorInput, "u is an eigenvector of D");
  }
  PerpPair<S> pp{u, solution.transpose()};
  const S minus_one = from_int<S>(fd, -1);
  const ColVec2<S> d_inv_u = rot.inverse() * u;
  if (!is_zero(row_times_col(pp.u_perp, u)) || !(row_times_col(pp.u_perp, du) == one<S>(fd)) ||
      !(row_times_col(pp.u_perp, d_inv_u) == minus_one))
    throw Error(ErrorCode::InternalInvariantViolation, "perp conditions failed after solve");
  return pp;
}

/// The first of e1, e2, e1 + e2 that is not an eigenvector of D. A
/// non-scalar D has at most two eigenlines, so one of the three qualifies.
template <ExactScalar S>
ColVec2<S> default_u(const Rotation<S>& rot) {
  const FieldDescriptor fd = rot.descriptor();
  const Mat2<S>& d = rot.matrix();
  if (!is_zero(d(1, 0))) return col2<S>(fd, 1, 0);
  if (!is_zero(d(0, 1))) return col2<S>(fd, 0, 1);
  // Diagonal D: distinct eigenvalues, so e1 + e2 is not an eigenvector.
  return col2<S>(fd, 1, 1);
}

/// M, its two D-conjugates, and the two 4-element bases built from them.
template <ExactScalar S>
struct StrassenBasis {
  Mat2<S> d;
  Mat2<S> d_inv;
  Mat2<S> m;
  Mat2<S> m_by_d;      ///< D^-1 M D
  Mat2<S> m_by_d_inv;  ///< D M D^-1

  /// (D, M, D^-1 M D, D M D^-1): the basis X is expanded in.
  std::array<Mat2<S>, 4> basis_x() const { return {d, m, m_by_d, m_by_d_inv}; }
  /// (D^-1, M, D^-1 M D, D M D^-1): the basis Y is expanded in.
  std::array<Mat2<S>, 4> basis_y() const { return {d_inv, m, m_by_d, m_by_d_inv}; }
};

/// Builds M = u u_perp and its conjugates, checking every structural
/// identity the derivation relies on. Any failure is an arithmetic bug and
/// throws InternalInvariantViolation.
template <ExactScalar S>
StrassenBasis<S> build_basis(const Rotation<S>& rot, const PerpPair<S>& pp) {
  const FieldDescriptor fd = rot.descriptor();
  const Mat2<S>& d = rot.matrix();
  const Mat2<S>& d_inv = rot.inverse();
  StrassenBasis<S> b{d, d_inv, pp.u * pp.u_perp, {}, {}};
  b.m_by_d = conjugate(b.m, d);
  b.m_by_d_inv = conjugate(b.m, d_inv);

  auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InternalInvariantViolation, what);
  };
  const S z = zero<S>(fd);
  check(trace(b.m) == z && trace(b.m_by_d) == z && trace(b.m_by_d_inv) == z, "conjugates of M must be traceless");
  check(is_zero(Mat2<S>(b.m * b.m)), "M^2 = 0");
  check(b.m * d * b.m == b.m, "M D M = M");
  check(b.m * d_inv * b.m == Mat2<S>(-b.m), "M D^-1 M = -M");
  const std::array<Mat2<S>, 3> traceless{b.m, b.m_by_d, b.m_by_d_inv};
  check(span_rank<S>(traceless) == 3, "M and its conjugates must be independent");
  const auto bx = b.basis_x();
  const auto by = b.basis_y();
  check(span_rank<S>(bx) == 4, "X basis must span all 2x2 matrices");
  check(span_rank<S>(by) == 4, "Y basis must span all 2x2 matrices");
  return b;
}

/// Coefficients x with X = sum_i x_i * basis_i, by one 4x4 exact solve over
/// the flattened matrices. Throws SingularSystem for a degenerate basis.
template <ExactScalar S>
std::array<S, 4> coordinates(const std::array<Mat2<S>, 4>& basis, const Mat2<S>& x) {
  SquareSystem<S, 4> system;
  for (int j = 0; j < 4; ++j) {
    const auto f = flatten(basis[static_cast<std::size_t>(j)]);
    for (int i = 0; i < 4; ++i) system.coefficients(i, j) = f[static_cast<std::size_t>(i)];
  }
  const auto fx = flatten(x);
  for (int i = 0; i < 4; ++i) system.rhs(i) = fx[static_cast<std::size_t>(i)];
  const Eigen::Matrix<S, 4, 1> sol = solve(system);
  return {sol(0), sol(1), sol(2), sol(3)};
}

/// Linear form coefficients in the standard dual basis, ordered
/// (x11, x12, x21, x22).
template <class S>
using LinearForm = std::array<S, 4>;

template <class S>
S evaluate(const LinearForm<S>& form, const Mat2<S>& x) {
  return form[0] * x(0, 0) + form[1] * x(0, 1) + form[2] * x(1, 0) + form[3] * x(1, 1);
}

/// The four coordinate functionals of `basis` as standard-dual
/// coefficient vectors: obtained by expanding each matrix unit and
/// transposing.
template <ExactScalar S>
std::array<LinearForm<S>, 4> coordinate_forms(const std::array<Mat2<S>, 4>& basis) {
  const FieldDescriptor fd = descriptor_of(basis[0](0, 0));
  std::array<LinearForm<S>, 4> forms;
  for (int unit = 0; unit < 4; ++unit) {
    const auto c = coordinates(basis, unit2<S>(fd, unit));
    for (std::size_t i = 0; i < 4; ++i) forms[i][static_cast<std::size_t>(unit)] = c[i];
  }
  return forms;
}

template <class S>
struct BilinearTerm {
  LinearForm<S> u;
  LinearForm<S> v;
  Mat2<S> w;

  friend bool operator==(const BilinearTerm& a, const BilinearTerm& b) {
    return a.u == b.u && a.v == b.v && a.w == b.w;
  }
};

/// XY = sum_k u_k(X) v_k(Y) W_k, when verified. Rank is the term count;
/// anything other than 7 is carried but refused by the engine.
template <class S>
struct BilinearDecomposition {
  FieldDescriptor descriptor = FieldDescriptor::rational();
  std::vector<BilinearTerm<S>> terms;

  std::size_t rank() const { return terms.size(); }

  friend bool operator==(const BilinearDecomposition& a, const BilinearDecomposition& b) {
    return a.descriptor == b.descriptor && a.terms == b.terms;
  }
};

namespace detail {

template <class S>
LinearForm<S> combine(const LinearForm<S>& a, const LinearForm<S>& b, int sign) {
  LinearForm<S> r = a;
  for (std::size_t i = 0; i < 4; ++i) r[i] = sign > 0 ? a[i] + b[i] : a[i] - b[i];
  return r;
}

}  // namespace detail

/// The seven matrices the basis products reduce to, in term order:
/// id, M D^-1, D^-1 M, D M D, D M, M D, D^-1 M D^-1.
template <ExactScalar S>
std::array<Mat2<S>, 7> product_matrices(const StrassenBasis<S>& b) {
  const FieldDescriptor fd = descriptor_of(b.d(0, 0));
  const Mat2<S>& d = b.d;
  const Mat2<S>& di = b.d_inv;
  const Mat2<S>& m = b.m;
  return {identity2<S>(fd), m * di, di * m, d * m * d, d * m, m * d, di * m * di};
}

inline constexpr std::array<const char*, 7> product_labels{
    "id", "M D^-1", "D^-1 M", "D M D", "D M", "M D", "D^-1 M D^-1"};

inline constexpr std::array<const char*, 4> basis_x_labels{"D", "M", "D^-1 M D", "D M D^-1"};
inline constexpr std::array<const char*, 4> basis_y_labels{"D^-1", "M", "D^-1 M D", "D M D^-1"};

/// One cell of the product table basis_x[row] * basis_y[col]: either zero
/// (product < 0) or sign * product_matrices()[product].
struct TableCell {
  int product;
  int sign;
};

inline constexpr std::array<std::array<TableCell, 4>, 4> multiplication_table{{
    {{{0, +1}, {4, +1}, {5, +1}, {6, +1}}},
    {{{1, +1}, {-1, 0}, {5, -1}, {1, +1}}},
    {{{2, +1}, {2, +1}, {-1, 0}, {6, -1}}},
    {{{3, +1}, {4, -1}, {3, +1}, {-1, 0}}},
}};

/// Groups the 16 basis products into seven terms:
///
///   u_k          v_k          W_k
///   x1           y1           id
///   x2           y1 + y4      M D^-1
///   x3           y1 + y2      D^-1 M
///   x4           y1 + y3      D M D
///   x1 - x4      y2           D M
///   x1 - x2      y3           M D
///   x1 - x3      y4           D^-1 M D^-1
template <ExactScalar S>
BilinearDecomposition<S> derive_decomposition(const Rotation<S>& rot, const PerpPair<S>& pp) {
  using detail::combine;
  const StrassenBasis<S> b = build_basis(rot, pp);
  const auto x = coordinate_forms(b.basis_x());
  const auto y = coordinate_forms(b.basis_y());
  const auto w = product_matrices(b);

  BilinearDecomposition<S> dec;
  dec.descriptor = rot.descriptor();
  dec.terms = {
      {x[0], y[0], w[0]},
      {x[1], combine(y[0], y[3], +1), w[1]},
      {x[2], combine(y[0], y[1], +1), w[2]},
      {x[3], combine(y[0], y[2], +1), w[3]},
      {combine(x[0], x[3], -1), y[1], w[4]},
      {combine(x[0], x[1], -1), y[2], w[5]},
      {combine(x[0], x[2], -1), y[3], w[6]},
  };
  return dec;
}

/// Everything a derivation run produces, for reporting.
template <ExactScalar S>
struct Derivation {
  Rotation<S> rotation;
  PerpPair<S> perp;
  StrassenBasis<S> basis;
  BilinearDecomposition<S> decomposition;
};

/// Convenience pipeline: validated D (companion matrix when absent),
/// u (default_u when absent), basis and decomposition.
template <ExactScalar S>
Derivation<S> derive(const FieldDescriptor& fd, const std::optional<Mat2<S>>& d,
                     const std::optional<ColVec2<S>>& u) {
  require_field<S>(fd);
  Rotation<S> rot = d ? validate_rotation(*d) : default_rotation<S>(fd);
  if (!(rot.descriptor() == fd)) throw Error(ErrorCode::DescriptorMismatch, "D is not over " + fd.to_string());
  PerpPair<S> pp = perp_vector(rot, u ? *u : default_u(rot));
  StrassenBasis<S> basis = build_basis(rot, pp);
  BilinearDecomposition<S> dec = derive_decomposition(rot, pp);
  return {std::move(rot), std::move(pp), std::move(basis), std::move(dec)};
}

}  // namespace strassen
