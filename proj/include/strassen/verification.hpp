#pragma once

// Checkers that re-establish the identities behind a decomposition by
// direct evaluation, independently of how the decomposition was derived.
//
// The bilinear identity XY = sum_k u_k(X) v_k(Y) W_k is certified on the 16
// pairs of matrix units: both sides are bilinear in (X, Y), so agreement on
// a basis pair set is agreement everywhere. verify_exhaustive_gf gives a
// second route over small prime fields that does not rely on bilinearity.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "strassen/construction.hpp"
#include "strassen/field.hpp"
#include "strassen/linalg2.hpp"

namespace strassen {

inline constexpr std::array<const char*, 4> unit_labels{"e11", "e12", "e21", "e22"};

template <class S>
struct Counterexample {
  std::string description;
  long long x_index = -1;  ///< unit index (0..3) or matrix index for exhaustive runs
  long long y_index = -1;
  long long z_index = -1;  ///< trilinear checks only
  std::variant<std::monostate, S, Mat2<S>> expected;
  std::variant<std::monostate, S, Mat2<S>> actual;
};

template <class S>
struct VerificationReport {
  std::string name;
  std::uint64_t checks_run = 0;
  std::optional<Counterexample<S>> first_failure;

  bool passed() const { return !first_failure.has_value(); }
};

/// u(X) v(Y) summed against W: the right-hand side of the bilinear identity.
template <class S>
Mat2<S> evaluate(const BilinearDecomposition<S>& dec, const Mat2<S>& x, const Mat2<S>& y) {
  Mat2<S> acc = Mat2<S>::Constant(zero<S>(dec.descriptor));
  for (const auto& t : dec.terms) acc += (evaluate(t.u, x) * evaluate(t.v, y)) * t.w;
  return acc;
}

template <ExactScalar S>
VerificationReport<S> verify_bilinear_identity(const BilinearDecomposition<S>& dec) {
  VerificationReport<S> report{"bilinear identity", 0, std::nullopt};
  const FieldDescriptor& fd = dec.descriptor;
  for (int xi = 0; xi < 4; ++xi) {
    for (int yi = 0; yi < 4; ++yi) {
      const Mat2<S> x = unit2<S>(fd, xi);
      const Mat2<S> y = unit2<S>(fd, yi);
      const Mat2<S> expected = x * y;
      const Mat2<S> actual = evaluate(dec, x, y);
      ++report.checks_run;
      if (!(expected == actual)) {
        report.first_failure = Counterexample<S>{
            std::string("XY != sum at X = ") + unit_labels[xi] + ", Y = " + unit_labels[yi], xi, yi, -1, expected,
            actual};
        return report;
      }
    }
  }
  return report;
}

inline constexpr std::uint64_t default_exhaustive_budget = 10'000'000;

/// Brute force over all p^4 x p^4 pairs of matrices over GF(p). Matrices are
/// indexed by their row-major entries read as a base-p number (a11 most
/// significant). Throws FieldTooLarge when p^8 exceeds `budget`, and
/// DescriptorMismatch for non-prime fields.
VerificationReport<Zp> verify_exhaustive_gf(const BilinearDecomposition<Zp>& dec,
                                           std::uint64_t budget = default_exhaustive_budget);

template <ExactScalar S>
  requires(!std::is_same_v<S, Zp>)
VerificationReport<S> verify_exhaustive_gf(const BilinearDecomposition<S>& dec,
                                           std::uint64_t = default_exhaustive_budget) {
  throw Error(ErrorCode::DescriptorMismatch, "exhaustive verification needs a prime field, got " +
                                                 dec.descriptor.to_string());
}

/// Matrix for `index` in the exhaustive enumeration order.
Mat2<Zp> exhaustive_matrix(std::uint64_t p, std::uint64_t index);

/// Compares each basis_x[i] * basis_y[j] with its simplified table entry.
template <ExactScalar S>
VerificationReport<S> verify_multiplication_table(const StrassenBasis<S>& basis) {
  VerificationReport<S> report{"multiplication table", 0, std::nullopt};
  const FieldDescriptor fd = descriptor_of(basis.d(0, 0));
  const auto bx = basis.basis_x();
  const auto by = basis.basis_y();
  const auto w = product_matrices(basis);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const TableCell cell = multiplication_table[i][j];
      const Mat2<S> actual = bx[i] * by[j];
      Mat2<S> expected = zero2<S>(fd);
      std::string label = "0";
      if (cell.product >= 0) {
        expected = cell.sign > 0 ? w[cell.product] : Mat2<S>(-w[cell.product]);
        label = std::string(cell.sign > 0 ? "" : "-") + product_labels[cell.product];
      }
      ++report.checks_run;
      if (!(expected == actual)) {
        report.first_failure = Counterexample<S>{std::string(basis_x_labels[i]) + " * " + basis_y_labels[j] +
                                                     " != " + label,
                                                 i, j, -1, expected, actual};
        return report;
      }
    }
  }
  return report;
}

/// tr(XYZ) = sum_k u_k(X) v_k(Y) tr(W_k Z) on all 64 unit triples.
template <ExactScalar S>
VerificationReport<S> verify_trilinear(const BilinearDecomposition<S>& dec) {
  VerificationReport<S> report{"trilinear identity", 0, std::nullopt};
  const FieldDescriptor& fd = dec.descriptor;
  for (int xi = 0; xi < 4; ++xi) {
    for (int yi = 0; yi < 4; ++yi) {
      for (int zi = 0; zi < 4; ++zi) {
        const Mat2<S> x = unit2<S>(fd, xi);
        const Mat2<S> y = unit2<S>(fd, yi);
        const Mat2<S> z = unit2<S>(fd, zi);
        const S expected = trace(Mat2<S>(x * y * z));
        S actual = zero<S>(fd);
        for (const auto& t : dec.terms)
          actual += evaluate(t.u, x) * evaluate(t.v, y) * trace(Mat2<S>(t.w * z));
        ++report.checks_run;
        if (!(expected == actual)) {
          report.first_failure = Counterexample<S>{std::string("tr(XYZ) != sum at X = ") + unit_labels[xi] +
                                                       ", Y = " + unit_labels[yi] + ", Z = " + unit_labels[zi],
                                                   xi, yi, zi, expected, actual};
          return report;
        }
      }
    }
  }
  return report;
}

/// True iff there are exactly seven W_k and no two are linearly dependent.
template <ExactScalar S>
bool count_seven_distinct(const BilinearDecomposition<S>& dec) {
  if (dec.rank() != 7) return false;
  for (std::size_t i = 0; i < dec.terms.size(); ++i) {
    for (std::size_t j = i + 1; j < dec.terms.size(); ++j) {
      const std::array<Mat2<S>, 2> pair{dec.terms[i].w, dec.terms[j].w};
      if (span_rank<S>(pair) < 2) return false;
    }
  }
  return true;
}

/// Exact checks of the structural identities behind the derivation for one
/// (D, u) choice: order-3 identities of D, perp-vector identities, the
/// nilpotent relations of M, independence of the conjugates, and the
/// trace form of the first coordinate.
template <ExactScalar S>
VerificationReport<S> verify_structure(const Rotation<S>& rot, const PerpPair<S>& pp) {
  VerificationReport<S> report{"structural identities", 0, std::nullopt};
  const FieldDescriptor fd = rot.descriptor();
  const Mat2<S>& d = rot.matrix();
  const Mat2<S>& di = rot.inverse();
  const Mat2<S> id = identity2<S>(fd);
  const Mat2<S> zm = zero2<S>(fd);
  const S zero_s = zero<S>(fd);
  const S one_s = one<S>(fd);
  const S minus_one = from_int<S>(fd, -1);
  const ColVec2<S>& u = pp.u;
  const RowVec2<S>& up = pp.u_perp;
  const ColVec2<S> du = d * u;

  auto check_mat = [&](const char* what, const Mat2<S>& expected, const Mat2<S>& actual) {
    if (report.first_failure) return;
    ++report.checks_run;
    if (!(expected == actual)) report.first_failure = Counterexample<S>{what, -1, -1, -1, expected, actual};
  };
  auto check_scalar = [&](const char* what, const S& expected, const S& actual) {
    if (report.first_failure) return;
    ++report.checks_run;
    if (!(expected == actual)) report.first_failure = Counterexample<S>{what, -1, -1, -1, expected, actual};
  };
  auto check_true = [&](const char* what, bool ok) {
    if (report.first_failure) return;
    ++report.checks_run;
    if (!ok) report.first_failure = Counterexample<S>{what, -1, -1, -1, {}, {}};
  };

  check_scalar("trace(D) = -1", minus_one, trace(d));
  check_scalar("det(D) = 1", one_s, det(d));
  check_true("D is not scalar", !is_scalar_matrix(d));
  check_mat("D^3 = id", id, d * d * d);
  check_mat("id + D + D^-1 = 0", zm, id + d + di);
  check_scalar("trace(D^-1) = -1", minus_one, trace(di));
  check_mat("D D^-1 = id", id, d * di);

  check_scalar("u_perp u = 0", zero_s, row_times_col(up, u));
  check_scalar("u_perp D u = 1", one_s, row_times_col(up, du));
  // u_perp D^-1 must satisfy the defining conditions of (D u)_perp.
  const RowVec2<S> up_di = up * di;
  const ColVec2<S> d_du = d * du;
  check_scalar("(u_perp D^-1)(D u) = 0", zero_s, row_times_col(up_di, du));
  check_scalar("(u_perp D^-1) D (D u) = 1", one_s, row_times_col(up_di, d_du));
  const ColVec2<S> di_u = di * u;
  check_scalar("u_perp D^-1 u = -1", minus_one, row_times_col(up, di_u));

  const Mat2<S> m = u * up;
  const Mat2<S> m1 = di * m * d;
  const Mat2<S> m2 = d * m * di;
  check_scalar("trace(M) = 0", zero_s, trace(m));
  check_mat("M^2 = 0", zm, m * m);
  check_mat("M D M = M", m, m * d * m);
  check_mat("M D^-1 M = -M", Mat2<S>(-m), m * di * m);
  check_scalar("trace(D^-1 M D) = 0", zero_s, trace(m1));
  check_scalar("trace(D M D^-1) = 0", zero_s, trace(m2));

  Mat2<S> u_du;
  u_du << u(0), du(0), u(1), du(1);
  check_true("u and D u are independent", !is_zero(det(u_du)));
  const std::array<Mat2<S>, 4> outer{m, Mat2<S>(m * di), Mat2<S>(d * m), m2};
  check_true("M, M D^-1, D M, D M D^-1 span all 2x2 matrices", span_rank<S>(outer) == 4);
  check_mat("M + M D^-1 + D M + D M D^-1 = (id + D) M (id + D^-1)", (id + d) * m * (id + di),
            outer[0] + outer[1] + outer[2] + outer[3]);
  check_mat("(id + D) M (id + D^-1) = D^-1 M D", m1, (id + d) * m * (id + di));
  const std::array<Mat2<S>, 3> traceless{m, m1, m2};
  check_true("M, D^-1 M D, D M D^-1 are independent", span_rank<S>(traceless) == 3);
  const std::array<Mat2<S>, 4> bx{d, m, m1, m2};
  const std::array<Mat2<S>, 4> by{di, m, m1, m2};
  check_true("(D, M, D^-1 M D, D M D^-1) is a basis", span_rank<S>(bx) == 4);
  check_true("(D^-1, M, D^-1 M D, D M D^-1) is a basis", span_rank<S>(by) == 4);
  if (report.first_failure) return report;

  // First coordinate against trace, on each unit (the forms are linear).
  const auto x_forms = coordinate_forms(bx);
  const auto y_forms = coordinate_forms(by);
  for (int unit = 0; unit < 4; ++unit) {
    const Mat2<S> e = unit2<S>(fd, unit);
    check_scalar("x1 = -trace(X)", S(-trace(e)), evaluate(x_forms[0], e));
    check_scalar("y1 = -trace(Y)", S(-trace(e)), evaluate(y_forms[0], e));
  }
  return report;
}

}  // namespace strassen
