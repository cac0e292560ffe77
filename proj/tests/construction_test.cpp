#include <random>

#include <gtest/gtest.h>

#include "strassen/construction.hpp"
#include "support/oracle.hpp"

using namespace strassen;

namespace {

const FieldDescriptor Q = FieldDescriptor::rational();

Mat2<Rational> q2(long long a, long long b, long long c, long long d) { return mat2<Rational>(Q, a, b, c, d); }

LinearForm<Rational> form(long long a, long long b, long long c, long long d) {
  return {Rational(a), Rational(b), Rational(c), Rational(d)};
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InternalInvariantViolation;
}

}  // namespace

TEST(Rotation, DefaultOverFields) {
  EXPECT_EQ(default_rotation<Rational>(Q).matrix(), q2(0, -1, 1, -1));
  const auto f3 = FieldDescriptor::prime_field(3);
  EXPECT_EQ(default_rotation<Zp>(f3).matrix(), mat2<Zp>(f3, 0, 2, 1, 2));
  const auto f2 = FieldDescriptor::prime_field(2);
  EXPECT_EQ(default_rotation<Zp>(f2).matrix(), mat2<Zp>(f2, 0, 1, 1, 1));
  EXPECT_EQ(default_rotation<Rational>(Q).inverse(), q2(-1, 1, -1, 0));
}

TEST(Rotation, Validation) {
  EXPECT_NO_THROW((void)validate_rotation(q2(0, -1, 1, -1)));
  EXPECT_EQ(code_of([] { (void)validate_rotation(identity2<Rational>(Q)); }), ErrorCode::BadTrace);
  EXPECT_EQ(code_of([] { (void)validate_rotation(q2(0, 0, 0, -1)); }), ErrorCode::BadDeterminant);

  // Over GF(3), (x - 1)^2 = x^2 - 2x + 1 = x^2 + x + 1, so id has the right
  // trace and determinant and must be caught as scalar.
  const auto f3 = FieldDescriptor::prime_field(3);
  EXPECT_EQ(Zp(-2, 3), Zp(1, 3));
  const Mat2<Zp> id3 = identity2<Zp>(f3);
  EXPECT_EQ(trace(id3), Zp(-1, 3));
  EXPECT_EQ(det(id3), Zp(1, 3));
  EXPECT_EQ(code_of([&] { (void)validate_rotation(id3); }), ErrorCode::ScalarMatrix);
}

TEST(PerpVector, Examples) {
  const auto rot = default_rotation<Rational>(Q);
  const auto p1 = perp_vector(rot, col2<Rational>(Q, 1, 0));
  EXPECT_EQ(p1.u_perp, RowVec2<Rational>(Rational(0), Rational(1)));
  const auto p2 = perp_vector(rot, col2<Rational>(Q, 0, 1));
  EXPECT_EQ(p2.u_perp, RowVec2<Rational>(Rational(-1), Rational(0)));
  EXPECT_EQ(code_of([&] { (void)perp_vector(rot, col2<Rational>(Q, 0, 0)); }), ErrorCode::ZeroVector);
}

TEST(PerpVector, EigenvectorOverGF7) {
  const auto f7 = FieldDescriptor::prime_field(7);
  const auto rot = default_rotation<Zp>(f7);
  const ColVec2<Zp> u = col2<Zp>(f7, 1, 5);
  // 2 is a root of x^2 + x + 1 mod 7 and D (1, 5) = 2 (1, 5).
  EXPECT_EQ(Zp(4 + 2 + 1, 7), Zp(0, 7));
  EXPECT_EQ(ColVec2<Zp>(rot.matrix() * u), ColVec2<Zp>(Zp(2, 7) * u));
  EXPECT_EQ(code_of([&] { (void)perp_vector(rot, u); }), ErrorCode::EigenvectorInput);
}

TEST(DefaultU, FallsBackPastEigenvectors) {
  const auto rot = default_rotation<Rational>(Q);
  EXPECT_EQ(default_u(rot), col2<Rational>(Q, 1, 0));
  // Lower triangular: e1 is an eigenvector.
  const auto f7 = FieldDescriptor::prime_field(7);
  const auto tri = validate_rotation(mat2<Zp>(f7, 2, 1, 0, 4));
  EXPECT_EQ(default_u(tri), col2<Zp>(f7, 0, 1));
  // Diagonal over GF(7) with the two roots 2 and 4 of x^2 + x + 1: both
  // standard vectors are eigenvectors.
  const auto diag = validate_rotation(mat2<Zp>(f7, 2, 0, 0, 4));
  const ColVec2<Zp> u = default_u(diag);
  EXPECT_EQ(u, col2<Zp>(f7, 1, 1));
  EXPECT_NO_THROW((void)perp_vector(diag, u));
}

TEST(Basis, CompanionMatrixExample) {
  const auto rot = default_rotation<Rational>(Q);
  const auto pp = perp_vector(rot, col2<Rational>(Q, 1, 0));
  const auto b = build_basis(rot, pp);
  EXPECT_EQ(b.m, q2(0, 1, 0, 0));
  EXPECT_EQ(b.m_by_d, q2(-1, 1, -1, 1));
  EXPECT_EQ(b.m_by_d_inv, q2(0, 0, -1, 0));
  EXPECT_EQ(trace(b.m), Rational(0));
  EXPECT_EQ(trace(b.m_by_d), Rational(0));
  EXPECT_EQ(trace(b.m_by_d_inv), Rational(0));
}

TEST(Coordinates, Examples) {
  const auto rot = default_rotation<Rational>(Q);
  const auto b = build_basis(rot, perp_vector(rot, default_u(rot)));
  const auto bx = b.basis_x();
  EXPECT_EQ(coordinates(bx, b.d), (std::array<Rational, 4>{1, 0, 0, 0}));
  EXPECT_EQ(coordinates(bx, b.m), (std::array<Rational, 4>{0, 1, 0, 0}));
  const Mat2<Rational> x = q2(3, -2, 5, 4);
  EXPECT_EQ(coordinates(bx, x)[0], Rational(-7));

  const std::array<Mat2<Rational>, 4> degenerate{b.m, b.m, b.d, b.d_inv};
  EXPECT_EQ(code_of([&] { (void)coordinates(degenerate, x); }), ErrorCode::SingularSystem);
}

// Hand-solved coordinates for D = [[0,-1],[1,-1]], u = (1,0) and
// X = [[a,b],[c,d]]:
//   X basis: x = (-a-d, b-d, -a, -c-d)
//   Y basis: y = (-a-d, a+b, d, a-c)
TEST(Derivation, CompanionDecompositionFrozen) {
  const auto rot = default_rotation<Rational>(Q);
  const auto pp = perp_vector(rot, col2<Rational>(Q, 1, 0));
  const auto b = build_basis(rot, pp);

  // The hand solution really reconstructs X and Y.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Rational a = scalar_traits<Rational>::random(Q, rng), bb = scalar_traits<Rational>::random(Q, rng),
                   c = scalar_traits<Rational>::random(Q, rng), d = scalar_traits<Rational>::random(Q, rng);
    Mat2<Rational> x;
    x << a, bb, c, d;
    const Mat2<Rational> from_x = (-a - d) * b.d + (bb - d) * b.m + (-a) * b.m_by_d + (-c - d) * b.m_by_d_inv;
    ASSERT_EQ(from_x, x);
    const Mat2<Rational> from_y = (-a - d) * b.d_inv + (a + bb) * b.m + d * b.m_by_d + (a - c) * b.m_by_d_inv;
    ASSERT_EQ(from_y, x);
  }

  const auto dec = derive_decomposition(rot, pp);
  ASSERT_EQ(dec.rank(), 7u);
  const std::array<LinearForm<Rational>, 7> u{form(-1, 0, 0, -1), form(0, 1, 0, -1), form(-1, 0, 0, 0),
                                              form(0, 0, -1, -1), form(-1, 0, 1, 0), form(-1, -1, 0, 0),
                                              form(0, 0, 0, -1)};
  const std::array<LinearForm<Rational>, 7> v{form(-1, 0, 0, -1), form(0, 0, -1, -1), form(0, 1, 0, -1),
                                              form(-1, 0, 0, 0),  form(1, 1, 0, 0),   form(0, 0, 0, 1),
                                              form(1, 0, -1, 0)};
  // W_k by hand: id, M D^-1, D^-1 M, D M D, D M, M D, D^-1 M D^-1.
  const std::array<Mat2<Rational>, 7> w{q2(1, 0, 0, 1),  q2(-1, 0, 0, 0), q2(0, -1, 0, -1), q2(0, 0, 1, -1),
                                        q2(0, 0, 0, 1),  q2(1, -1, 0, 0), q2(1, 0, 1, 0)};
  EXPECT_EQ(oracle::mul2({0, 1, 0, 0}, {-1, 1, -1, 0}), (std::array<long long, 4>{-1, 0, 0, 0}));
  EXPECT_EQ(oracle::mul2(oracle::mul2({-1, 1, -1, 0}, {0, 1, 0, 0}), {-1, 1, -1, 0}),
            (std::array<long long, 4>{1, 0, 1, 0}));
  for (std::size_t k = 0; k < 7; ++k) {
    EXPECT_EQ(dec.terms[k].u, u[k]) << "term " << k + 1;
    EXPECT_EQ(dec.terms[k].v, v[k]) << "term " << k + 1;
    EXPECT_EQ(dec.terms[k].w, w[k]) << "term " << k + 1;
  }
}

template <class T>
class ConstructionProperties : public ::testing::Test {};

struct QField {
  using Scalar = Rational;
  static FieldDescriptor fd() { return FieldDescriptor::rational(); }
};
template <std::uint64_t P>
struct PField {
  using Scalar = Zp;
  static FieldDescriptor fd() { return FieldDescriptor::prime_field(P); }
};
using Fields = ::testing::Types<QField, PField<2>, PField<3>, PField<5>, PField<7>>;
TYPED_TEST_SUITE(ConstructionProperties, Fields);

TYPED_TEST(ConstructionProperties, IdentitiesOnRandomSetups) {
  using S = typename TypeParam::Scalar;
  const FieldDescriptor fd = TypeParam::fd();
  std::mt19937_64 rng(2024);
  const Mat2<S> id = identity2<S>(fd);
  const S minus_one = from_int<S>(fd, -1);
  for (int i = 0; i < 50; ++i) {
    const auto rot = validate_rotation(oracle::random_rotation_matrix<S>(fd, rng));
    const Mat2<S>& d = rot.matrix();
    const Mat2<S>& di = rot.inverse();
    ASSERT_EQ(Mat2<S>(d * d * d), id);
    ASSERT_TRUE(is_zero(Mat2<S>(id + d + di)));
    ASSERT_EQ(trace(di), minus_one);

    const auto pp = perp_vector(rot, oracle::random_non_eigenvector<S>(d, fd, rng));
    const ColVec2<S> du = d * pp.u;
    const RowVec2<S> r = pp.u_perp * di;
    ASSERT_TRUE(is_zero(row_times_col(r, du)));
    ASSERT_EQ(row_times_col(r, ColVec2<S>(d * du)), one<S>(fd));
    ASSERT_EQ(row_times_col(pp.u_perp, ColVec2<S>(di * pp.u)), minus_one);

    const auto b = build_basis(rot, pp);
    ASSERT_TRUE(is_zero(Mat2<S>(b.m * b.m)));
    ASSERT_EQ(Mat2<S>(b.m * d * b.m), b.m);
    ASSERT_EQ(Mat2<S>(b.m * di * b.m), Mat2<S>(-b.m));
    ASSERT_EQ(Mat2<S>((id + d) * b.m * (id + di)), b.m_by_d);

    const auto xf = coordinate_forms(b.basis_x());
    const auto yf = coordinate_forms(b.basis_y());
    Mat2<S> x;
    x << scalar_traits<S>::random(fd, rng), scalar_traits<S>::random(fd, rng), scalar_traits<S>::random(fd, rng),
        scalar_traits<S>::random(fd, rng);
    ASSERT_EQ(evaluate(xf[0], x), S(-trace(x)));
    ASSERT_EQ(evaluate(yf[0], x), S(-trace(x)));
  }
}

TYPED_TEST(ConstructionProperties, FormsAreLinear) {
  using S = typename TypeParam::Scalar;
  const FieldDescriptor fd = TypeParam::fd();
  std::mt19937_64 rng(99);
  auto rand_mat = [&] {
    Mat2<S> m;
    m << scalar_traits<S>::random(fd, rng), scalar_traits<S>::random(fd, rng), scalar_traits<S>::random(fd, rng),
        scalar_traits<S>::random(fd, rng);
    return m;
  };
  for (int i = 0; i < 10; ++i) {
    const auto rot = validate_rotation(oracle::random_rotation_matrix<S>(fd, rng));
    const auto pp = perp_vector(rot, oracle::random_non_eigenvector<S>(rot.matrix(), fd, rng));
    const auto dec = derive_decomposition(rot, pp);
    ASSERT_EQ(dec.rank(), 7u);
    ASSERT_EQ(dec.terms[0].w, identity2<S>(fd));
    for (int j = 0; j < 10; ++j) {
      const S a = scalar_traits<S>::random(fd, rng);
      const Mat2<S> x = rand_mat();
      const Mat2<S> y = rand_mat();
      const Mat2<S> ax_y = a * x + y;
      for (const auto& t : dec.terms) {
        ASSERT_EQ(evaluate(t.u, ax_y), a * evaluate(t.u, x) + evaluate(t.u, y));
        ASSERT_EQ(evaluate(t.v, ax_y), a * evaluate(t.v, x) + evaluate(t.v, y));
      }
    }
  }
}

TEST(Derive, PipelineUsesDefaults) {
  const auto run = derive<Rational>(Q, std::nullopt, std::nullopt);
  EXPECT_EQ(run.rotation.matrix(), q2(0, -1, 1, -1));
  EXPECT_EQ(run.perp.u, col2<Rational>(Q, 1, 0));
  EXPECT_EQ(run.decomposition.rank(), 7u);
  const auto f5 = FieldDescriptor::prime_field(5);
  EXPECT_EQ(code_of([&] { (void)derive<Zp>(f5, identity2<Zp>(f5), std::nullopt); }), ErrorCode::BadTrace);
  EXPECT_EQ(code_of([&] { (void)derive<Zp>(f5, mat2<Zp>(FieldDescriptor::prime_field(7), 0, 6, 1, 6), std::nullopt); }),
            ErrorCode::DescriptorMismatch);
}
