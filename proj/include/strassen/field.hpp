#pragma once

// Exact scalar types used throughout the library.
//
// Every dense type in this project is an Eigen matrix templated on one of
// three scalars:
//   Rational  arbitrary-precision fractions, always reduced
//   Zp        residues modulo a runtime prime p, always in [0, p)
//   double    only accepted by the multiplication engine and benchmarks
//
// The field an element lives in is described at runtime by a
// FieldDescriptor; scalar_traits<S> bridges the two.

#include <compare>
#include <concepts>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace strassen {

enum class ErrorCode {
  DescriptorMismatch,
  DivisionByZero,
  NotPrime,
  BadDescriptor,
  SingularMatrix,
  SingularSystem,
  BadTrace,
  BadDeterminant,
  ScalarMatrix,
  EigenvectorInput,
  ZeroVector,
  InternalInvariantViolation,
  FloatDescriptor,
  FieldTooLarge,
  DimensionMismatch,
  BadConfig,
  MalformedFile,
  BadScalar,
  BadRank,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class FieldKind { rational, prime_field, float64 };

/// Runtime description of the scalar field. Textual forms are
/// `rational`, `gf(p)` and `float64`.
class FieldDescriptor {
 public:
  /// Largest accepted modulus; keeps residue products inside 64 bits.
  static constexpr std::uint64_t max_modulus = (std::uint64_t{1} << 32) - 1;

  static FieldDescriptor rational() { return FieldDescriptor(FieldKind::rational, 0); }
  static FieldDescriptor float64() { return FieldDescriptor(FieldKind::float64, 0); }
  /// Throws NotPrime unless p is a prime not exceeding max_modulus.
  static FieldDescriptor prime_field(std::uint64_t p);
  /// Throws BadDescriptor (or NotPrime) on anything but the three forms.
  static FieldDescriptor parse(std::string_view text);

  FieldKind kind() const noexcept { return kind_; }
  /// Zero unless kind() == prime_field.
  std::uint64_t modulus() const noexcept { return modulus_; }
  bool is_exact() const noexcept { return kind_ != FieldKind::float64; }
  std::string to_string() const;

  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;

 private:
  FieldDescriptor(FieldKind kind, std::uint64_t modulus) : kind_(kind), modulus_(modulus) {}

  FieldKind kind_;
  std::uint64_t modulus_;
};

/// Trial division.
bool is_prime(std::uint64_t n) noexcept;

// ---------------------------------------------------------------------------
// Rational

class Rational {
 public:
  using value_type =
      boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                    boost::multiprecision::et_off>;

  Rational() = default;
  Rational(long long n) : value_(n) {}  // NOLINT: implicit, Eigen builds literals this way
  /// Throws DivisionByZero when den == 0.
  Rational(long long num, long long den);
  explicit Rational(value_type v) : value_(std::move(v)) {}

  /// Accepts "p" or "p/q" with q > 0 and gcd(|p|, q) = 1; throws BadScalar.
  static Rational parse(std::string_view text);

  const value_type& value() const noexcept { return value_; }
  bool is_zero() const { return value_ == 0; }
  /// Throws DivisionByZero for zero.
  Rational inverse() const;
  double to_double() const { return value_.convert_to<double>(); }
  /// "p" when the denominator is 1, otherwise "p/q".
  std::string to_string() const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) { return *this *= o.inverse(); }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(value_type(-a.value_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

 private:
  value_type value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// ---------------------------------------------------------------------------
// Zp
//
// A residue modulo a prime carried by the element itself. An element built
// from a bare integer (as Eigen does for Scalar(0) / Scalar(1)) is an
// unbound literal: it adopts the modulus of the first bound element it meets.
// Combining two bound elements with different moduli throws
// DescriptorMismatch.

class Zp {
 public:
  Zp() = default;
  Zp(long long literal) : value_(literal) {}  // NOLINT: see class comment
  /// Bound residue of `v` modulo `p`. Does not re-check primality; use
  /// FieldDescriptor::prime_field for validated moduli.
  Zp(long long v, std::uint64_t p);

  bool is_bound() const noexcept { return modulus_ != 0; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  /// Residue in [0, p) when bound, the raw literal otherwise.
  long long value() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_ == 0; }
  /// Throws DivisionByZero for zero, DescriptorMismatch for unbound
  /// literals other than +-1.
  Zp inverse() const;
  std::string to_string() const { return std::to_string(value_); }

  Zp& operator+=(const Zp& o);
  Zp& operator-=(const Zp& o);
  Zp& operator*=(const Zp& o);
  Zp& operator/=(const Zp& o) { return *this *= o.inverse(); }

  friend Zp operator+(Zp a, const Zp& b) { return a += b; }
  friend Zp operator-(Zp a, const Zp& b) { return a -= b; }
  friend Zp operator*(Zp a, const Zp& b) { return a *= b; }
  friend Zp operator/(Zp a, const Zp& b) { return a /= b; }
  friend Zp operator-(const Zp& a);
  friend bool operator==(const Zp& a, const Zp& b);

 private:
  // Brings *this and o to a common modulus (0 when both are unbound).
  std::uint64_t unify(const Zp& o) const;
  static long long reduce(long long v, std::uint64_t p) noexcept;

  long long value_ = 0;
  std::uint64_t modulus_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Zp& z);

// ---------------------------------------------------------------------------
// scalar_traits: descriptor <-> scalar glue

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static bool accepts(const FieldDescriptor& d) { return d.kind() == FieldKind::rational; }
  static FieldDescriptor descriptor(const Rational&) { return FieldDescriptor::rational(); }
  static Rational from_int(const FieldDescriptor&, long long v) { return Rational(v); }
  /// Canonical form only (reduced, positive denominator).
  static Rational parse(const FieldDescriptor&, std::string_view text) { return Rational::parse(text); }
  /// Accepts unreduced fractions and signs on either part.
  static Rational parse_lenient(const FieldDescriptor&, std::string_view text);
  static std::string format(const Rational& r) { return r.to_string(); }
  /// Small fractions num/den with |num| <= 9, 1 <= den <= 4.
  static Rational random(const FieldDescriptor&, std::mt19937_64& rng);
};

template <>
struct scalar_traits<Zp> {
  static constexpr bool exact = true;
  static bool accepts(const FieldDescriptor& d) { return d.kind() == FieldKind::prime_field; }
  /// Throws DescriptorMismatch for unbound literals.
  static FieldDescriptor descriptor(const Zp& z);
  static Zp from_int(const FieldDescriptor& d, long long v) { return Zp(v, d.modulus()); }
  /// Decimal residue in [0, p), no sign, no leading zeros.
  static Zp parse(const FieldDescriptor& d, std::string_view text);
  /// Any signed decimal integer, reduced mod p.
  static Zp parse_lenient(const FieldDescriptor& d, std::string_view text);
  static std::string format(const Zp& z) { return z.to_string(); }
  static Zp random(const FieldDescriptor& d, std::mt19937_64& rng);
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static bool accepts(const FieldDescriptor& d) { return d.kind() == FieldKind::float64; }
  static FieldDescriptor descriptor(double) { return FieldDescriptor::float64(); }
  static double from_int(const FieldDescriptor&, long long v) { return static_cast<double>(v); }
  static double parse(const FieldDescriptor&, std::string_view text);
  static double parse_lenient(const FieldDescriptor& d, std::string_view text) { return parse(d, text); }
  /// Round-trippable shortest representation.
  static std::string format(double x);
  /// Uniform in [-1, 1).
  static double random(const FieldDescriptor&, std::mt19937_64& rng);
};

template <class S>
concept FieldScalar = requires { scalar_traits<S>::exact; };

/// Scalars allowed in verification and serialization.
template <class S>
concept ExactScalar = FieldScalar<S> && scalar_traits<S>::exact;

template <FieldScalar S>
S from_int(const FieldDescriptor& d, long long v) {
  return scalar_traits<S>::from_int(d, v);
}

template <FieldScalar S>
S zero(const FieldDescriptor& d) {
  return from_int<S>(d, 0);
}

template <FieldScalar S>
S one(const FieldDescriptor& d) {
  return from_int<S>(d, 1);
}

template <FieldScalar S>
FieldDescriptor descriptor_of(const S& s) {
  return scalar_traits<S>::descriptor(s);
}

template <FieldScalar S>
void require_field(const FieldDescriptor& d) {
  if (!scalar_traits<S>::accepts(d))
    throw Error(ErrorCode::DescriptorMismatch, "scalar type does not match field " + d.to_string());
}

template <ExactScalar S>
bool is_zero(const S& s) {
  return s.is_zero();
}

/// Calls `f.template operator()<S>()` with S chosen from the descriptor's
/// kind. Float descriptors throw FloatDescriptor.
template <class F>
decltype(auto) dispatch_exact(const FieldDescriptor& d, F&& f) {
  switch (d.kind()) {
    case FieldKind::rational:
      return std::forward<F>(f).template operator()<Rational>();
    case FieldKind::prime_field:
      return std::forward<F>(f).template operator()<Zp>();
    case FieldKind::float64:
      break;
  }
  throw Error(ErrorCode::FloatDescriptor, "operation requires an exact field, got float64");
}

}  // namespace strassen

namespace Eigen {

template <>
struct NumTraits<strassen::Rational> : GenericNumTraits<strassen::Rational> {
  using Real = strassen::Rational;
  using NonInteger = strassen::Rational;
  using Literal = strassen::Rational;
  using Nested = strassen::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 16,
    MulCost = 16,
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<strassen::Zp> : GenericNumTraits<strassen::Zp> {
  using Real = strassen::Zp;
  using NonInteger = strassen::Zp;
  using Literal = strassen::Zp;
  using Nested = strassen::Zp;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4,
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
