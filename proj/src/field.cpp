#include "strassen/field.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <regex>
#include <sstream>

namespace strassen {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DescriptorMismatch: return "DescriptorMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::BadDescriptor: return "BadDescriptor";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::BadTrace: return "BadTrace";
    case ErrorCode::BadDeterminant: return "BadDeterminant";
    case ErrorCode::ScalarMatrix: return "ScalarMatrix";
    case ErrorCode::EigenvectorInput: return "EigenvectorInput";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorCode::FloatDescriptor: return "FloatDescriptor";
    case ErrorCode::FieldTooLarge: return "FieldTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::BadScalar: return "BadScalar";
    case ErrorCode::BadRank: return "BadRank";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(strassen::to_string(code)) + ": " + message), code_(code) {}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

FieldDescriptor FieldDescriptor::prime_field(std::uint64_t p) {
  if (p > max_modulus)
    throw Error(ErrorCode::NotPrime, "modulus " + std::to_string(p) + " exceeds supported range");
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  return FieldDescriptor(FieldKind::prime_field, p);
}

FieldDescriptor FieldDescriptor::parse(std::string_view text) {
  if (text == "rational") return rational();
  if (text == "float64") return float64();
  static const std::regex gf(R"(gf\(([0-9]{1,20})\))");
  std::cmatch m;
  if (std::regex_match(text.begin(), text.end(), m, gf)) {
    std::uint64_t p = 0;
    const auto digits = m[1].str();
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      throw Error(ErrorCode::BadDescriptor, "modulus out of range in '" + std::string(text) + "'");
    return prime_field(p);
  }
  throw Error(ErrorCode::BadDescriptor, "unknown field '" + std::string(text) + "'");
}

std::string FieldDescriptor::to_string() const {
  switch (kind_) {
    case FieldKind::rational: return "rational";
    case FieldKind::float64: return "float64";
    case FieldKind::prime_field: return "gf(" + std::to_string(modulus_) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Rational::Rational(long long num, long long den) {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  value_ = value_type(num, den);
}

Rational Rational::parse(std::string_view text) {
  static const std::regex form(R"((-?[0-9]+)(?:/([0-9]+))?)");
  std::cmatch m;
  if (!std::regex_match(text.begin(), text.end(), m, form))
    throw Error(ErrorCode::BadScalar, "not a rational: '" + std::string(text) + "'");
  using boost::multiprecision::cpp_int;
  const cpp_int num(m[1].str());
  const cpp_int den = m[2].matched ? cpp_int(m[2].str()) : cpp_int(1);
  if (den == 0) throw Error(ErrorCode::BadScalar, "zero denominator in '" + std::string(text) + "'");
  if (gcd(abs(num), den) != 1)
    throw Error(ErrorCode::BadScalar, "unreduced fraction '" + std::string(text) + "'");
  if (num == 0 && m[1].str() != "0")
    throw Error(ErrorCode::BadScalar, "non-canonical zero '" + std::string(text) + "'");
  return Rational(value_type(num, den));
}

Rational Rational::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  return Rational(value_type(1 / value_));
}

std::string Rational::to_string() const {
  const auto num = numerator(value_);
  const auto den = denominator(value_);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational scalar_traits<Rational>::parse_lenient(const FieldDescriptor&, std::string_view text) {
  static const std::regex form(R"(([-+]?[0-9]+)(?:/([-+]?[0-9]+))?)");
  std::cmatch m;
  if (!std::regex_match(text.begin(), text.end(), m, form))
    throw Error(ErrorCode::BadScalar, "not a rational: '" + std::string(text) + "'");
  using boost::multiprecision::cpp_int;
  auto strip = [](std::string s) { return (!s.empty() && s[0] == '+') ? s.substr(1) : s; };
  cpp_int num(strip(m[1].str()));
  cpp_int den = m[2].matched ? cpp_int(strip(m[2].str())) : cpp_int(1);
  if (den == 0) throw Error(ErrorCode::BadScalar, "zero denominator in '" + std::string(text) + "'");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(Rational::value_type(num, den));
}

Rational scalar_traits<Rational>::random(const FieldDescriptor&, std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> num(-9, 9);
  std::uniform_int_distribution<long long> den(1, 4);
  return Rational(num(rng), den(rng));
}

// ---------------------------------------------------------------------------

Zp::Zp(long long v, std::uint64_t p) : value_(reduce(v, p)), modulus_(p) {
  if (p == 0) throw Error(ErrorCode::DescriptorMismatch, "zero modulus");
}

long long Zp::reduce(long long v, std::uint64_t p) noexcept {
  if (p == 0) return v;
  const auto m = static_cast<long long>(p);
  long long r = v % m;
  return r < 0 ? r + m : r;
}

std::uint64_t Zp::unify(const Zp& o) const {
  if (modulus_ == o.modulus_) return modulus_;
  if (modulus_ == 0) return o.modulus_;
  if (o.modulus_ == 0) return modulus_;
  throw Error(ErrorCode::DescriptorMismatch, "gf(" + std::to_string(modulus_) + ") vs gf(" +
                                                 std::to_string(o.modulus_) + ")");
}

Zp& Zp::operator+=(const Zp& o) {
  const auto p = unify(o);
  value_ = reduce(reduce(value_, p) + reduce(o.value_, p), p);
  modulus_ = p;
  return *this;
}

Zp& Zp::operator-=(const Zp& o) {
  const auto p = unify(o);
  value_ = reduce(reduce(value_, p) - reduce(o.value_, p), p);
  modulus_ = p;
  return *this;
}

Zp& Zp::operator*=(const Zp& o) {
  const auto p = unify(o);
  if (p == 0) {
    value_ *= o.value_;
    return *this;
  }
  const auto a = static_cast<std::uint64_t>(reduce(value_, p));
  const auto b = static_cast<std::uint64_t>(reduce(o.value_, p));
  value_ = static_cast<long long>((a * b) % p);
  modulus_ = p;
  return *this;
}

Zp operator-(const Zp& a) {
  Zp r;
  r.modulus_ = a.modulus_;
  r.value_ = Zp::reduce(-a.value_, a.modulus_);
  return r;
}

bool operator==(const Zp& a, const Zp& b) {
  const auto p = a.unify(b);
  return Zp::reduce(a.value_, p) == Zp::reduce(b.value_, p);
}

Zp Zp::inverse() const {
  if (modulus_ == 0) {
    if (value_ == 1 || value_ == -1) return *this;
    throw Error(ErrorCode::DescriptorMismatch, "inverse of unbound literal " + std::to_string(value_));
  }
  if (value_ == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero in gf(" + std::to_string(modulus_) + ")");
  // Extended Euclid on (value, p).
  long long r0 = static_cast<long long>(modulus_), r1 = value_;
  long long t0 = 0, t1 = 1;
  while (r1 != 0) {
    const long long q = r0 / r1;
    std::tie(r0, r1) = std::pair(r1, r0 - q * r1);
    std::tie(t0, t1) = std::pair(t1, t0 - q * t1);
  }
  return Zp(t0, modulus_);
}

std::ostream& operator<<(std::ostream& os, const Zp& z) { return os << z.to_string(); }

FieldDescriptor scalar_traits<Zp>::descriptor(const Zp& z) {
  if (!z.is_bound()) throw Error(ErrorCode::DescriptorMismatch, "unbound residue literal has no field");
  return FieldDescriptor::prime_field(z.modulus());
}

namespace {

long long parse_decimal(std::string_view text, bool allow_sign) {
  std::string_view digits = text;
  if (allow_sign && !digits.empty() && (digits[0] == '+' || digits[0] == '-')) digits.remove_prefix(1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
    throw Error(ErrorCode::BadScalar, "not a decimal integer: '" + std::string(text) + "'");
  if (text[0] == '+') text.remove_prefix(1);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::BadScalar, "integer out of range: '" + std::string(text) + "'");
  return v;
}

}  // namespace

Zp scalar_traits<Zp>::parse(const FieldDescriptor& d, std::string_view text) {
  const long long v = parse_decimal(text, false);
  if (text.size() > 1 && text[0] == '0')
    throw Error(ErrorCode::BadScalar, "leading zero in residue '" + std::string(text) + "'");
  if (v < 0 || static_cast<std::uint64_t>(v) >= d.modulus())
    throw Error(ErrorCode::BadScalar,
                "residue '" + std::string(text) + "' outside [0, " + std::to_string(d.modulus()) + ")");
  return Zp(v, d.modulus());
}

Zp scalar_traits<Zp>::parse_lenient(const FieldDescriptor& d, std::string_view text) {
  return Zp(parse_decimal(text, true), d.modulus());
}

Zp scalar_traits<Zp>::random(const FieldDescriptor& d, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, d.modulus() - 1);
  return Zp(static_cast<long long>(dist(rng)), d.modulus());
}

// ---------------------------------------------------------------------------

double scalar_traits<double>::parse(const FieldDescriptor&, std::string_view text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw Error(ErrorCode::BadScalar, "not a float: '" + std::string(text) + "'");
  return v;
}

std::string scalar_traits<double>::format(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double scalar_traits<double>::random(const FieldDescriptor&, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  return dist(rng);
}

}  // namespace strassen
