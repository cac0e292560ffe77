#pragma once

// Recursive n x n multiplication driven by any rank-7 bilinear 2x2
// decomposition, with the classical triple loop as the oracle.
//
// Inputs are zero-padded to the next power of two, split into 2x2 blocks,
// and the seven block products u_k(X) v_k(Y) are formed recursively until
// the dimension reaches the cutoff.

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "strassen/construction.hpp"
#include "strassen/field.hpp"
#include "strassen/linalg2.hpp"

namespace strassen {

template <class S>
using MatN = MatX<S>;

/// Scalar operation counts. `scalar_mults` counts products of two matrix
/// entries only; multiplications by decomposition coefficients other than
/// +-1 are tallied separately as `scalar_scalings`.
struct OpCounter {
  std::uint64_t scalar_mults = 0;
  std::uint64_t scalar_adds = 0;
  std::uint64_t scalar_scalings = 0;

  OpCounter& operator+=(const OpCounter& o) {
    scalar_mults += o.scalar_mults;
    scalar_adds += o.scalar_adds;
    scalar_scalings += o.scalar_scalings;
    return *this;
  }
  friend OpCounter operator+(OpCounter a, const OpCounter& b) { return a += b; }
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

struct EngineConfig {
  /// Dimensions at or below this use the classical product.
  Eigen::Index cutoff = 1;
};

/// Default cutoff for floating-point timing runs.
inline constexpr Eigen::Index float_timing_cutoff = 64;

template <FieldScalar S>
MatN<S> zeros(const FieldDescriptor& d, Eigen::Index rows, Eigen::Index cols) {
  return MatN<S>::Constant(rows, cols, zero<S>(d));
}

template <FieldScalar S>
MatN<S> random_matrix(const FieldDescriptor& d, Eigen::Index n, std::mt19937_64& rng) {
  MatN<S> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = scalar_traits<S>::random(d, rng);
  return m;
}

namespace detail {

template <FieldScalar S>
void check_operands(const MatN<S>& a, const MatN<S>& b) {
  if (a.rows() < 1 || a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "need two n x n matrices with n >= 1, got " +
                                                  std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                                  " and " + std::to_string(b.rows()) + "x" +
                                                  std::to_string(b.cols()));
  if (!(descriptor_of(a(0, 0)) == descriptor_of(b(0, 0))))
    throw Error(ErrorCode::DescriptorMismatch,
                descriptor_of(a(0, 0)).to_string() + " vs " + descriptor_of(b(0, 0)).to_string());
}

/// sum_i coeffs[i] * blocks[i], skipping zero coefficients.
template <FieldScalar S>
MatN<S> combine_blocks(std::span<const S> coeffs, std::span<const MatN<S>> blocks, const FieldDescriptor& fd,
                       OpCounter& counter) {
  const Eigen::Index rows = blocks[0].rows();
  const Eigen::Index cols = blocks[0].cols();
  const auto size = static_cast<std::uint64_t>(rows * cols);
  const S one_s = one<S>(fd);
  const S minus_one = from_int<S>(fd, -1);
  const S zero_s = zero<S>(fd);
  std::optional<MatN<S>> acc;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const S& c = coeffs[i];
    if (c == zero_s) continue;
    if (!acc) {
      if (c == one_s) {
        acc = blocks[i];
      } else {
        acc = c * blocks[i];
        counter.scalar_scalings += size;
      }
      continue;
    }
    if (c == one_s) {
      *acc += blocks[i];
    } else if (c == minus_one) {
      *acc -= blocks[i];
    } else {
      *acc += c * blocks[i];
      counter.scalar_scalings += size;
    }
    counter.scalar_adds += size;
  }
  return acc ? std::move(*acc) : zeros<S>(fd, rows, cols);
}

}  // namespace detail

/// Triple loop; n^3 multiplications and n^2 (n - 1) additions.
template <FieldScalar S>
MatN<S> classical_multiply(const MatN<S>& a, const MatN<S>& b, OpCounter& counter) {
  detail::check_operands(a, b);
  const Eigen::Index n = a.rows();
  MatN<S> c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      S acc = a(i, 0) * b(0, j);
      for (Eigen::Index k = 1; k < n; ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  }
  const auto nn = static_cast<std::uint64_t>(n);
  counter.scalar_mults += nn * nn * nn;
  counter.scalar_adds += nn * nn * (nn - 1);
  return c;
}

/// One level of the block algorithm. `x` and `y` hold the four blocks of
/// each operand in row-major order (11, 12, 21, 22); `multiply` is called
/// exactly rank() times, once per term, and must return the block product.
template <FieldScalar S, class BlockMultiply>
std::array<MatN<S>, 4> apply_decomposition_2x2(const BilinearDecomposition<S>& dec,
                                               const std::array<MatN<S>, 4>& x, const std::array<MatN<S>, 4>& y,
                                               BlockMultiply&& multiply, OpCounter& counter) {
  const Eigen::Index h = x[0].rows();
  for (std::size_t i = 0; i < 4; ++i) {
    if (x[i].rows() != h || x[i].cols() != h || y[i].rows() != h || y[i].cols() != h)
      throw Error(ErrorCode::DimensionMismatch, "blocks must be square and of equal size");
  }
  const FieldDescriptor& fd = dec.descriptor;
  std::vector<MatN<S>> products;
  products.reserve(dec.rank());
  for (const auto& t : dec.terms) {
    const MatN<S> u = detail::combine_blocks<S>(t.u, x, fd, counter);
    const MatN<S> v = detail::combine_blocks<S>(t.v, y, fd, counter);
    products.push_back(multiply(u, v));
  }
  std::array<MatN<S>, 4> out;
  std::vector<S> coeffs(dec.rank());
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t k = 0; k < dec.rank(); ++k) coeffs[k] = flatten(dec.terms[k].w)[j];
    out[j] = detail::combine_blocks<S>(coeffs, products, fd, counter);
  }
  return out;
}

template <class S>
struct MultiplyResult {
  MatN<S> product;
  OpCounter counter;
};

namespace detail {

template <FieldScalar S>
MatN<S> strassen_recurse(const BilinearDecomposition<S>& dec, const MatN<S>& a, const MatN<S>& b,
                         Eigen::Index cutoff, OpCounter& counter) {
  const Eigen::Index n = a.rows();
  if (n <= cutoff) return classical_multiply(a, b, counter);
  const Eigen::Index h = n / 2;
  auto quarters = [h](const MatN<S>& m) {
    return std::array<MatN<S>, 4>{m.topLeftCorner(h, h), m.topRightCorner(h, h), m.bottomLeftCorner(h, h),
                                  m.bottomRightCorner(h, h)};
  };
  auto recurse = [&](const MatN<S>& l, const MatN<S>& r) { return strassen_recurse(dec, l, r, cutoff, counter); };
  const auto c = apply_decomposition_2x2(dec, quarters(a), quarters(b), recurse, counter);
  MatN<S> out(n, n);
  out.topLeftCorner(h, h) = c[0];
  out.topRightCorner(h, h) = c[1];
  out.bottomLeftCorner(h, h) = c[2];
  out.bottomRightCorner(h, h) = c[3];
  return out;
}

}  // namespace detail

inline Eigen::Index next_power_of_two(Eigen::Index n) {
  Eigen::Index m = 1;
  while (m < n) m *= 2;
  return m;
}

/// Pads to the next power of two, recurses down to cfg.cutoff and strips
/// the padding. Throws BadRank unless dec has exactly 7 terms.
template <FieldScalar S>
MultiplyResult<S> strassen_multiply(const BilinearDecomposition<S>& dec, const MatN<S>& a, const MatN<S>& b,
                                    const EngineConfig& cfg = {}) {
  if (dec.rank() != 7)
    throw Error(ErrorCode::BadRank, "engine needs a rank-7 decomposition, got rank " + std::to_string(dec.rank()));
  if (cfg.cutoff < 1) throw Error(ErrorCode::BadConfig, "cutoff must be at least 1");
  detail::check_operands(a, b);
  if (!(descriptor_of(a(0, 0)) == dec.descriptor))
    throw Error(ErrorCode::DescriptorMismatch,
                "matrices over " + descriptor_of(a(0, 0)).to_string() + ", decomposition over " +
                    dec.descriptor.to_string());

  const Eigen::Index n = a.rows();
  const Eigen::Index padded = next_power_of_two(n);
  MultiplyResult<S> result;
  if (padded == n) {
    result.product = detail::strassen_recurse(dec, a, b, cfg.cutoff, result.counter);
    return result;
  }
  MatN<S> pa = zeros<S>(dec.descriptor, padded, padded);
  MatN<S> pb = zeros<S>(dec.descriptor, padded, padded);
  pa.topLeftCorner(n, n) = a;
  pb.topLeftCorner(n, n) = b;
  result.product = detail::strassen_recurse(dec, pa, pb, cfg.cutoff, result.counter).topLeftCorner(n, n);
  return result;
}

/// Converts exact rational coefficients to doubles for timing runs.
inline BilinearDecomposition<double> to_float(const BilinearDecomposition<Rational>& dec) {
  BilinearDecomposition<double> out;
  out.descriptor = FieldDescriptor::float64();
  for (const auto& t : dec.terms) {
    BilinearTerm<double> ft;
    for (std::size_t i = 0; i < 4; ++i) {
      ft.u[i] = t.u[i].to_double();
      ft.v[i] = t.v[i].to_double();
    }
    ft.w = t.w.unaryExpr([](const Rational& r) { return r.to_double(); });
    out.terms.push_back(ft);
  }
  return out;
}

struct BenchRow {
  Eigen::Index n = 0;
  std::uint64_t strassen_mults = 0;
  std::uint64_t classical_mults = 0;
  std::optional<double> strassen_ms;
  std::optional<double> classical_ms;
};

/// Multiplies one seeded random pair per size both ways. Operation counts
/// do not depend on the matrix values; wall-clock times are reported for
/// the float64 backend only.
template <FieldScalar S>
std::vector<BenchRow> bench(const BilinearDecomposition<S>& dec, std::span<const Eigen::Index> sizes,
                            const EngineConfig& cfg, std::uint64_t seed = 1) {
  using clock = std::chrono::steady_clock;
  std::mt19937_64 rng(seed);
  std::vector<BenchRow> rows;
  for (const Eigen::Index n : sizes) {
    if (n < 1) throw Error(ErrorCode::DimensionMismatch, "bench sizes must be >= 1");
    const MatN<S> a = random_matrix<S>(dec.descriptor, n, rng);
    const MatN<S> b = random_matrix<S>(dec.descriptor, n, rng);
    BenchRow row;
    row.n = n;
    const auto t0 = clock::now();
    const auto fast = strassen_multiply(dec, a, b, cfg);
    const auto t1 = clock::now();
    OpCounter classical;
    const MatN<S> slow = classical_multiply(a, b, classical);
    const auto t2 = clock::now();
    row.strassen_mults = fast.counter.scalar_mults;
    row.classical_mults = classical.scalar_mults;
    if constexpr (!scalar_traits<S>::exact) {
      row.strassen_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      row.classical_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace strassen
