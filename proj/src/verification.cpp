#include "strassen/verification.hpp"

#include <algorithm>
#include <thread>

namespace strassen {

namespace {

using Residues = std::array<std::uint64_t, 4>;

Residues digits(std::uint64_t p, std::uint64_t index) {
  Residues r{};
  for (int i = 3; i >= 0; --i) {
    r[static_cast<std::size_t>(i)] = index % p;
    index /= p;
  }
  return r;
}

Residues residues(const Flat4<Zp>& f) {
  return {static_cast<std::uint64_t>(f[0].value()), static_cast<std::uint64_t>(f[1].value()),
          static_cast<std::uint64_t>(f[2].value()), static_cast<std::uint64_t>(f[3].value())};
}

struct Hit {
  std::uint64_t x;
  std::uint64_t y;
};

}  // namespace

Mat2<Zp> exhaustive_matrix(std::uint64_t p, std::uint64_t index) {
  const auto r = digits(p, index);
  Mat2<Zp> m;
  m << Zp(static_cast<long long>(r[0]), p), Zp(static_cast<long long>(r[1]), p),
      Zp(static_cast<long long>(r[2]), p), Zp(static_cast<long long>(r[3]), p);
  return m;
}

VerificationReport<Zp> verify_exhaustive_gf(const BilinearDecomposition<Zp>& dec, std::uint64_t budget) {
  if (dec.descriptor.kind() != FieldKind::prime_field)
    throw Error(ErrorCode::DescriptorMismatch, "exhaustive verification needs a prime field");
  const std::uint64_t p = dec.descriptor.modulus();
  // p^8 against the budget without overflow.
  std::uint64_t pairs = 1;
  for (int i = 0; i < 8; ++i) {
    if (pairs > budget / p) throw Error(ErrorCode::FieldTooLarge, dec.descriptor.to_string() + ": p^8 pairs exceed budget " + std::to_string(budget));
    pairs *= p;
  }
  const std::uint64_t count = p * p * p * p;
  const std::size_t rank = dec.rank();

  // Forms evaluated once per matrix: u_k(X) for every X, v_k(Y) for every Y.
  std::vector<Residues> u(rank), v(rank), w(rank);
  for (std::size_t k = 0; k < rank; ++k) {
    const auto& t = dec.terms[k];
    u[k] = residues(t.u);
    v[k] = residues(t.v);
    w[k] = residues(flatten(t.w));
  }
  auto form_values = [&](const std::vector<Residues>& forms) {
    std::vector<std::uint64_t> out(count * rank);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto e = digits(p, i);
      for (std::size_t k = 0; k < rank; ++k) {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < 4; ++j) s += forms[k][j] * e[j] % p;
        out[i * rank + k] = s % p;
      }
    }
    return out;
  };
  const auto uvals = form_values(u);
  const auto vvals = form_values(v);

  // Scan X in [begin, end) in order; stop at the first failing pair.
  auto scan = [&](std::uint64_t begin, std::uint64_t end) -> std::optional<Hit> {
    for (std::uint64_t xi = begin; xi < end; ++xi) {
      const auto x = digits(p, xi);
      for (std::uint64_t yi = 0; yi < count; ++yi) {
        const auto y = digits(p, yi);
        Residues lhs{(x[0] * y[0] + x[1] * y[2]) % p, (x[0] * y[1] + x[1] * y[3]) % p,
                     (x[2] * y[0] + x[3] * y[2]) % p, (x[2] * y[1] + x[3] * y[3]) % p};
        Residues rhs{};
        for (std::size_t k = 0; k < rank; ++k) {
          const std::uint64_t c = uvals[xi * rank + k] * vvals[yi * rank + k] % p;
          for (std::size_t j = 0; j < 4; ++j) rhs[j] = (rhs[j] + c * w[k][j]) % p;
        }
        if (lhs != rhs) return Hit{xi, yi};
      }
    }
    return std::nullopt;
  };

  const std::uint64_t workers =
      std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, std::max<std::uint64_t>(1, count / 16));
  std::vector<std::optional<Hit>> hits(workers);
  {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (std::uint64_t t = 0; t < workers; ++t) {
      const std::uint64_t begin = std::min(count, t * chunk);
      const std::uint64_t end = std::min(count, begin + chunk);
      pool.emplace_back([&, t, begin, end] { hits[t] = scan(begin, end); });
    }
  }

  VerificationReport<Zp> report{"exhaustive " + dec.descriptor.to_string(), pairs, std::nullopt};
  // Ranges are ordered, so the first worker with a hit holds the
  // lexicographically first failure.
  for (const auto& hit : hits) {
    if (!hit) continue;
    const Mat2<Zp> x = exhaustive_matrix(p, hit->x);
    const Mat2<Zp> y = exhaustive_matrix(p, hit->y);
    report.checks_run = hit->x * count + hit->y + 1;
    report.first_failure = Counterexample<Zp>{"XY != sum at X #" + std::to_string(hit->x) + ", Y #" +
                                                  std::to_string(hit->y),
                                              static_cast<long long>(hit->x), static_cast<long long>(hit->y), -1,
                                              Mat2<Zp>(x * y), evaluate(dec, x, y)};
    break;
  }
  return report;
}

}  // namespace strassen
