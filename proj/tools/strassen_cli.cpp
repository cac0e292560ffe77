#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strassen/io.hpp"

using namespace strassen;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_input = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedFile, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorCode::MalformedFile, "cannot write '" + path + "'");
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) parts.push_back(item);
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  return parts;
}

template <ExactScalar S>
std::vector<S> parse_scalars(const FieldDescriptor& fd, const std::string& text, std::size_t count,
                             const char* flag) {
  const auto parts = split_commas(text);
  if (parts.size() != count)
    throw Error(ErrorCode::BadScalar,
                std::string(flag) + " needs " + std::to_string(count) + " comma-separated scalars");
  std::vector<S> out;
  for (const auto& p : parts) out.push_back(scalar_traits<S>::parse_lenient(fd, p));
  return out;
}

template <ExactScalar S>
std::optional<Mat2<S>> rotation_flag(const FieldDescriptor& fd, const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = parse_scalars<S>(fd, text, 4, "--d");
  Mat2<S> d;
  d << v[0], v[1], v[2], v[3];
  return d;
}

template <ExactScalar S>
std::optional<ColVec2<S>> vector_flag(const FieldDescriptor& fd, const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = parse_scalars<S>(fd, text, 2, "--u");
  return ColVec2<S>(v[0], v[1]);
}

template <class S>
std::string show(const Mat2<S>& m) {
  return "[[" + scalar_traits<S>::format(m(0, 0)) + ", " + scalar_traits<S>::format(m(0, 1)) + "], [" +
         scalar_traits<S>::format(m(1, 0)) + ", " + scalar_traits<S>::format(m(1, 1)) + "]]";
}

template <class S>
std::string show(const ColVec2<S>& v) {
  return "(" + scalar_traits<S>::format(v(0)) + ", " + scalar_traits<S>::format(v(1)) + ")";
}

void print_counter(const OpCounter& c) {
  std::cout << "scalar_mults: " << c.scalar_mults << "\nscalar_adds: " << c.scalar_adds
            << "\nscalar_scalings: " << c.scalar_scalings << '\n';
}

// ---------------------------------------------------------------------------

struct DeriveArgs {
  std::string field;
  std::string d;
  std::string u;
  std::string out;
};

int run_derive(const DeriveArgs& args) {
  const FieldDescriptor fd = FieldDescriptor::parse(args.field);
  return dispatch_exact(fd, [&]<class S>() {
    const auto run = derive<S>(fd, rotation_flag<S>(fd, args.d), vector_flag<S>(fd, args.u));
    const auto report = verify_bilinear_identity(run.decomposition);
    std::cout << "D = " << show(run.rotation.matrix()) << "\nu = " << show(run.perp.u) << '\n'
              << format_report(report) << '\n';
    if (!report.passed()) return exit_failed;
    write_file(args.out, serialize(run.decomposition,
                                   std::optional(Provenance<S>{run.rotation.matrix(), run.perp.u})));
    std::cout << "wrote " << args.out << '\n';
    return exit_ok;
  });
}

struct VerifyArgs {
  std::string path;
  bool exhaustive = false;
  std::uint64_t budget = default_exhaustive_budget;
  bool json = false;
};

int run_verify(const VerifyArgs& args) {
  const std::string text = read_file(args.path);
  const FieldDescriptor fd = peek_field(text);
  return dispatch_exact(fd, [&]<class S>() {
    const auto file = parse_decomposition<S>(text);
    if (file.nonstandard_rank())
      std::cerr << "warning: rank " << file.decomposition.rank()
                << " decomposition; the engine only runs rank 7\n";
    bool passed = true;
    auto emit = [&](const auto& report, std::string_view unit) {
      passed = passed && report.passed();
      std::cout << (args.json ? report_json(report) : format_report(report, unit)) << '\n';
    };
    emit(verify_bilinear_identity(file.decomposition), "checks");
    if (args.exhaustive) {
      if constexpr (std::is_same_v<S, Zp>)
        emit(verify_exhaustive_gf(file.decomposition, args.budget), "pairs checked");
      else
        std::cerr << "note: exhaustive check skipped, " << fd.to_string() << " is not a prime field\n";
    }
    emit(verify_trilinear(file.decomposition), "checks");
    return passed ? exit_ok : exit_failed;
  });
}

int run_table(const DeriveArgs& args) {
  const FieldDescriptor fd = FieldDescriptor::parse(args.field);
  return dispatch_exact(fd, [&]<class S>() {
    const auto run = derive<S>(fd, rotation_flag<S>(fd, args.d), vector_flag<S>(fd, args.u));
    const auto& b = run.basis;
    const auto products = product_matrices(b);
    const auto xs = b.basis_x();
    const auto ys = b.basis_y();

    std::cout << "D = " << show(run.rotation.matrix()) << "\nu = " << show(run.perp.u)
              << "\nu_perp = (" << scalar_traits<S>::format(run.perp.u_perp(0)) << ", "
              << scalar_traits<S>::format(run.perp.u_perp(1)) << ")\n\n";
    for (std::size_t i = 0; i < 4; ++i) std::cout << basis_x_labels[i] << " = " << show(xs[i]) << '\n';
    std::cout << basis_y_labels[0] << " = " << show(ys[0]) << "\n\n";

    const int width = 14;
    std::cout << std::left << std::setw(width) << "";
    for (const char* y : basis_y_labels) std::cout << std::setw(width) << y;
    std::cout << '\n';
    for (std::size_t i = 0; i < 4; ++i) {
      std::cout << std::setw(width) << basis_x_labels[i];
      for (std::size_t j = 0; j < 4; ++j) {
        const TableCell c = multiplication_table[i][j];
        std::string cell = c.product < 0 ? "0"
                                         : std::string(c.sign < 0 ? "-" : "") +
                                               product_labels[static_cast<std::size_t>(c.product)];
        std::cout << std::setw(width) << cell;
      }
      std::cout << '\n';
    }
    std::cout << std::right << '\n';
    for (std::size_t k = 0; k < products.size(); ++k)
      std::cout << "W" << k + 1 << " = " << product_labels[k] << " = " << show(products[k]) << '\n';
    std::cout << '\n';

    const auto table = verify_multiplication_table(b);
    const auto structure = verify_structure(run.rotation, run.perp);
    std::cout << format_report(table) << '\n' << format_report(structure) << '\n';
    return table.passed() && structure.passed() ? exit_ok : exit_failed;
  });
}

struct MultiplyArgs {
  std::string path;
  std::string a_file;
  std::string b_file;
  Eigen::Index random_n = 0;
  std::uint64_t seed = 1;
  bool as_float = false;
  Eigen::Index cutoff = 1;
};

template <FieldScalar S>
int multiply_with(const BilinearDecomposition<S>& dec, const FieldDescriptor& fd, const MultiplyArgs& args) {
  MatN<S> a, b;
  if (args.random_n > 0) {
    std::mt19937_64 rng(args.seed);
    a = random_matrix<S>(fd, args.random_n, rng);
    b = random_matrix<S>(fd, args.random_n, rng);
  } else {
    a = parse_matrix<S>(read_file(args.a_file));
    b = parse_matrix<S>(read_file(args.b_file));
  }
  const auto r = strassen_multiply(dec, a, b, EngineConfig{args.cutoff});
  std::cout << format_matrix(r.product, fd);
  print_counter(r.counter);
  return exit_ok;
}

int run_multiply(const MultiplyArgs& args) {
  if (args.random_n == 0 && (args.a_file.empty() || args.b_file.empty()))
    throw Error(ErrorCode::BadConfig, "multiply needs --a and --b, or --random N");
  const std::string text = read_file(args.path);
  const FieldDescriptor fd = peek_field(text);
  bool use_float = args.as_float;
  if (args.random_n == 0) {
    const auto header = peek_matrix_header(read_file(args.a_file));
    use_float = header.field.kind() == FieldKind::float64;
  }
  if (use_float) {
    if (fd.kind() != FieldKind::rational)
      throw Error(ErrorCode::DescriptorMismatch, "float64 matrices need a rational decomposition");
    return multiply_with(to_float(parse_decomposition<Rational>(text).decomposition), FieldDescriptor::float64(),
                         args);
  }
  return dispatch_exact(fd, [&]<class S>() { return multiply_with(parse_decomposition<S>(text).decomposition, fd, args); });
}

struct BenchArgs {
  std::string path;
  std::vector<Eigen::Index> sizes;
  std::optional<Eigen::Index> cutoff;
  bool as_float = false;
  std::string csv;
  std::uint64_t seed = 1;
};

int run_bench(const BenchArgs& args) {
  const std::string text = read_file(args.path);
  const FieldDescriptor fd = peek_field(text);
  const EngineConfig cfg{args.cutoff.value_or(args.as_float ? float_timing_cutoff : 1)};
  std::vector<BenchRow> rows;
  if (args.as_float) {
    if (fd.kind() != FieldKind::rational)
      throw Error(ErrorCode::DescriptorMismatch, "--float needs a rational decomposition");
    rows = bench(to_float(parse_decomposition<Rational>(text).decomposition), std::span(args.sizes), cfg, args.seed);
  } else {
    rows = dispatch_exact(fd, [&]<class S>() {
      return bench(parse_decomposition<S>(text).decomposition, std::span(args.sizes), cfg, args.seed);
    });
  }
  std::cout << "cutoff " << cfg.cutoff << ", field " << (args.as_float ? "float64" : fd.to_string()) << '\n'
            << format_bench_table(rows);
  if (!args.csv.empty()) write_file(args.csv, format_bench_csv(rows));
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derive, verify and run Strassen-type bilinear decompositions."};
  app.require_subcommand(1);

  DeriveArgs derive_args;
  auto* derive_cmd = app.add_subcommand("derive", "derive a rank-7 decomposition and write it to a file");
  derive_cmd->add_option("--field", derive_args.field, "rational or gf(p)")->required();
  derive_cmd->add_option("--d", derive_args.d, "a11,a12,a21,a22 of the order-3 matrix");
  derive_cmd->add_option("--u", derive_args.u, "u1,u2, not an eigenvector of D");
  derive_cmd->add_option("--out", derive_args.out, "output decomposition file")->required();

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "check a decomposition file");
  verify_cmd->add_option("path", verify_args.path)->required();
  verify_cmd->add_flag("--exhaustive", verify_args.exhaustive, "check every pair over a small prime field");
  verify_cmd->add_option("--budget", verify_args.budget, "largest pair count the exhaustive check accepts");
  verify_cmd->add_flag("--json", verify_args.json, "one JSON record per check");

  DeriveArgs table_args;
  auto* table_cmd = app.add_subcommand("table", "print the basis multiplication table");
  table_cmd->add_option("--field", table_args.field, "rational or gf(p)")->required();
  table_cmd->add_option("--d", table_args.d, "a11,a12,a21,a22 of the order-3 matrix");
  table_cmd->add_option("--u", table_args.u, "u1,u2, not an eigenvector of D");

  MultiplyArgs multiply_args;
  auto* multiply_cmd = app.add_subcommand("multiply", "multiply two matrices with a decomposition");
  multiply_cmd->add_option("path", multiply_args.path)->required();
  auto* a_opt = multiply_cmd->add_option("--a", multiply_args.a_file, "left matrix file");
  auto* b_opt = multiply_cmd->add_option("--b", multiply_args.b_file, "right matrix file");
  auto* random_opt = multiply_cmd->add_option("--random", multiply_args.random_n, "use seeded random n x n operands")
                         ->check(CLI::PositiveNumber);
  random_opt->excludes(a_opt)->excludes(b_opt);
  multiply_cmd->add_option("--seed", multiply_args.seed, "seed for --random");
  multiply_cmd->add_flag("--float", multiply_args.as_float, "random operands in float64");
  multiply_cmd->add_option("--cutoff", multiply_args.cutoff, "classical below this size");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "count multiplications against the classical method");
  bench_cmd->add_option("path", bench_args.path)->required();
  bench_cmd->add_option("--sizes", bench_args.sizes, "comma-separated matrix sizes")->required()->delimiter(',');
  bench_cmd->add_option("--cutoff", bench_args.cutoff, "classical below this size (default 1, 64 with --float)");
  bench_cmd->add_flag("--float", bench_args.as_float, "float64 backend with wall-clock timings");
  bench_cmd->add_option("--csv", bench_args.csv, "also write the rows as CSV");
  bench_cmd->add_option("--seed", bench_args.seed, "seed for the operands");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*derive_cmd) return run_derive(derive_args);
    if (*verify_cmd) return run_verify(verify_args);
    if (*table_cmd) return run_table(table_args);
    if (*multiply_cmd) return run_multiply(multiply_args);
    if (*bench_cmd) return run_bench(bench_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}
