#pragma once

// Text formats.
//
// Decomposition file (JSON, keys in this order):
//   {"format_version": "1", "field": "gf(7)", "rank": 7,
//    "terms": [{"u": [4 scalars], "v": [4 scalars], "W": [4 scalars]}, ...],
//    "provenance": {"D": [4 scalars], "u_vector": [2 scalars]}}   (optional)
// Scalars are JSON strings: "p/q" reduced with q > 0 ("3" for 3/1) over the
// rationals, decimal residues in [0, p) over gf(p). All 2x2 matrices and
// linear forms are flattened row-major.
//
// Matrix file:
//   n <dim> field <descriptor>
//   <dim lines of dim space-separated scalars>
//
// Bench CSV columns: n,strassen_mults,classical_mults,strassen_ms,classical_ms

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "strassen/construction.hpp"
#include "strassen/engine.hpp"
#include "strassen/field.hpp"
#include "strassen/verification.hpp"

namespace strassen {

template <class S>
struct Provenance {
  Mat2<S> d;
  ColVec2<S> u;

  friend bool operator==(const Provenance& a, const Provenance& b) { return a.d == b.d && a.u == b.u; }
};

template <class S>
struct DecompositionFile {
  BilinearDecomposition<S> decomposition;
  std::optional<Provenance<S>> provenance;

  /// Files may carry other ranks for the verifier; the engine refuses them.
  bool nonstandard_rank() const { return decomposition.rank() != 7; }
};

/// Reads only the "field" entry. Throws MalformedFile, BadDescriptor.
FieldDescriptor peek_field(std::string_view json_text);

/// Throws FloatDescriptor for a non-exact descriptor.
template <ExactScalar S>
std::string serialize(const BilinearDecomposition<S>& dec, const std::optional<Provenance<S>>& provenance = {});

/// Structural validation only; the identity itself is not checked.
/// Throws MalformedFile, BadScalar, FloatDescriptor, DescriptorMismatch.
template <ExactScalar S>
DecompositionFile<S> parse_decomposition(std::string_view json_text);

struct MatrixHeader {
  Eigen::Index n = 0;
  FieldDescriptor field = FieldDescriptor::rational();
};

/// Throws MalformedFile, BadDescriptor.
MatrixHeader peek_matrix_header(std::string_view text);

template <FieldScalar S>
std::string format_matrix(const MatN<S>& m, const FieldDescriptor& field);

/// Throws MalformedFile, BadScalar, DescriptorMismatch.
template <FieldScalar S>
MatN<S> parse_matrix(std::string_view text);

std::string format_bench_table(std::span<const BenchRow> rows);
std::string format_bench_csv(std::span<const BenchRow> rows);

/// "<name>: <n> <unit>, passed", plus the first failure when there is one.
template <ExactScalar S>
std::string format_report(const VerificationReport<S>& report, std::string_view unit = "checks");

/// One-line JSON record of a report.
template <ExactScalar S>
std::string report_json(const VerificationReport<S>& report);

}  // namespace strassen
