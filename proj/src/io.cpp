#include "strassen/io.hpp"

#include <iomanip>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace strassen {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedFile, what); }

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
}

template <class S>
std::string format(const S& s) {
  return scalar_traits<S>::format(s);
}

template <class S>
json scalars(std::span<const S> values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(format(v));
  return arr;
}

template <class S>
S scalar_from(const json& j, const FieldDescriptor& fd) {
  if (j.is_string()) return scalar_traits<S>::parse(fd, j.get<std::string>());
  if (j.is_number_integer()) return scalar_traits<S>::parse(fd, j.dump());
  throw Error(ErrorCode::BadScalar, "scalar must be a string, got " + j.dump());
}

template <class S, std::size_t N>
std::array<S, N> scalar_array(const json& j, const FieldDescriptor& fd, const char* key) {
  if (!j.is_array() || j.size() != N)
    malformed(std::string("'") + key + "' must be an array of " + std::to_string(N) + " scalars");
  std::array<S, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = scalar_from<S>(j[i], fd);
  return out;
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) malformed(std::string("missing key '") + key + "'");
  return obj.at(key);
}

}  // namespace

FieldDescriptor peek_field(std::string_view json_text) {
  const json doc = parse_json(json_text);
  const json& field = member(doc, "field");
  if (!field.is_string()) malformed("'field' must be a string");
  return FieldDescriptor::parse(field.get<std::string>());
}

template <ExactScalar S>
std::string serialize(const BilinearDecomposition<S>& dec, const std::optional<Provenance<S>>& provenance) {
  if (!dec.descriptor.is_exact()) throw Error(ErrorCode::FloatDescriptor, "decomposition files are exact only");
  json doc;
  doc["format_version"] = "1";
  doc["field"] = dec.descriptor.to_string();
  doc["rank"] = dec.rank();
  json terms = json::array();
  for (const auto& t : dec.terms) {
    json term;
    term["u"] = scalars<S>(t.u);
    term["v"] = scalars<S>(t.v);
    term["W"] = scalars<S>(flatten(t.w));
    terms.push_back(std::move(term));
  }
  doc["terms"] = std::move(terms);
  if (provenance) {
    json prov;
    prov["D"] = scalars<S>(flatten(provenance->d));
    const std::array<S, 2> u{provenance->u(0), provenance->u(1)};
    prov["u_vector"] = scalars<S>(u);
    doc["provenance"] = std::move(prov);
  }
  return doc.dump(2) + "\n";
}

template <ExactScalar S>
DecompositionFile<S> parse_decomposition(std::string_view json_text) {
  const json doc = parse_json(json_text);
  const json& version = member(doc, "format_version");
  if (!(version.is_string() && version.get<std::string>() == "1"))
    malformed("unsupported format_version " + version.dump());
  const FieldDescriptor fd = peek_field(json_text);
  if (!fd.is_exact()) throw Error(ErrorCode::FloatDescriptor, "decomposition files are exact only");
  require_field<S>(fd);

  const json& rank = member(doc, "rank");
  const json& terms = member(doc, "terms");
  if (!rank.is_number_unsigned()) malformed("'rank' must be a non-negative integer");
  if (!terms.is_array()) malformed("'terms' must be an array");
  if (rank.get<std::size_t>() != terms.size())
    malformed("'rank' is " + rank.dump() + " but there are " + std::to_string(terms.size()) + " terms");

  DecompositionFile<S> file;
  file.decomposition.descriptor = fd;
  for (const json& t : terms) {
    BilinearTerm<S> term;
    term.u = scalar_array<S, 4>(member(t, "u"), fd, "u");
    term.v = scalar_array<S, 4>(member(t, "v"), fd, "v");
    const auto w = scalar_array<S, 4>(member(t, "W"), fd, "W");
    term.w = unflatten<S>(w);
    file.decomposition.terms.push_back(std::move(term));
  }
  if (doc.contains("provenance")) {
    const json& prov = doc.at("provenance");
    const auto d = scalar_array<S, 4>(member(prov, "D"), fd, "D");
    const auto u = scalar_array<S, 2>(member(prov, "u_vector"), fd, "u_vector");
    file.provenance = Provenance<S>{unflatten<S>(d), ColVec2<S>(u[0], u[1])};
  }
  return file;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) lines.pop_back();
  return lines;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

MatrixHeader peek_matrix_header(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) malformed("empty matrix file");
  const auto head = tokens_of(lines[0]);
  if (head.size() != 4 || head[0] != "n" || head[2] != "field")
    malformed("matrix header must read 'n <dim> field <descriptor>'");
  MatrixHeader h;
  try {
    std::size_t used = 0;
    h.n = std::stol(head[1], &used);
    if (used != head[1].size() || h.n < 1) malformed("bad dimension '" + head[1] + "'");
  } catch (const std::logic_error&) {
    malformed("bad dimension '" + head[1] + "'");
  }
  h.field = FieldDescriptor::parse(head[3]);
  return h;
}

template <FieldScalar S>
std::string format_matrix(const MatN<S>& m, const FieldDescriptor& field) {
  std::ostringstream out;
  out << "n " << m.rows() << " field " << field.to_string() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format(m(i, j));
    out << "\n";
  }
  return out.str();
}

template <FieldScalar S>
MatN<S> parse_matrix(std::string_view text) {
  const MatrixHeader h = peek_matrix_header(text);
  require_field<S>(h.field);
  const auto lines = lines_of(text);
  if (static_cast<Eigen::Index>(lines.size()) != h.n + 1)
    malformed("expected " + std::to_string(h.n) + " rows, found " + std::to_string(lines.size() - 1));
  MatN<S> m(h.n, h.n);
  for (Eigen::Index i = 0; i < h.n; ++i) {
    const auto toks = tokens_of(lines[static_cast<std::size_t>(i + 1)]);
    if (static_cast<Eigen::Index>(toks.size()) != h.n)
      malformed("row " + std::to_string(i + 1) + " has " + std::to_string(toks.size()) + " entries");
    for (Eigen::Index j = 0; j < h.n; ++j)
      m(i, j) = scalar_traits<S>::parse(h.field, toks[static_cast<std::size_t>(j)]);
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

std::string ms(const std::optional<double>& t) {
  if (!t) return "";
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << *t;
  return out.str();
}

}  // namespace

std::string format_bench_table(std::span<const BenchRow> rows) {
  std::ostringstream out;
  out << std::setw(8) << "n" << std::setw(16) << "strassen_mults" << std::setw(17) << "classical_mults"
      << std::setw(14) << "strassen_ms" << std::setw(14) << "classical_ms" << "\n";
  for (const auto& r : rows) {
    const std::string sm = r.strassen_ms ? ms(r.strassen_ms) : "-";
    const std::string cm = r.classical_ms ? ms(r.classical_ms) : "-";
    out << std::setw(8) << r.n << std::setw(16) << r.strassen_mults << std::setw(17) << r.classical_mults
        << std::setw(14) << sm << std::setw(14) << cm << "\n";
  }
  return out.str();
}

std::string format_bench_csv(std::span<const BenchRow> rows) {
  std::ostringstream out;
  out << "n,strassen_mults,classical_mults,strassen_ms,classical_ms\n";
  for (const auto& r : rows)
    out << r.n << "," << r.strassen_mults << "," << r.classical_mults << "," << ms(r.strassen_ms) << ","
        << ms(r.classical_ms) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

template <class S>
json value_json(const std::variant<std::monostate, S, Mat2<S>>& v) {
  if (const S* s = std::get_if<S>(&v)) return format(*s);
  if (const Mat2<S>* m = std::get_if<Mat2<S>>(&v)) return scalars<S>(flatten(*m));
  return nullptr;
}

template <class S>
std::string value_text(const std::variant<std::monostate, S, Mat2<S>>& v) {
  if (const S* s = std::get_if<S>(&v)) return format(*s);
  if (const Mat2<S>* m = std::get_if<Mat2<S>>(&v)) {
    const auto f = flatten(*m);
    return "[[" + format(f[0]) + ", " + format(f[1]) + "], [" + format(f[2]) + ", " + format(f[3]) + "]]";
  }
  return "-";
}

}  // namespace

template <ExactScalar S>
std::string format_report(const VerificationReport<S>& report, std::string_view unit) {
  std::ostringstream out;
  out << report.name << ": " << report.checks_run << " " << unit << ", " << (report.passed() ? "passed" : "FAILED");
  if (report.first_failure) {
    const auto& f = *report.first_failure;
    out << "\n  first failure: " << f.description << "\n  expected: " << value_text<S>(f.expected)
        << "\n  actual:   " << value_text<S>(f.actual);
  }
  return out.str();
}

template <ExactScalar S>
std::string report_json(const VerificationReport<S>& report) {
  json j;
  j["name"] = report.name;
  j["passed"] = report.passed();
  j["checks_run"] = report.checks_run;
  if (report.first_failure) {
    const auto& f = *report.first_failure;
    json ff;
    ff["description"] = f.description;
    ff["x_index"] = f.x_index;
    ff["y_index"] = f.y_index;
    ff["z_index"] = f.z_index;
    ff["expected"] = value_json<S>(f.expected);
    ff["actual"] = value_json<S>(f.actual);
    j["first_failure"] = std::move(ff);
  } else {
    j["first_failure"] = nullptr;
  }
  return j.dump();
}

#define STRASSEN_EXACT_IO(S)                                                                             \
  template std::string serialize<S>(const BilinearDecomposition<S>&, const std::optional<Provenance<S>>&); \
  template DecompositionFile<S> parse_decomposition<S>(std::string_view);                                \
  template std::string format_report<S>(const VerificationReport<S>&, std::string_view);                                  \
  template std::string report_json<S>(const VerificationReport<S>&);

#define STRASSEN_MATRIX_IO(S)                                                        \
  template std::string format_matrix<S>(const MatN<S>&, const FieldDescriptor&); \
  template MatN<S> parse_matrix<S>(std::string_view);

STRASSEN_EXACT_IO(Rational)
STRASSEN_EXACT_IO(Zp)
STRASSEN_MATRIX_IO(Rational)
STRASSEN_MATRIX_IO(Zp)
STRASSEN_MATRIX_IO(double)

}  // namespace strassen
