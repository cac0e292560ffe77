#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "strassen/io.hpp"
#include "support/oracle.hpp"

using namespace strassen;

namespace {

const FieldDescriptor Q = FieldDescriptor::rational();

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

std::string companion_file() {
  const auto run = derive<Rational>(Q, std::nullopt, std::nullopt);
  return serialize(run.decomposition, std::optional(Provenance<Rational>{run.rotation.matrix(), run.perp.u}));
}

}  // namespace

TEST(DecompositionFile, CompanionDecompositionLayout) {
  const auto doc = nlohmann::ordered_json::parse(companion_file());
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"format_version", "field", "rank", "terms", "provenance"}));
  EXPECT_EQ(doc["format_version"], "1");
  EXPECT_EQ(doc["field"], "rational");
  EXPECT_EQ(doc["rank"], 7);
  EXPECT_EQ(doc["terms"][0]["W"], (nlohmann::json::array({"1", "0", "0", "1"})));
  EXPECT_EQ(doc["provenance"]["D"], (nlohmann::json::array({"0", "-1", "1", "-1"})));
  EXPECT_EQ(doc["provenance"]["u_vector"], (nlohmann::json::array({"1", "0"})));
}

TEST(DecompositionFile, RoundTripWithProvenance) {
  const auto text = companion_file();
  const auto file = parse_decomposition<Rational>(text);
  EXPECT_FALSE(file.nonstandard_rank());
  ASSERT_TRUE(file.provenance.has_value());
  EXPECT_EQ(serialize(file.decomposition, file.provenance), text);
  EXPECT_EQ(peek_field(text), Q);
}

TEST(DecompositionFile, GF3ScalarsAreResidues) {
  const auto f3 = FieldDescriptor::prime_field(3);
  const auto text = serialize(derive<Zp>(f3, std::nullopt, std::nullopt).decomposition);
  const auto doc = nlohmann::json::parse(text);
  EXPECT_EQ(doc["field"], "gf(3)");
  for (const auto& t : doc["terms"])
    for (const char* key : {"u", "v", "W"})
      for (const auto& s : t[key]) EXPECT_TRUE(s == "0" || s == "1" || s == "2") << s;
  EXPECT_FALSE(doc.contains("provenance"));
}

TEST(DecompositionFile, RankSixParsesFlagged) {
  auto doc = nlohmann::ordered_json::parse(companion_file());
  doc["terms"].erase(doc["terms"].size() - 1);
  doc["rank"] = 6;
  const auto file = parse_decomposition<Rational>(doc.dump());
  EXPECT_TRUE(file.nonstandard_rank());
  EXPECT_EQ(file.decomposition.rank(), 6u);
}

TEST(DecompositionFile, Errors) {
  const auto f7 = FieldDescriptor::prime_field(7);
  auto gf7 = nlohmann::ordered_json::parse(serialize(derive<Zp>(f7, std::nullopt, std::nullopt).decomposition));
  gf7["terms"][0]["u"][0] = "7";
  EXPECT_EQ(code_of([&] { (void)parse_decomposition<Zp>(gf7.dump()); }), ErrorCode::BadScalar);

  auto q = nlohmann::ordered_json::parse(companion_file());
  auto unreduced = q;
  unreduced["terms"][0]["u"][0] = "2/4";
  EXPECT_EQ(code_of([&] { (void)parse_decomposition<Rational>(unreduced.dump()); }), ErrorCode::BadScalar);
  auto wrong_rank = q;
  wrong_rank["rank"] = 5;
  EXPECT_EQ(code_of([&] { (void)parse_decomposition<Rational>(wrong_rank.dump()); }), ErrorCode::MalformedFile);
  auto short_form = q;
  short_form["terms"][0]["v"].erase(0);
  EXPECT_EQ(code_of([&] { (void)parse_decomposition<Rational>(short_form.dump()); }), ErrorCode::MalformedFile);
  auto version = q;
  version["format_version"] = "2";
  EXPECT_EQ(code_of([&] { (void)parse_decomposition<Rational>(version.dump()); }), ErrorCode::MalformedFile);
  auto floaty = q;
  floaty["field"] = "float64";
  EXPECT_EQ(code_of([&] { (void)parse_decomposition<Rational>(floaty.dump()); }), ErrorCode::FloatDescriptor);
  EXPECT_EQ(code_of([&] { (void)parse_decomposition<Zp>(q.dump()); }), ErrorCode::DescriptorMismatch);
  EXPECT_EQ(code_of([] { (void)parse_decomposition<Rational>("{not json"); }), ErrorCode::MalformedFile);
  EXPECT_EQ(code_of([] { (void)peek_field("{}"); }), ErrorCode::MalformedFile);
}

TEST(DecompositionFile, FloatDescriptorRefused) {
  BilinearDecomposition<Rational> dec;
  dec.descriptor = FieldDescriptor::float64();
  EXPECT_EQ(code_of([&] { (void)serialize(dec); }), ErrorCode::FloatDescriptor);
}

TEST(DecompositionFile, RoundTripRandomAcrossFields) {
  std::mt19937_64 rng(10);
  auto run = [&]<class S>(const FieldDescriptor& fd) {
    for (int i = 0; i < 10; ++i) {
      const auto rot = validate_rotation(oracle::random_rotation_matrix<S>(fd, rng));
      const auto pp = perp_vector(rot, oracle::random_non_eigenvector<S>(rot.matrix(), fd, rng));
      const auto dec = derive_decomposition(rot, pp);
      const auto text = serialize(dec, std::optional(Provenance<S>{rot.matrix(), pp.u}));
      const auto back = parse_decomposition<S>(text);
      ASSERT_TRUE(back.decomposition == dec);
      ASSERT_EQ(serialize(back.decomposition, back.provenance), text);
    }
  };
  run.template operator()<Rational>(Q);
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) run.template operator()<Zp>(FieldDescriptor::prime_field(p));
}

TEST(MatrixFile, FormatAndParse) {
  const auto f5 = FieldDescriptor::prime_field(5);
  const std::string text = "n 2 field gf(5)\n1 2\n3 4\n";
  const auto m = parse_matrix<Zp>(text);
  EXPECT_EQ(m(1, 0), Zp(3, 5));
  EXPECT_EQ(format_matrix(m, f5), text);
  EXPECT_EQ(peek_matrix_header(text).n, 2);

  const std::string q = "n 1 field rational\n-1/2\n";
  EXPECT_EQ(parse_matrix<Rational>(q)(0, 0), Rational(-1, 2));
  EXPECT_EQ(format_matrix(parse_matrix<Rational>(q), Q), q);

  EXPECT_EQ(parse_matrix<double>("n 1 field float64\n0.25\n")(0, 0), 0.25);
}

TEST(MatrixFile, Errors) {
  EXPECT_EQ(code_of([] { (void)parse_matrix<Zp>("n 2 field gf(5)\n1 2\n"); }), ErrorCode::MalformedFile);
  EXPECT_EQ(code_of([] { (void)parse_matrix<Zp>("n 2 field gf(5)\n1 2\n3\n"); }), ErrorCode::MalformedFile);
  EXPECT_EQ(code_of([] { (void)parse_matrix<Zp>("n 1 field gf(5)\n5\n"); }), ErrorCode::BadScalar);
  EXPECT_EQ(code_of([] { (void)parse_matrix<Zp>("m 1 field gf(5)\n1\n"); }), ErrorCode::MalformedFile);
  EXPECT_EQ(code_of([] { (void)parse_matrix<Zp>("n x field gf(5)\n1\n"); }), ErrorCode::MalformedFile);
  EXPECT_EQ(code_of([] { (void)parse_matrix<Zp>("n 1 field rational\n1\n"); }), ErrorCode::DescriptorMismatch);
  EXPECT_EQ(code_of([] { (void)parse_matrix<Zp>("n 1 field gf(6)\n1\n"); }), ErrorCode::NotPrime);
}

TEST(BenchOutput, CsvColumns) {
  std::vector<BenchRow> rows{{2, 7, 8, std::nullopt, std::nullopt}, {4, 49, 64, 1.5, 2.25}};
  EXPECT_EQ(format_bench_csv(rows),
            "n,strassen_mults,classical_mults,strassen_ms,classical_ms\n2,7,8,,\n4,49,64,1.500,2.250\n");
  const auto table = format_bench_table(rows);
  EXPECT_NE(table.find("strassen_mults"), std::string::npos);
  EXPECT_NE(table.find("49"), std::string::npos);
}

TEST(ReportOutput, TextAndJson) {
  auto dec = derive<Rational>(Q, std::nullopt, std::nullopt).decomposition;
  EXPECT_EQ(format_report(verify_bilinear_identity(dec)), "bilinear identity: 16 checks, passed");
  dec.terms[0].w(0, 0) += Rational(1);
  const auto bad = verify_bilinear_identity(dec);
  const auto j = nlohmann::json::parse(report_json(bad));
  EXPECT_EQ(j["passed"], false);
  EXPECT_EQ(j["first_failure"]["x_index"], 0);
  EXPECT_EQ(j["first_failure"]["expected"], (nlohmann::json::array({"1", "0", "0", "0"})));
  EXPECT_NE(format_report(bad).find("FAILED"), std::string::npos);
}
