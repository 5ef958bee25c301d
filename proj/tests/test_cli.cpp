#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "apeq/cli.hpp"
#include "apeq/corpus.hpp"
#include "apeq/dsl.hpp"
#include "apeq/serialize.hpp"

using namespace apeq;

namespace {

constexpr const char* kLog2 = "0.693147180559945309417232121458";

struct CliResult {
  int code;
  Json json;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, Json::parse(out.str()), err.str()};
}

std::string write_temp(const std::string& text) {
  std::string path = "test_cli_input.apeq";
  std::ofstream f(path);
  f << text;
  return path;
}

}  // namespace

TEST_CASE("parse: exact two-term sum with half-odd exponents") {
  auto ws = parse("sum f = (1,0)*exp(3/2*s) + (1,1/2)*exp(19/6*s);");
  REQUIRE(ws.sums.size() == 1);
  const auto& f = ws.sums[0];
  CHECK(f.name() == "f");
  CHECK(f.mode() == CoeffMode::Exact);
  REQUIRE(f.size() == 2);
  CHECK(f.terms()[0].exponent.coords()(0) == make_rat(3, 2));
  CHECK(f.terms()[0].exact.phase_turns == 0);
  CHECK(f.terms()[1].exponent.coords()(0) == make_rat(19, 6));
  CHECK(f.terms()[1].exact.phase_turns == make_rat(1, 2));
  CHECK(ws.warnings.empty());
}

TEST_CASE("parse: declared symbol in a negative linear form") {
  auto ws = parse(std::string("symbol L2 = ") + kLog2 +
                  "; sum g = (1,0)*exp(-1*L2*s);");
  REQUIRE(ws.sums.size() == 1);
  const auto& g = ws.sums[0];
  REQUIRE(g.size() == 1);
  REQUIRE(ws.table->size() == 2);
  CHECK(ws.table->name(1) == "L2");
  CHECK(g.terms()[0].exponent.coords()(0) == 0);
  CHECK(g.terms()[0].exponent.coords()(1) == -1);
  // the numeric value of the exponent tracks -log 2
  CHECK(g.terms()[0].exponent.value_double() == doctest::Approx(-0.6931471805599453));
}

TEST_CASE("parse: multi-part linear forms combine unit and symbol parts") {
  auto ws = parse(std::string("symbol L2 = ") + kLog2 +
                  "; sum r = (1,0)*exp(1 - 1/2*L2*s) + (2,0)*exp(0*s);");
  const auto& r = ws.sums[0];
  REQUIRE(r.size() == 2);
  CHECK(r.terms()[0].exponent.coords()(0) == 1);
  CHECK(r.terms()[0].exponent.coords()(1) == make_rat(-1, 2));
  CHECK(r.terms()[1].exponent.coords()(0) == 0);
  CHECK(r.terms()[1].exponent.coords()(1) == 0);
}

TEST_CASE("parse: numeric coefficients and mode mixing") {
  auto ws = parse("sum n = <1.5,0>*exp(1*s) + <0,2>*exp(2*s);");
  CHECK(ws.sums[0].mode() == CoeffMode::Numeric);
  CHECK(ws.sums[0].terms()[0].numeric == std::complex<double>(1.5, 0.0));
  CHECK(ws.sums[0].terms()[1].numeric == std::complex<double>(0.0, 2.0));
  CHECK_THROWS_AS(parse("sum m = (1,0)*exp(1*s) + <1,0>*exp(2*s);"),
                  ParseError);
}

TEST_CASE("parse: errors carry positions; duplicates and unknowns rejected") {
  // duplicate exponent within a sum
  CHECK_THROWS_AS(parse("sum h = (1,0)*exp(1*s) + (1,0)*exp(1*s);"), ParseError);
  // undeclared symbol
  try {
    parse("sum f = (1,0)*exp(2*LX*s);");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column > 1);
    CHECK(std::string(e.what()).find("LX") != std::string::npos);
  }
  // syntax error on a later line reports that line
  try {
    parse("sum f = (1,0)*exp(1*s);\nsum g = (1,0 exp(1*s);");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  // duplicate sum names violate the workspace invariant
  CHECK_THROWS_AS(parse("sum f = (1,0)*exp(1*s); sum f = (1,0)*exp(2*s);"),
                  ParseError);
  CHECK_THROWS_AS(parse(std::string("symbol A = ") + kLog2 + "; symbol A = " +
                        kLog2 + ";"),
                  ParseError);
}

TEST_CASE("parse: short symbol literals warn but do not fail") {
  auto ws = parse("symbol L = 1.41421; sum f = (1,0)*exp(1*L*s);");
  REQUIRE(ws.warnings.size() == 1);
  CHECK(ws.warnings[0].message.find("30 digits") != std::string::npos);
  CHECK(ws.sums.size() == 1);
}

TEST_CASE("parse after pretty_print is the identity on the workspace") {
  auto ws = parse(std::string("symbol L2 = ") + kLog2 +
                  ";\n"
                  "sum f = (1,0)*exp(3/2*s) + (2,-1/4)*exp(1 - 1/2*L2*s);\n"
                  "sum n = <1.5,-2.25>*exp(1*s) + <0.1,0>*exp(0*s);\n");
  std::string printed = pretty_print(ws);
  auto ws2 = parse(printed);
  CHECK(pretty_print(ws2) == printed);
  REQUIRE(ws2.sums.size() == ws.sums.size());
  REQUIRE(ws2.table->size() == ws.table->size());
  for (Eigen::Index i = 0; i < ws.table->size(); ++i) {
    CHECK(ws2.table->name(i) == ws.table->name(i));
    CHECK(ws2.table->value_text(i) == ws.table->value_text(i));
  }
  for (size_t k = 0; k < ws.sums.size(); ++k) {
    const auto &a = ws.sums[k], &b = ws2.sums[k];
    CHECK(a.name() == b.name());
    CHECK(a.mode() == b.mode());
    REQUIRE(a.size() == b.size());
    for (size_t j = 0; j < a.size(); ++j) {
      CHECK(a.terms()[j].exponent.coords() == b.terms()[j].exponent.coords());
      if (a.mode() == CoeffMode::Exact)
        CHECK(a.terms()[j].exact == b.terms()[j].exact);
      else
        CHECK(a.terms()[j].numeric == b.terms()[j].numeric);
    }
  }
}

TEST_CASE("serialize: rationals round-trip and negative turns normalize") {
  CHECK(rat_to_json(make_rat(3, 2)) == Json("3/2"));
  CHECK(rat_from_json(Json("3/2"), "/x") == make_rat(3, 2));
  CHECK(rat_from_json(Json("-1/4"), "/x") == make_rat(-1, 4));
  // phases normalize into [0,1) on construction
  CHECK(ExactCoefficient(Rat(1), make_rat(-1, 4)).phase_turns == make_rat(3, 4));
  CHECK_THROWS_AS(rat_from_json(Json(12), "/x"), SchemaError);
  try {
    rat_from_json(Json("a/b"), "/report/q/3");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path == "/report/q/3");
  }
}

TEST_CASE("serialize: exact sums round-trip losslessly") {
  auto ws = parse(std::string("symbol L2 = ") + kLog2 +
                  "; sum f = (1,0)*exp(3/2*s) + (2,3/4)*exp(-1*L2*s);");
  const auto& f = ws.sums[0];
  Json j = sum_to_json(f);
  ExponentialSum g = sum_from_json(j);
  CHECK(sum_to_json(g) == j);
  // shared-table variant reuses the given instance
  ExponentialSum h = sum_from_json(j, ws.table);
  CHECK(h.table() == ws.table);
  CHECK(sum_to_json(h) == j);
  // verdicts require a common table; the round-tripped sum provides one
  auto v = star_equivalent(f, h);
  CHECK(v.equivalent);

  Json broken = j;
  broken["terms"][0].erase("modulus");
  CHECK_THROWS_AS(sum_from_json(broken), SchemaError);
  Json wrong_version = j;
  wrong_version["schema_version"] = "2";
  CHECK_THROWS_AS(sum_from_json(wrong_version), SchemaError);
}

TEST_CASE("serialize: verdicts round-trip and still verify") {
  auto ws = parse(
      "sum f = (1,0)*exp(1*s) + (1,0)*exp(2*s);"
      "sum g = (1,1/2)*exp(1*s) + (1,0)*exp(2*s);"
      "sum b = (1,1/4)*exp(1*s) + (1,0)*exp(2*s);"
      "sum m = (2,0)*exp(1*s) + (1,0)*exp(2*s);");
  const auto &f = ws.sums[0], &g = ws.sums[1], &b = ws.sums[2], &m = ws.sums[3];
  for (const auto* other : {&g, &b, &m}) {
    auto v = star_equivalent(f, *other);
    auto v2 = verdict_from_json(verdict_to_json(v), ws.table);
    CHECK(v2.equivalent == v.equivalent);
    CHECK(verify_verdict(v2, f, *other));
    CHECK(verdict_to_json(v2) == verdict_to_json(v));
  }
}

TEST_CASE("cli: equiv exit codes track the verdict") {
  std::string path = write_temp(
      "sum f = (1,0)*exp(1*s) + (1,0)*exp(2*s);\n"
      "sum g = (1,1/2)*exp(1*s) + (1,0)*exp(2*s);\n"
      "sum b = (1,1/4)*exp(1*s) + (1,0)*exp(2*s);\n");
  auto eq = run_cli({"equiv", path, "f", "g"});
  CHECK(eq.code == cli::kOk);
  CHECK(eq.json["result"]["verdict"]["equivalent"] == true);
  CHECK(eq.json["result"]["verified"] == true);
  CHECK(eq.json["schema_version"] == "1");

  auto ne = run_cli({"equiv", path, "f", "b"});
  CHECK(ne.code == cli::kNegative);
  CHECK(ne.json["result"]["verdict"]["equivalent"] == false);
  CHECK(ne.json["result"]["verdict"].contains("certificate"));

  auto bohr = run_cli({"equiv", path, "f", "g", "--definition", "bohr"});
  CHECK(bohr.code == cli::kOk);
  CHECK(bohr.json["result"]["definition"] == "bohr");

  auto traced = run_cli({"equiv", path, "f", "b", "--trace", "2"});
  CHECK(traced.code == cli::kNegative);
  REQUIRE(traced.json["result"]["trace"].size() == 2);
  CHECK(traced.json["result"]["trace"][0]["verdict"]["equivalent"] == true);
  CHECK(traced.json["result"]["trace"][1]["verdict"]["equivalent"] == false);
}

TEST_CASE("cli: basis commands and usage errors") {
  std::string path = write_temp("sum f = (1,0)*exp(3/2*s);\n");
  auto basis = run_cli({"basis", path, "f"});
  CHECK(basis.code == cli::kOk);
  CHECK(basis.json["result"]["basis"]["basis"].size() == 1);
  auto ibasis = run_cli({"integral-basis", path, "f"});
  CHECK(ibasis.code == cli::kOk);
  CHECK(ibasis.json["result"]["integral_basis"]["basis"].size() == 1);

  CHECK(run_cli({"equiv", path, "f", "nosuch"}).code == cli::kUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
  CHECK(run_cli({"basis", "no_such_file.apeq", "f"}).code == cli::kUsage);
  auto parse_err = run_cli({"basis", write_temp("sum f = ;"), "f"});
  CHECK(parse_err.code == cli::kUsage);
  CHECK(parse_err.json["result"]["kind"] == "parse");
}

TEST_CASE("cli: numeric commands emit well-formed reports") {
  std::string path = write_temp(
      "sum f = (2,0)*exp(3*s);\n"
      "sum p = (1,0)*exp(1*s);\n");
  auto mean = run_cli({"mean", path, "f", "--sigma", "0", "--lambda", "3",
                       "--T", "100"});
  CHECK(mean.code == cli::kOk);
  CHECK(std::abs(mean.json["result"]["value"][0].get<double>() - 2.0) < 0.05);

  auto bf = run_cli({"bf", path, "f", "--orders", "4"});
  CHECK(bf.code == cli::kOk);
  CHECK(bf.json["result"]["weights"][0] == "3/4");

  auto ap = run_cli({"almost-periods", path, "p", "--eps", "0.01",
                     "--sigma-lo", "-1", "--sigma-hi", "0", "--tmax", "20"});
  CHECK(ap.code == cli::kOk);
  double tau = ap.json["result"]["periods"][0]["tau"].get<double>();
  CHECK(std::abs(tau - 6.283185307179586) < 1e-6);

  std::string pair = write_temp(
      "sum f = (1,0)*exp(1*s) + (1,0)*exp(2*s);\n"
      "sum g = (1,1/2)*exp(1*s) + (1,0)*exp(2*s);\n");
  auto values = run_cli({"values", pair, "f", "g", "--sigma-lo", "-1",
                         "--sigma-hi", "1", "--samples", "5", "--seed", "7"});
  CHECK(values.code == cli::kOk);
  CHECK(values.json["result"]["fraction_f1_in_f2"] == 1.0);
  CHECK(values.json["result"]["fraction_f2_in_f1"] == 1.0);
}

TEST_CASE("cli: corpus list and per-entry exit codes match the verdicts") {
  auto list = run_cli({"corpus", "list"});
  CHECK(list.code == cli::kOk);
  REQUIRE(list.json["result"]["entries"].size() == corpus().size());
  CHECK(corpus_find("lambda0_pair_n50") != nullptr);
  CHECK(corpus_find("missing") == nullptr);
  CHECK(run_cli({"corpus", "run", "missing"}).code == cli::kUsage);

  for (const auto& e : corpus()) {
    auto r = run_cli({"corpus", "run", e.name});
    bool equivalent = r.json["result"]["verdict"]["equivalent"].get<bool>();
    CHECK(r.json["result"]["verified"] == true);
    CHECK(r.code == (equivalent ? cli::kOk : cli::kNegative));
  }

  // the curated pairs land where the write-ups say they do
  auto remark = run_cli({"corpus", "run", "remark_pair"});
  CHECK(remark.code == cli::kNegative);
  CHECK(remark.json["result"]["verdict"]["modulus_mismatch"] == 0);
  auto twist = run_cli({"corpus", "run", "twist_pair"});
  CHECK(twist.code == cli::kNegative);
  CHECK(twist.json["result"]["verdict"].contains("certificate"));
  for (const char* name :
       {"lambda0_pair_n50", "lambda0_pair_n3", "sign_pair", "prime_log_pair"})
    CHECK(run_cli({"corpus", "run", name}).code == cli::kOk);
}
