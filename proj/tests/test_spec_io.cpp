#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "padicres/errors.hpp"
#include "padicres/instances.hpp"
#include "padicres/report.hpp"
#include "padicres/spec_io.hpp"
#include "test_support.hpp"

using namespace padicres;
using padicres::testing::Rng;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

const char* kMinimal = R"({"prime": 3, "matrix": [["1", "1/2"], ["0", "-2"]], "declared_radius_exponent": 0})";

}  // namespace

TEST_CASE("minimal spec takes the documented defaults") {
  const SpecDocument d = parse_spec(kMinimal);
  CHECK(d.prime == 3);
  CHECK(d.precision == 64);
  CHECK(d.slack == 10);
  CHECK(d.backend == Backend::exact);
  CHECK(d.omega == 1);
  CHECK(d.n_max == 12);
  CHECK(d.k_max == 200);
  CHECK(d.seed == 0);
  CHECK(d.seminorms.empty());
  CHECK_FALSE(d.lambda_samples.has_value());
  CHECK(d.matrix[0][1] == mpq_class(1, 2));
  CHECK(d.matrix[1][1] == -2);
}

TEST_CASE("serialize_spec is canonical and round-trips") {
  SpecDocument d = parse_spec(kMinimal);
  d.seminorms = {{AbsExp{0}, AbsExp::neg_inf()}, {AbsExp{-1}, AbsExp{2}}};
  d.lambda_samples = std::vector<LambdaSample>{{1, 1}, {2, mpq_class(2, 5)}};
  d.omega = mpq_class(1, 3);
  const std::string text = serialize_spec(d);
  CHECK(parse_spec(text) == d);
  CHECK(serialize_spec(parse_spec(text)) == text);
  CHECK(text.back() == '\n');

  // Keys come out sorted regardless of input order.
  const auto j = nlohmann::json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(contains(text, "\"-inf\""));
  CHECK(contains(text, "\"1/3\""));
}

TEST_CASE("random specs round-trip") {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    SpecDocument d;
    d.prime = std::vector<std::uint32_t>{2, 3, 5, 7}[i % 4];
    const std::size_t dim = 1 + i % 4;
    d.matrix = rng.rational_matrix(dim, 20, 20);
    d.declared_radius_exponent = -static_cast<std::int64_t>(i % 3);
    d.n_max = 2 + i % 10;
    d.seed = rng.uniform(0, 1000);
    if (i % 2) d.backend = Backend::capped;
    CHECK(parse_spec(serialize_spec(d)) == d);
  }
}

TEST_CASE("syntax errors name line and column") {
  const std::string e = error_of("{\n  \"prime\": 2,\n  \"matrix\": [[\"1\"]\n}");
  CHECK(contains(e, "line 4"));
  CHECK(contains(e, "column"));
}

TEST_CASE("field errors name the offending path") {
  CHECK(contains(error_of(R"({"prime": 2, "matrix": [["1", "2"], ["3", "1/0"]], "declared_radius_exponent": 0})"),
                 "matrix[1][1]"));
  CHECK(contains(error_of(R"({"prime": 2, "matrix": [["1", "2"], ["3"]], "declared_radius_exponent": 0})"), "matrix"));
  CHECK(contains(error_of(R"({"prime": 4, "matrix": [["1"]], "declared_radius_exponent": 0})"), "prime"));
  CHECK(contains(error_of(R"({"prime": 2, "matrix": [["1"]]})"), "declared_radius_exponent"));
  CHECK(contains(error_of(R"({"prime": 2, "matrix": [["1"]], "declared_radius_exponent": 0, "colour": 1})"),
                 "colour"));
  CHECK(contains(error_of(R"({"prime": 2, "matrix": [["1"]], "declared_radius_exponent": 0, "slack": 64})"),
                 "slack"));
  CHECK(contains(error_of(R"({"prime": 2, "matrix": [["1"]], "declared_radius_exponent": 0,
                              "lambda_samples": [{"valuation": 1, "unit": "2"}]})"),
                 "lambda_samples[0]"));
  CHECK(contains(error_of(R"({"prime": 2, "matrix": [["1"]], "declared_radius_exponent": 0,
                              "seminorms": [["x"]]})"),
                 "seminorms[0][0]"));
  CHECK(contains(error_of(R"({"prime": 2, "matrix": [["1"]], "declared_radius_exponent": 0, "backend": "float"})"),
                 "backend"));
}

TEST_CASE("build_system validates against the system") {
  SpecDocument d = parse_spec(R"({"prime": 2, "matrix": [["1/2"]], "declared_radius_exponent": 0})");
  CHECK_THROWS_AS(build_system(d), HypothesisError);
  d.declared_radius_exponent = -1;
  CHECK(build_system(d).config.lambdas.size() == 4);  // m = 2, 3 survive |λ| < 2^-1
  d.matrix = {{mpq_class(1, 8)}};
  d.declared_radius_exponent = -3;
  CHECK_THROWS_AS(build_system(d), InvalidInput);  // no default grid point inside D(0, 1/8)
  d.lambda_samples = std::vector<LambdaSample>{{4, 1}};
  const BuiltSystem b = build_system(d);
  CHECK(b.config.lambdas.size() == 1);
  CHECK(b.config.lambdas[0].to_string() == "16");

  d.lambda_samples = std::vector<LambdaSample>{{3, 1}};
  CHECK_THROWS_AS(build_system(d), InvalidInput);  // |λ| = 1/8 is not inside D(0, 1/8)
  d.lambda_samples = std::vector<LambdaSample>{};
  CHECK_THROWS_AS(build_system(d), InvalidInput);
}

TEST_CASE("parse_params") {
  const auto p = parse_params("d=3,p=2,super=1/2:4");
  CHECK(p.at("d") == "3");
  CHECK(p.at("super") == "1/2:4");
  CHECK(parse_params("").empty());
  CHECK_THROWS_AS(parse_params("d"), InvalidInput);
}

TEST_CASE("generated instances") {
  const SpecDocument j = generate_instance("jordan", {{"d", "3"}, {"p", "5"}, {"eigen", "2"}});
  CHECK(j.matrix == std::vector<std::vector<mpq_class>>{{2, 1, 0}, {0, 2, 1}, {0, 0, 2}});
  CHECK(j.declared_radius_exponent == 0);

  const SpecDocument s = generate_instance("staircaseShift", {{"d", "3"}, {"p", "2"}, {"super", "1/2:4"}});
  CHECK(s.matrix[0][1] == mpq_class(1, 2));
  CHECK(s.matrix[1][2] == 4);
  CHECK(s.matrix[2][0] == 0);

  // diag(1/p) is analytic only on D(0, 1/p): the samples sit inside it.
  const SpecDocument u = generate_instance("diagonal", {{"p", "3"}, {"entries", "1/3:1"}});
  CHECK(u.declared_radius_exponent == -1);
  REQUIRE(u.lambda_samples.has_value());
  for (const auto& l : *u.lambda_samples) CHECK(l.valuation >= 2);
  CHECK_NOTHROW(build_system(u));

  // randomBounded entries are p-integral, so the oracle certifies boundedness.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SpecDocument r = generate_instance("randomBounded", {{"d", "3"}, {"p", "3"}, {"seed", std::to_string(seed)}});
    for (const auto& row : r.matrix)
      for (const auto& x : row) CHECK(x.get_den() % 3 != 0);
    CHECK(generate_instance("randomBounded", {{"d", "3"}, {"p", "3"}, {"seed", std::to_string(seed)}}) == r);
  }

  CHECK_THROWS_AS(generate_instance("mystery", {}), InvalidInput);
  CHECK_THROWS_AS(generate_instance("jordan", {{"d", "2"}, {"p", "6"}, {"eigen", "1"}}), InvalidInput);
  CHECK_THROWS_AS(generate_instance("staircaseShift", {{"d", "3"}, {"p", "2"}, {"super", "1"}}), InvalidInput);
}

TEST_CASE("run_and_report: deterministic, sorted, digest over the effective spec") {
  const std::string spec = serialize_spec(generate_instance("jordan", {{"d", "2"}, {"p", "3"}, {"eigen", "1"}}));
  const RunResult a = run_and_report(spec, {});
  const RunResult b = run_and_report(spec, {});
  CHECK(a.exit_code == kExitPass);
  CHECK(a.report == b.report);

  const auto j = nlohmann::json::parse(a.report);
  CHECK(j["input_digest"] == "sha256:" + sha256_hex(spec));
  CHECK(j["verdicts"]["agreement"] == true);
  CHECK(j["status"] == "pass");

  // Whitespace in the input does not change the digest; an override does.
  const auto reformatted = nlohmann::json::parse(spec).dump();
  CHECK(nlohmann::json::parse(run_and_report(reformatted, {}).report)["input_digest"] == j["input_digest"]);
  RunOverrides o;
  o.n_max = 6;
  const auto k = nlohmann::json::parse(run_and_report(spec, o).report);
  CHECK(k["input_digest"] != j["input_digest"]);
  CHECK(k["system"]["n_max"] == 6);
}

TEST_CASE("sha256_hex known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("run_and_report maps failures to exit codes") {
  const RunResult bad = run_and_report("not json", {});
  CHECK(bad.exit_code == kExitInvalid);
  const auto j = nlohmann::json::parse(bad.report);
  CHECK(j["status"] == "invalid_input");
  CHECK(j["errors"].size() == 1);
  CHECK(j["input_digest"] == "sha256:" + sha256_hex("not json"));

  const RunResult rejected =
      run_and_report(R"({"prime": 2, "matrix": [["1/2"]], "declared_radius_exponent": 0})", {});
  CHECK(rejected.exit_code == kExitInvalid);
  CHECK(contains(rejected.report, "\"hypothesis\""));
}
