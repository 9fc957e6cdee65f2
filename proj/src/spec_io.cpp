#include "padicres/spec_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

#include "padicres/errors.hpp"

namespace padicres {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys{"backend",    "declared_radius_exponent", "k_max", "lambda_samples", "matrix",
                                       "n_max",      "omega",                    "precision", "prime", "scaling_budget",
                                       "seed",       "seminorms",                "slack"};

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw InvalidInput("spec field '" + path + "': " + what);
}

std::string location_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::int64_t get_int(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) field_error(path, "integer out of range");
    return static_cast<std::int64_t>(u);
  }
  field_error(path, "expected an integer");
}

std::int64_t get_int_in(const json& v, const std::string& path, std::int64_t lo, std::int64_t hi) {
  const std::int64_t x = get_int(v, path);
  if (x < lo || x > hi)
    field_error(path, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

mpq_class get_rational(const json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a rational string \"num\" or \"num/den\"");
  try {
    return Scalar::parse(v.get<std::string>(), Field::exact(2)).rational();
  } catch (const InvalidInput& e) {
    field_error(path, e.what());
  }
}

AbsExp get_weight(const json& v, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "-inf") return AbsExp::neg_inf();
    field_error(path, "expected an integer exponent or \"-inf\"");
  }
  return AbsExp{get_int_in(v, path, -1000000, 1000000)};
}

json rational_json(const mpq_class& q) { return q.get_str(); }

json weight_json(const AbsExp& e) {
  if (e.is_neg_inf()) return "-inf";
  return e.value();
}

}  // namespace

SpecDocument parse_spec(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput("spec is not valid JSON at " + location_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  if (!root.is_object()) throw InvalidInput("spec must be a JSON object");
  for (const auto& [key, value] : root.items())
    if (!kKnownKeys.contains(key)) field_error(key, "unknown field");
  for (const char* key : {"prime", "matrix", "declared_radius_exponent"})
    if (!root.contains(key)) field_error(key, "required field is missing");

  SpecDocument doc;
  doc.prime = static_cast<std::uint32_t>(get_int_in(root["prime"], "prime", 2, 1000003));
  if (!is_prime(doc.prime)) field_error("prime", std::to_string(doc.prime) + " is not prime");
  if (root.contains("precision")) doc.precision = static_cast<int>(get_int_in(root["precision"], "precision", 1, 100000));
  if (root.contains("slack")) doc.slack = static_cast<int>(get_int_in(root["slack"], "slack", 0, 100000));
  if (doc.slack >= doc.precision) field_error("slack", "must be smaller than precision");
  if (root.contains("backend")) {
    const json& b = root["backend"];
    if (b == "exact") doc.backend = Backend::exact;
    else if (b == "capped") doc.backend = Backend::capped;
    else field_error("backend", "expected \"exact\" or \"capped\"");
  }

  const json& m = root["matrix"];
  if (!m.is_array() || m.empty()) field_error("matrix", "expected a nonempty array of rows");
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string row_path = "matrix[" + std::to_string(i) + "]";
    if (!m[i].is_array()) field_error(row_path, "expected an array of rational strings");
    if (m[i].size() != m.size())
      field_error(row_path, "has " + std::to_string(m[i].size()) + " entries, matrix must be " +
                                std::to_string(m.size()) + "x" + std::to_string(m.size()));
    std::vector<mpq_class> row;
    for (std::size_t j = 0; j < m[i].size(); ++j)
      row.push_back(get_rational(m[i][j], row_path + "[" + std::to_string(j) + "]"));
    doc.matrix.push_back(std::move(row));
  }

  if (root.contains("omega")) doc.omega = get_rational(root["omega"], "omega");
  doc.declared_radius_exponent =
      get_int_in(root["declared_radius_exponent"], "declared_radius_exponent", -1000000, 1000000);

  if (root.contains("seminorms")) {
    const json& s = root["seminorms"];
    if (!s.is_array() || s.empty()) field_error("seminorms", "expected a nonempty array of weight rows");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string path = "seminorms[" + std::to_string(i) + "]";
      if (!s[i].is_array() || s[i].size() != m.size())
        field_error(path, "expected " + std::to_string(m.size()) + " weight exponents");
      std::vector<AbsExp> w;
      for (std::size_t j = 0; j < s[i].size(); ++j) w.push_back(get_weight(s[i][j], path + "[" + std::to_string(j) + "]"));
      doc.seminorms.push_back(std::move(w));
    }
  }

  if (root.contains("lambda_samples")) {
    const json& ls = root["lambda_samples"];
    if (!ls.is_array()) field_error("lambda_samples", "expected an array");
    std::vector<LambdaSample> samples;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const std::string path = "lambda_samples[" + std::to_string(i) + "]";
      if (!ls[i].is_object()) field_error(path, "expected {\"valuation\": int, \"unit\": rational}");
      for (const auto& [key, value] : ls[i].items())
        if (key != "valuation" && key != "unit") field_error(path + "." + key, "unknown field");
      if (!ls[i].contains("valuation") || !ls[i].contains("unit"))
        field_error(path, "expected {\"valuation\": int, \"unit\": rational}");
      LambdaSample sample;
      sample.valuation = get_int_in(ls[i]["valuation"], path + ".valuation", -100000, 100000);
      sample.unit = get_rational(ls[i]["unit"], path + ".unit");
      if (sample.unit == 0 || valuation_q(sample.unit, doc.prime) != 0)
        field_error(path + ".unit", "must be a " + std::to_string(doc.prime) + "-adic unit");
      samples.push_back(std::move(sample));
    }
    doc.lambda_samples = std::move(samples);
  }

  if (root.contains("n_max")) doc.n_max = static_cast<std::uint32_t>(get_int_in(root["n_max"], "n_max", 2, 1000));
  if (root.contains("k_max")) doc.k_max = get_int_in(root["k_max"], "k_max", 1, 100000);
  if (root.contains("seed")) {
    const json& s = root["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      field_error("seed", "expected a nonnegative integer");
    doc.seed = s.get<std::uint64_t>();
  }
  if (root.contains("scaling_budget"))
    doc.scaling_budget = get_int_in(root["scaling_budget"], "scaling_budget", 0, 1000000);
  return doc;
}

std::string serialize_spec(const SpecDocument& doc) {
  json root;
  root["prime"] = doc.prime;
  root["precision"] = doc.precision;
  root["slack"] = doc.slack;
  root["backend"] = to_string(doc.backend);
  json m = json::array();
  for (const auto& row : doc.matrix) {
    json r = json::array();
    for (const auto& x : row) r.push_back(rational_json(x));
    m.push_back(std::move(r));
  }
  root["matrix"] = std::move(m);
  root["omega"] = rational_json(doc.omega);
  root["declared_radius_exponent"] = doc.declared_radius_exponent;
  if (!doc.seminorms.empty()) {
    json s = json::array();
    for (const auto& w : doc.seminorms) {
      json row = json::array();
      for (const auto& e : w) row.push_back(weight_json(e));
      s.push_back(std::move(row));
    }
    root["seminorms"] = std::move(s);
  }
  if (doc.lambda_samples) {
    json ls = json::array();
    for (const auto& sample : *doc.lambda_samples)
      ls.push_back({{"valuation", sample.valuation}, {"unit", rational_json(sample.unit)}});
    root["lambda_samples"] = std::move(ls);
  }
  root["n_max"] = doc.n_max;
  root["k_max"] = doc.k_max;
  root["seed"] = doc.seed;
  root["scaling_budget"] = doc.scaling_budget;
  return root.dump(2) + "\n";
}

BuiltSystem build_system(const SpecDocument& doc) {
  const Field f = doc.backend == Backend::exact ? Field::exact(doc.prime) : Field::capped(doc.prime, doc.precision);
  f.validate();
  const std::size_t d = doc.matrix.size();
  if (d == 0) field_error("matrix", "is empty");
  for (const auto& row : doc.matrix)
    if (row.size() != d) field_error("matrix", "must be square");
  SeminormFamily seminorms = SeminormFamily::sup(d);
  if (!doc.seminorms.empty()) seminorms = SeminormFamily{d, doc.seminorms};
  if (doc.omega == 0) field_error("omega", "must be nonzero (hypothesis omega in C_p^*)");

  OperatorSystem system = OperatorSystem::create(Matrix::from_rationals(doc.matrix, f), Scalar::from_rational(doc.omega, f),
                                                 doc.declared_radius_exponent, std::move(seminorms), doc.k_max);
  CheckConfig config;
  config.n_max = doc.n_max;
  config.k_max = doc.k_max;
  config.budget = PrecisionBudget{doc.precision, doc.slack};
  config.scaling_budget = doc.scaling_budget;
  config.seed = doc.seed;
  if (doc.lambda_samples) {
    if (doc.lambda_samples->empty()) field_error("lambda_samples", "is empty: no point of D(0,p^r)* to test");
    for (const auto& s : *doc.lambda_samples)
      config.lambdas.push_back(Scalar::prime_power(s.valuation, f) * Scalar::from_rational(s.unit, f));
  } else {
    config.lambdas = default_lambda_grid(system);
    if (config.lambdas.empty())
      throw InvalidInput("default lambda grid is empty: no p^m*u with m = 1..3 lies in D(0," + std::to_string(doc.prime) +
                         "^" + std::to_string(doc.declared_radius_exponent) + ")*; supply lambda_samples");
  }
  config.validate(system);
  return {std::move(system), std::move(config)};
}

}  // namespace padicres
