#include "padicres/instances.hpp"

#include <random>
#include <set>
#include <sstream>

#include "padicres/errors.hpp"

namespace padicres {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

const std::string& require(const InstanceParams& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) throw InvalidInput("missing parameter '" + key + "'");
  return it->second;
}

std::int64_t int_param(const InstanceParams& params, const std::string& key, std::int64_t lo, std::int64_t hi) {
  const std::string& v = require(params, key);
  std::size_t used = 0;
  std::int64_t x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw InvalidInput("parameter '" + key + "' is not an integer: '" + v + "'");
  if (x < lo || x > hi)
    throw InvalidInput("parameter '" + key + "' = " + v + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

mpq_class rational_param(const std::string& key, const std::string& v) {
  try {
    return Scalar::parse(v, Field::exact(2)).rational();
  } catch (const InvalidInput& e) {
    throw InvalidInput("parameter '" + key + "': " + e.what());
  }
}

std::vector<mpq_class> list_param(const InstanceParams& params, const std::string& key) {
  std::vector<mpq_class> out;
  for (const auto& item : split(require(params, key), ':')) out.push_back(rational_param(key, item));
  return out;
}

using QRows = std::vector<std::vector<mpq_class>>;

QRows zero_rows(std::size_t d) { return QRows(d, std::vector<mpq_class>(d, 0)); }

QRows random_bounded(std::size_t d, std::uint32_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QRows rows = zero_rows(d);
  for (auto& row : rows) {
    for (auto& x : row) {
      std::int64_t den = 0;
      do den = static_cast<std::int64_t>(rng() % 9) + 1;
      while (den % p == 0);
      const auto num = static_cast<std::int64_t>(rng() % 19) - 9;
      x = mpq_class(static_cast<long>(num), static_cast<unsigned long>(den));
      x.canonicalize();
    }
  }
  return rows;
}

}  // namespace

InstanceParams parse_params(const std::string& text) {
  InstanceParams out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput("malformed parameter '" + item + "', expected key=value");
    const std::string key = item.substr(0, eq);
    if (out.contains(key)) throw InvalidInput("parameter '" + key + "' given twice");
    out[key] = item.substr(eq + 1);
  }
  return out;
}

SpecDocument generate_instance(const std::string& kind, const InstanceParams& params) {
  static const std::map<std::string, std::set<std::string>> kAllowed{
      {"randomBounded", {"d", "p", "seed"}},
      {"staircaseShift", {"d", "p", "super"}},
      {"jordan", {"d", "p", "eigen"}},
      {"diagonal", {"p", "entries"}},
  };
  const auto kind_it = kAllowed.find(kind);
  if (kind_it == kAllowed.end())
    throw InvalidInput("unknown instance kind '" + kind + "' (randomBounded, staircaseShift, jordan, diagonal)");
  for (const auto& [key, value] : params) {
    static const std::set<std::string> kCommon{"omega", "backend", "precision", "n_max", "k_max"};
    if (!kind_it->second.contains(key) && !kCommon.contains(key))
      throw InvalidInput("parameter '" + key + "' does not apply to " + kind);
  }

  SpecDocument doc;
  doc.prime = static_cast<std::uint32_t>(int_param(params, "p", 2, 1000003));
  if (!is_prime(doc.prime)) throw InvalidInput("parameter 'p' = " + std::to_string(doc.prime) + " is not prime");
  auto dim = [&] { return static_cast<std::size_t>(int_param(params, "d", 1, 16)); };

  if (kind == "randomBounded") {
    doc.seed = static_cast<std::uint64_t>(int_param(params, "seed", 0, INT64_MAX));
    doc.matrix = random_bounded(dim(), doc.prime, doc.seed);
  } else if (kind == "staircaseShift") {
    const std::size_t d = dim();
    const auto super = list_param(params, "super");
    if (super.size() + 1 != d)
      throw InvalidInput("staircaseShift of dimension " + std::to_string(d) + " needs " + std::to_string(d - 1) +
                         " superdiagonal entries, got " + std::to_string(super.size()));
    doc.matrix = zero_rows(d);
    for (std::size_t i = 0; i + 1 < d; ++i) doc.matrix[i][i + 1] = super[i];
  } else if (kind == "jordan") {
    const std::size_t d = dim();
    const mpq_class eigen = rational_param("eigen", require(params, "eigen"));
    doc.matrix = zero_rows(d);
    for (std::size_t i = 0; i < d; ++i) {
      doc.matrix[i][i] = eigen;
      if (i + 1 < d) doc.matrix[i][i + 1] = 1;
    }
  } else {
    const auto entries = list_param(params, "entries");
    if (entries.empty() || entries.size() > 16) throw InvalidInput("diagonal needs 1 to 16 entries");
    doc.matrix = zero_rows(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) doc.matrix[i][i] = entries[i];
  }

  if (params.contains("omega")) doc.omega = rational_param("omega", params.at("omega"));
  if (doc.omega == 0) throw InvalidInput("parameter 'omega' must be nonzero");
  if (params.contains("backend")) {
    const std::string& b = params.at("backend");
    if (b == "exact") doc.backend = Backend::exact;
    else if (b == "capped") doc.backend = Backend::capped;
    else throw InvalidInput("parameter 'backend' must be exact or capped");
  }
  if (params.contains("precision")) doc.precision = static_cast<int>(int_param(params, "precision", doc.slack + 1, 100000));
  if (params.contains("n_max")) doc.n_max = static_cast<std::uint32_t>(int_param(params, "n_max", 2, 1000));
  if (params.contains("k_max")) doc.k_max = int_param(params, "k_max", static_cast<std::int64_t>(doc.matrix.size()), 100000);

  const Field f = Field::exact(doc.prime);
  const auto certified = domain_radius_estimate(Matrix::from_rationals(doc.matrix, f), doc.k_max);
  const std::int64_t ceiling =
      doc.omega == 1 ? 0 : -Scalar::from_rational(doc.omega, f).abs_exponent().value();
  doc.declared_radius_exponent = certified ? std::min(*certified, ceiling) : ceiling;
  if (doc.declared_radius_exponent < 0) {
    std::vector<LambdaSample> samples;
    for (std::int64_t m = 1 - doc.declared_radius_exponent; m <= 3 - doc.declared_radius_exponent; ++m) {
      samples.push_back({m, 1});
      samples.push_back({m, mpq_class(1 + doc.prime)});
    }
    doc.lambda_samples = std::move(samples);
  }
  return doc;
}

}  // namespace padicres
