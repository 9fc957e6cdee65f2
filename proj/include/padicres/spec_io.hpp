#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "padicres/criteria.hpp"

namespace padicres {

/// λ = p^valuation · unit with |unit| = 1.
struct LambdaSample {
  std::int64_t valuation = 0;
  mpq_class unit = 1;
  friend bool operator==(const LambdaSample&, const LambdaSample&) = default;
};

/// The on-disk description of one operator system and its check settings.
/// Fields are kept in their exchanged form; build() validates them.
struct SpecDocument {
  std::uint32_t prime = 2;
  int precision = 64;
  int slack = 10;
  Backend backend = Backend::exact;
  std::vector<std::vector<mpq_class>> matrix;
  mpq_class omega = 1;
  std::int64_t declared_radius_exponent = 0;
  /// Empty: the single sup norm.
  std::vector<std::vector<AbsExp>> seminorms;
  /// std::nullopt: the default grid.
  std::optional<std::vector<LambdaSample>> lambda_samples;
  std::uint32_t n_max = 12;
  std::int64_t k_max = 200;
  std::uint64_t seed = 0;
  std::int64_t scaling_budget = kDefaultScalingBudget;

  friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

/// Parses a JSON spec. Throws InvalidInput naming the line and column of a
/// syntax error or the path of the offending field (e.g. "matrix[1][0]").
SpecDocument parse_spec(const std::string& text);

/// Canonical JSON: sorted keys, two-space indent, rationals as "num/den"
/// strings, trailing newline. parse_spec(serialize_spec(d)) == d.
std::string serialize_spec(const SpecDocument& doc);

struct BuiltSystem {
  OperatorSystem system;
  CheckConfig config;
};

/// Validated system and config. Throws InvalidInput, or HypothesisError when
/// the declared disk exceeds the certified one.
BuiltSystem build_system(const SpecDocument& doc);

}  // namespace padicres
