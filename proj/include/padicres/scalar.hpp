#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "padicres/exponent.hpp"

namespace padicres {

enum class Backend { exact, capped };

const char* to_string(Backend b);

/// Residual tolerance and digit count for the capped backend.
///
/// A residual passes when its valuation is at least `digits - slack`, i.e. its
/// absolute-value exponent is at most `tolerance_exponent()`.
struct PrecisionBudget {
  int digits = 64;
  int slack = 10;

  void validate() const;
  std::int64_t tolerance_exponent() const { return -(digits - slack); }
};

/// The field a scalar lives in: Q_p for a given prime, under one backend.
/// `digits` is the capped relative precision (ignored by the exact backend
/// except as the precision attached to values converted to capped form).
struct Field {
  std::uint32_t prime = 2;
  Backend backend = Backend::exact;
  int digits = 64;

  static Field exact(std::uint32_t p) { return {p, Backend::exact, 64}; }
  static Field capped(std::uint32_t p, int digits = 64) { return {p, Backend::capped, digits}; }

  void validate() const;
  friend bool operator==(const Field&, const Field&) = default;
};

/// An element of Q_p.
///
/// Exact backend: a reduced rational. Capped backend: x = p^v · u + O(p^(v+N))
/// with u a unit known to N base-p digits (capped relative precision).
/// Cancellation in a sum shrinks N by the valuation jump. A capped value whose
/// known digits all vanish is "zero to precision" O(p^a), which is distinct
/// from the exact zero.
class Scalar {
 public:
  /// Exact zero in Q_2; mostly for default-constructed containers.
  Scalar();

  static Scalar from_rational(const mpq_class& q, const Field& field);
  static Scalar from_rational(const mpz_class& num, const mpz_class& den, const Field& field);
  static Scalar from_integer(long v, const Field& field);
  /// Parses "num" or "num/den"; throws InvalidInput on malformed text or den = 0.
  static Scalar parse(const std::string& text, const Field& field);
  static Scalar zero(const Field& field);
  static Scalar one(const Field& field);
  /// p^e (an exact power of the prime).
  static Scalar prime_power(std::int64_t e, const Field& field);
  /// The capped value O(p^a).
  static Scalar approx_zero(std::int64_t absolute_precision, const Field& field);

  const Field& field() const { return field_; }
  std::uint32_t prime() const { return field_.prime; }
  Backend backend() const { return field_.backend; }

  /// v_p(x); std::nullopt encodes +∞ (exact zero or zero to precision).
  std::optional<std::int64_t> valuation() const;
  /// e with |x| = p^e, i.e. −valuation; −∞ for zero (exact or to precision).
  AbsExp abs_exponent() const;
  /// Smallest exponent e such that |x| ≤ p^e is guaranteed, accounting for
  /// capped precision: O(p^a) yields −a. Equals abs_exponent() otherwise.
  AbsExp abs_bound_exponent() const;

  bool is_zero() const;
  bool is_exact_zero() const;
  /// Capped value with no known nonzero digit.
  bool is_approx_zero() const;

  /// Number of known unit digits (capped); std::nullopt for exact values and
  /// for the exact zero.
  std::optional<std::int64_t> relative_precision() const;
  /// v + N for capped nonzero values, a for O(p^a); std::nullopt when exact.
  std::optional<std::int64_t> absolute_precision() const;

  /// The exact rational (exact backend only).
  const mpq_class& rational() const;
  /// Rational representative p^v · u of a capped value (or the exact value).
  mpq_class lift() const;
  /// Known unit digits, least significant first (capped nonzero only).
  std::vector<std::uint32_t> unit_digits() const;

  /// Re-expresses the value in another field with the same prime.
  /// exact → capped rounds to `target.digits`; capped → exact lifts.
  Scalar convert(const Field& target) const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  /// Throws SingularError for zero (exact or to precision).
  Scalar inverse() const;
  /// x^n for n ∈ Z; negative powers invert.
  Scalar pow(std::int64_t n) const;

  /// Representation equality: same field and identical value/precision.
  friend bool operator==(const Scalar& a, const Scalar& b);
  /// True when a − b has no known nonzero digit (exact: a == b).
  bool agrees_with(const Scalar& other) const;

  /// "num/den" for exact values; "p^v*u+O(p^a)" style for capped ones.
  std::string to_string() const;

 private:
  enum class Kind : std::uint8_t { exact_zero, approx_zero, nonzero };

  Field field_;
  Kind kind_ = Kind::exact_zero;
  mpq_class q_;              // exact backend
  std::int64_t val_ = 0;     // capped: valuation (nonzero) or absolute precision (approx zero)
  std::int64_t relprec_ = 0; // capped nonzero: known unit digits
  mpz_class unit_;           // capped nonzero: 0 < unit < p^relprec, p ∤ unit

  static Scalar make_capped(const Field& f, std::int64_t v, mpz_class residue, std::int64_t relprec);
  void require_compatible(const Scalar& other) const;
};

/// p^k as a GMP integer.
mpz_class prime_power_z(std::uint32_t p, std::uint64_t k);
/// v_p(n) for n ≠ 0.
std::int64_t valuation_z(const mpz_class& n, std::uint32_t p);
/// v_p(q) for q ≠ 0.
std::int64_t valuation_q(const mpq_class& q, std::uint32_t p);
bool is_prime(std::uint32_t p);

/// v_p(C(k, n)) as the number of carries when adding n and k − n in base p
/// (Kummer). Always ≥ 0, so |C(k, n)| ≤ 1.
std::int64_t binom_valuation(std::uint64_t k, std::uint64_t n, std::uint32_t p);

}  // namespace padicres
