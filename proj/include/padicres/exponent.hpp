#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace padicres {

/// An absolute-value exponent: |x| = p^e with e in Z ∪ {−∞}.
///
/// Every norm in the library is carried as one of these; there is no floating
/// point anywhere. −∞ encodes the value zero (and the weight zero in seminorm
/// families).
class AbsExp {
 public:
  constexpr AbsExp() = default;  // −∞
  constexpr explicit AbsExp(std::int64_t e) : value_(e), finite_(true) {}

  static constexpr AbsExp neg_inf() { return AbsExp{}; }

  constexpr bool is_neg_inf() const { return !finite_; }
  constexpr bool is_finite() const { return finite_; }
  /// Only meaningful when finite.
  constexpr std::int64_t value() const { return value_; }

  /// Exponent of a product: −∞ absorbs.
  friend constexpr AbsExp operator+(AbsExp a, AbsExp b) {
    if (!a.finite_ || !b.finite_) return AbsExp{};
    return AbsExp{a.value_ + b.value_};
  }
  friend constexpr AbsExp operator+(AbsExp a, std::int64_t s) {
    return a.finite_ ? AbsExp{a.value_ + s} : AbsExp{};
  }
  friend constexpr AbsExp operator-(AbsExp a, std::int64_t s) { return a + (-s); }

  friend constexpr bool operator==(AbsExp a, AbsExp b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(AbsExp a, AbsExp b) {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(AbsExp a, std::int64_t b) { return a == AbsExp{b}; }
  friend constexpr std::strong_ordering operator<=>(AbsExp a, std::int64_t b) {
    return a <=> AbsExp{b};
  }

  std::string to_string() const { return finite_ ? std::to_string(value_) : "-inf"; }

 private:
  std::int64_t value_ = 0;
  bool finite_ = false;
};

constexpr AbsExp max(AbsExp a, AbsExp b) { return a < b ? b : a; }
constexpr AbsExp min(AbsExp a, AbsExp b) { return a < b ? a : b; }

}  // namespace padicres
