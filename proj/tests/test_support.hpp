#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "padicres/matrix.hpp"
#include "padicres/oracles.hpp"

namespace padicres::testing {

/// Seeded generator; values are taken from the raw engine output so the
/// sequence is identical on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  /// num/den with |num| ≤ max_num, 1 ≤ den ≤ max_den.
  mpq_class rational(std::int64_t max_num, std::int64_t max_den) {
    mpq_class q(static_cast<long>(uniform(-max_num, max_num)), static_cast<unsigned long>(uniform(1, max_den)));
    q.canonicalize();
    return q;
  }

  /// A rational whose denominator is prime to p (so it lies in Z_p).
  mpq_class integral_rational(std::uint32_t p, std::int64_t max_num, std::int64_t max_den) {
    for (;;) {
      mpq_class q = rational(max_num, max_den);
      if (q.get_den() % p != 0) return q;
    }
  }

  oracle::QMatrix rational_matrix(std::size_t d, std::int64_t max_num, std::int64_t max_den) {
    oracle::QMatrix m(d, std::vector<mpq_class>(d));
    for (auto& row : m)
      for (auto& x : row) x = rational(max_num, max_den);
    return m;
  }

  oracle::QMatrix integral_matrix(std::size_t d, std::uint32_t p, std::int64_t max_num, std::int64_t max_den) {
    oracle::QMatrix m(d, std::vector<mpq_class>(d));
    for (auto& row : m)
      for (auto& x : row) x = integral_rational(p, max_num, max_den);
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

inline oracle::QMatrix to_q(const Matrix& m) { return m.to_rationals(); }

}  // namespace padicres::testing
