#pragma once

// Independent reference computations used by the test and acceptance suites.
// Nothing here calls into the library's Scalar/Matrix machinery: every oracle
// works on plain GMP rationals with textbook algorithms.

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace padicres::oracle {

using QMatrix = std::vector<std::vector<mpq_class>>;

/// v_p(n!) by Legendre's formula Σ floor(n / p^i).
std::int64_t factorial_valuation(std::uint64_t n, std::uint32_t p);
/// v_p(C(k, n)) = v_p(k!) − v_p(n!) − v_p((k−n)!).
std::int64_t binom_valuation_legendre(std::uint64_t k, std::uint64_t n, std::uint32_t p);

/// v_p of a nonzero rational by repeated division.
std::int64_t valuation(const mpq_class& q, std::uint32_t p);

/// First `n` base-p digits of the unit part of q ≠ 0, computed digit by digit
/// (solve d·den ≡ num mod p by search, then divide out p).
std::vector<std::uint32_t> unit_digits(const mpq_class& q, std::uint32_t p, std::size_t n);

QMatrix identity(std::size_t d);
QMatrix multiply(const QMatrix& a, const QMatrix& b);
QMatrix add(const QMatrix& a, const QMatrix& b);
QMatrix scale(const mpq_class& s, const QMatrix& a);
QMatrix power(const QMatrix& a, std::uint64_t n);
/// Plain Gauss–Jordan over Q (first nonzero pivot). std::nullopt if singular.
std::optional<QMatrix> inverse(const QMatrix& a);
/// Max entry |·|_p exponent; std::nullopt for the zero matrix.
std::optional<std::int64_t> norm_exponent(const QMatrix& a, std::uint32_t p);

/// det(xI − A) by cofactor expansion over Q[x] (d ≤ 5); lowest degree first.
std::vector<mpq_class> charpoly_by_minors(const QMatrix& a);

/// Largest |root| exponent of a monic polynomial (lowest degree first) from its
/// Newton polygon: max_i (−v(c_i)) / (d − i) over nonzero c_i, i < d.
/// std::nullopt when every root is zero.
std::optional<mpq_class> max_root_abs_exponent(const std::vector<mpq_class>& coeffs, std::uint32_t p);

/// Root valuations with multiplicity (slopes of the lower convex hull), for
/// the nonzero roots.
std::vector<mpq_class> newton_polygon_root_valuations(const std::vector<mpq_class>& coeffs, std::uint32_t p);

/// Radius exponent of the Neumann disk from the spectral radius exponent σ:
/// the largest integer r with r − 1 < −σ. std::nullopt (whole field) when σ is
/// −∞ (nilpotent matrix).
std::optional<std::int64_t> neumann_radius_from_spectrum(const QMatrix& a, std::uint32_t p);

}  // namespace padicres::oracle
