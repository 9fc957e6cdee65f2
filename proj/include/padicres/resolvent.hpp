#pragma once

#include <cstdint>
#include <optional>

#include "padicres/exponent.hpp"
#include "padicres/matrix.hpp"

namespace padicres {

/// A truncated series evaluation with a certified truncation bound:
/// ‖true value − value‖ ≤ p^tail_exponent.
struct ResolventValue {
  Matrix value;
  AbsExp tail_exponent;
  Scalar lambda;
  std::int64_t truncation = 0;  // index of the last summed term
};

/// Certifies where to cut the series Σ_k c_k X^k Y when |c_k| ≤ 1.
///
/// Once some power X^L has ‖X^L‖ < 1, every later power satisfies
/// ‖X^(m+jL)‖ ≤ ‖X^m‖, so sup_{k>K} ‖X^k‖ = max of the L powers after K. The
/// certifier keeps the powers it has seen and reports a truncation index whose
/// tail is provably below the target, or fails after `iteration_cap` powers.
class PowerTailCertifier {
 public:
  PowerTailCertifier(Matrix x, std::int64_t iteration_cap);

  /// X^k, computing further powers as needed.
  const Matrix& power(std::size_t k);

  struct Cut {
    std::int64_t truncation;  // last included index K
    AbsExp tail;              // ≥ sup_{k>K} ‖X^k‖
  };
  /// Smallest K ≥ min_index whose certified tail exponent plus `offset` is
  /// ≤ target. Throws DomainError if no contracting block appears in time.
  Cut certify(AbsExp target, std::int64_t offset = 0, std::int64_t min_index = 0);

 private:
  std::vector<Matrix> powers_;
  std::vector<AbsExp> norms_;
  std::int64_t cap_;
  std::optional<std::size_t> block_;  // L with ‖X^L‖ < 1, or nilpotency index
  std::optional<std::size_t> nil_index_;  // first exactly-zero power

  void extend();
};

/// Default iteration cap 10 · d · precision digits.
std::int64_t default_iteration_cap(const Matrix& a);

/// R(λ, A) = (I − λA)^{-1} = Σ λ^k A^k, truncated once the certified tail
/// sup_{k>K} |λ|^k ‖A^k‖ is ≤ p^target_exponent.
ResolventValue neumann_resolvent(const Matrix& a, const Scalar& lambda, std::int64_t target_exponent);

/// (I − λA)^{-1} by direct linear solve; throws SingularError when 1/λ is an
/// eigenvalue.
Matrix exact_resolvent(const Matrix& a, const Scalar& lambda);

/// R^(j)(λ, A) = Σ_{k≥j} k(k−1)…(k−j+1) λ^{k−j} A^k, certified truncation.
ResolventValue resolvent_derivative(const Matrix& a, const Scalar& lambda, std::uint32_t j,
                                    std::int64_t target_exponent);

/// R^(n)(λ, A) from an exact resolvent by differentiating R' = R A R with the
/// Leibniz rule: R^(n) = Σ_i C(n−1, i) R^(i) A R^(n−1−i). Series-free.
Matrix resolvent_derivative_closed(const Matrix& a, const Scalar& lambda, std::uint32_t n);
/// R^(0), …, R^(n) from one pass of the same recursion.
std::vector<Matrix> resolvent_derivatives_closed(const Matrix& a, const Scalar& lambda, std::uint32_t n);

/// R(λ, A) re-expanded around μ: Σ_j μ^{-j}(R(μ) − I)^j R(μ) (λ − μ)^j, i.e.
/// the Taylor coefficients R^(j)(μ)/j! written without dividing by j!.
///
/// The tail is certified a posteriori: with D = (I − λA)V − I and ‖D‖ < 1,
/// ‖R(λ) − V‖ ≤ ‖V‖·‖D‖. Throws DomainError when the recentred series does not
/// contract (λ outside the disk of convergence around μ).
ResolventValue taylor_recenter(const Matrix& a, const Scalar& mu, const Scalar& lambda,
                               std::int64_t target_exponent);

/// Largest r such that every |λ| < p^r makes |λ|^k ‖A^k‖ → 0, certified from
/// the powers k ≤ k_max via submultiplicativity (spectral radius exponent ≤
/// e_k / k for every k). std::nullopt when some power vanishes (A nilpotent):
/// the series then converges everywhere.
std::optional<std::int64_t> domain_radius_estimate(const Matrix& a, std::int64_t k_max);

}  // namespace padicres
