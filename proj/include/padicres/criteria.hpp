#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padicres/matrix.hpp"
#include "padicres/resolvent.hpp"
#include "padicres/seminorm.hpp"

namespace padicres {

/// An operator A with scaling ω and the declared analyticity disk
/// U_A = D(0, p^r), modelled on the space Q_p^d with a finite seminorm family.
class OperatorSystem {
 public:
  /// Validates ω ≠ 0, field agreement, a Hausdorff seminorm family, and that
  /// r does not exceed the radius certified from the powers A^k, k ≤ k_max.
  /// Throws HypothesisError naming the violated hypothesis.
  static OperatorSystem create(Matrix a, Scalar omega, std::int64_t declared_radius, SeminormFamily seminorms,
                               std::int64_t k_max = 200);

  const Matrix& a() const { return a_; }
  const Scalar& omega() const { return omega_; }
  std::int64_t declared_radius() const { return declared_radius_; }
  const SeminormFamily& seminorms() const { return seminorms_; }
  /// std::nullopt: the Neumann series converges on the whole field.
  const std::optional<std::int64_t>& certified_radius() const { return certified_radius_; }
  /// The theorem's disk D(0, 1/|ω|) has exponent −abs_exponent(ω).
  std::int64_t theorem_radius() const { return -omega_.abs_exponent().value(); }
  /// The resolvent is analytic on the whole theorem disk.
  bool hypothesis_holds() const;
  /// B = ω^{-1} A.
  Matrix scaled_operator() const;
  /// "U_A = D(0,1)" or "U_A = D(0,1/|omega|)".
  std::string hypothesis_name() const;

 private:
  Matrix a_;
  Scalar omega_;
  std::int64_t declared_radius_ = 0;
  SeminormFamily seminorms_;
  std::optional<std::int64_t> certified_radius_;
};

struct CheckConfig {
  std::vector<Scalar> lambdas;
  std::uint32_t n_max = 12;
  std::int64_t k_max = 200;
  PrecisionBudget budget;
  std::int64_t scaling_budget = kDefaultScalingBudget;
  std::uint64_t seed = 0;

  /// Every sample satisfies 0 < |λ| < p^r; the grid is nonempty; horizons are
  /// usable. Throws InvalidInput.
  void validate(const OperatorSystem& system) const;
};

/// {p^m·u : m = 1..3, u ∈ {1, 1 + p}} restricted to D(0, p^r)*.
std::vector<Scalar> default_lambda_grid(const OperatorSystem& system);

/// λ^{-n}(R − I)^n R, computed also as A^n R^{n+1}; the routes must agree
/// (exactly, or to tracked precision on the capped backend), else
/// InternalConsistencyError.
Matrix criterion_S(const Matrix& a, const Scalar& lambda, std::uint32_t n);
/// λ^{-n}(R − I)^n, computed also as (A R)^n; n ≥ 1.
Matrix criterion_T(const Matrix& a, const Scalar& lambda, std::uint32_t n);
/// The ω-scaled families: S_n(λ)/ω^n and T_n(λ)/ω^n.
Matrix criterion_S_scaled(const Matrix& a, const Scalar& lambda, std::uint32_t n, const Scalar& omega);
Matrix criterion_T_scaled(const Matrix& a, const Scalar& lambda, std::uint32_t n, const Scalar& omega);

/// Residual exponent of a difference: exact norm on the exact backend, the
/// guaranteed bound (O(p^a) counts as p^−a) on the capped one.
AbsExp residual_exponent(const Matrix& difference);

struct DerivativeCheck {
  /// ‖R^(n) − n! λ^{-n}(R − I)^n R‖ with R^(n) from the Leibniz recursion.
  AbsExp residual;
  /// ‖series R^(n) − n! λ^{-n}(R − I)^n R‖ and the certified series tail.
  AbsExp series_residual;
  AbsExp series_tail;
};

/// R^(n)(λ) = n!(R − I)^n R / λ^n.
DerivativeCheck check_derivative_formula(const Matrix& a, const Scalar& lambda, std::uint32_t n,
                                         const PrecisionBudget& budget);

struct SeriesIdentityCheck {
  /// ‖(R − I)^{n+1} − Σ_{j=n}^{K} C(j, n)(λA)^{j+1}‖.
  AbsExp residual;
  /// Certified bound on the omitted terms, sup_{j>K} ‖(λA)^{j+1}‖.
  AbsExp tail;
  /// Same residual after adding the omitted terms in closed form,
  /// (λA)^{K+2} Σ_t C(K+1, n−t) (λA)^t R^{t+1}.
  AbsExp resummed_residual;
};

SeriesIdentityCheck series_identity_T(const Matrix& a, const Scalar& lambda, std::uint32_t n, std::int64_t truncation);

/// Smallest truncation K whose certified tail for the binomial series is ≤
/// p^target.
std::int64_t series_identity_truncation(const Matrix& a, const Scalar& lambda, std::uint32_t n,
                                        std::int64_t target_exponent);

/// ‖A^k − (I − λA)^{k+1} S_k(λ)‖.
AbsExp reconstruction_check(const Matrix& a, const Scalar& lambda, std::uint32_t k);

struct LambdaProbe {
  std::vector<std::pair<std::int64_t, AbsExp>> bounds;  // (m, M(m)) for λ = p^m
  AbsExp target;                                         // ‖A^k‖
  bool stabilized = false;                               // trailing values equal the target
};

/// M(m) = max_{0≤j≤k+1} ‖(λA)^j S_k(λ)‖ at λ = p^m: the terms of
/// (I − λA)^{k+1} S_k(λ) = A^k whose maximum bounds ‖A^k‖. As λ → 0 it
/// settles at ‖A^k‖.
LambdaProbe lambda_to_zero_probe(const Matrix& a, std::uint32_t k, const std::vector<std::int64_t>& m_range);

struct GridNorm {
  Scalar lambda;  // unset (exact zero) for the powers family
  std::uint32_t n = 0;
  AbsExp exponent;
};

/// Equi-continuity verdict of a sequence family on a finite horizon: the
/// finite-family check must be witnessed within the scaling budget and the
/// required scales must already be reached on the first half of the horizon.
struct FamilyVerdict {
  EquiStatus status = EquiStatus::witnessed;
  EquiContinuityVerdict full;
  EquiContinuityVerdict prefix;
  std::uint32_t horizon = 0;
  std::uint32_t prefix_horizon = 0;
  bool stabilized = true;
  std::optional<EquiRefutation> refutation;
  std::vector<GridNorm> norms;
  AbsExp max_norm;
};

struct ForwardBound {
  bool applicable = false;  // oracle-bounded B and every |λω| < 1
  AbsExp constant;          // C = max_{k≤k_max} ‖B^k‖
  bool stable = false;      // unchanged through k = 5·k_max/2
  AbsExp max_s;
  AbsExp max_t;
  bool holds = false;
};

struct ResidualSummary {
  std::string name;
  AbsExp max_exponent;
  AbsExp allowed;  // −∞ on the exact backend unless the check carries a tail
  std::size_t evaluations = 0;
  bool pass = true;
};

struct ProbeSummary {
  std::uint32_t k = 0;
  LambdaProbe probe;
};

struct VerdictReport {
  PowerBound oracle = PowerBound::bounded;  // for B = ω^{-1}A
  std::vector<mpq_class> charpoly;          // of B
  FamilyVerdict powers;
  FamilyVerdict criterion_s;
  FamilyVerdict criterion_t;
  bool agreement = false;
  ForwardBound forward;
  std::vector<ResidualSummary> residuals;
  std::vector<ProbeSummary> probes;
  std::size_t witness_spot_checks = 0;
  std::size_t witness_violations = 0;
  std::vector<Scalar> lambdas;

  /// Agreement, every residual passes, probes settle, witnesses hold, and
  /// the forward bound holds where applicable.
  bool all_pass() const;
};

/// Runs every check on one operator system.
VerdictReport hyp_verdict(const OperatorSystem& system, const CheckConfig& config);

}  // namespace padicres
