#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "padicres/exponent.hpp"
#include "padicres/matrix.hpp"

namespace padicres {

/// Weight exponents of one weighted sup seminorm p_w(x) = max_i |w_i|·|x_i|,
/// |w_i| = p^(e_i); −∞ encodes the weight 0.
using SeminormWeights = std::vector<AbsExp>;

/// A finite family of weighted sup seminorms on Q_p^d, modelling the
/// generating family of a locally convex topology.
struct SeminormFamily {
  std::size_t dim = 0;
  std::vector<SeminormWeights> members;

  /// The single sup norm.
  static SeminormFamily sup(std::size_t dim);

  /// Some member is nonzero on every coordinate axis, so the family separates
  /// points.
  bool is_hausdorff() const;
  /// Shape checks; throws InvalidInput.
  void validate() const;
  friend bool operator==(const SeminormFamily&, const SeminormFamily&) = default;
};

/// e with p_w(x) = p^e; −∞ when the seminorm vanishes on x.
AbsExp seminorm_eval(std::span<const AbsExp> weights, std::span<const Scalar> x);

struct EquiWitness {
  std::size_t q = 0;      // dominated member
  std::size_t p = 0;      // dominating member
  std::int64_t scale = 0; // q(Tx) ≤ p^scale · p_p(x) for every tested T and all x
};

struct EquiRefutation {
  std::size_t q = 0;
  std::size_t p = 0;               // best dominating candidate
  std::size_t basis_index = 0;     // e_j violating the bound
  std::size_t operator_index = 0;  // family member attaining the violation
  std::optional<std::int64_t> needed_scale;  // nullopt: p vanishes where q(T e_j) does not
  std::int64_t budget = 0;
};

enum class EquiStatus { witnessed, refuted };
const char* to_string(EquiStatus s);

struct EquiContinuityVerdict {
  EquiStatus status = EquiStatus::witnessed;
  std::vector<EquiWitness> witnesses;     // one per member q, when witnessed
  std::optional<EquiRefutation> refutation;
  /// Per member q: the smallest admissible scale over all p (nullopt when no
  /// member dominates at any scale).
  std::vector<std::optional<std::int64_t>> needed_scales;
};

inline constexpr std::int64_t kDefaultScalingBudget = 40;

/// Decides whether every member q is dominated, uniformly over `family`, by a
/// scaled member p^s·p with |s| ≤ budget.
///
/// Uses the column criterion: with c_j = max_{T,i}(e^q_i + |T_ij|), the bound
/// q(Tx) ≤ p^s p(x) holds for all x iff e^p_j + s ≥ c_j for every j, because
/// an ultrametric weighted sup norm is attained on basis vectors. Witnesses are
/// therefore exact for all x, not just the tested ones.
EquiContinuityVerdict equicontinuity_check(std::span<const Matrix> family, const SeminormFamily& seminorms,
                                           std::int64_t budget = kDefaultScalingBudget);

}  // namespace padicres
