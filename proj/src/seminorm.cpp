#include "padicres/seminorm.hpp"

#include <algorithm>

#include "padicres/errors.hpp"

namespace padicres {

SeminormFamily SeminormFamily::sup(std::size_t dim) {
  return SeminormFamily{dim, {SeminormWeights(dim, AbsExp{0})}};
}

bool SeminormFamily::is_hausdorff() const {
  for (std::size_t i = 0; i < dim; ++i) {
    const bool covered = std::any_of(members.begin(), members.end(),
                                     [i](const SeminormWeights& w) { return w[i].is_finite(); });
    if (!covered) return false;
  }
  return true;
}

void SeminormFamily::validate() const {
  if (dim == 0) throw InvalidInput("seminorm family dimension must be positive");
  if (members.empty()) throw InvalidInput("seminorm family is empty");
  for (std::size_t m = 0; m < members.size(); ++m) {
    if (members[m].size() != dim)
      throw InvalidInput("seminorm " + std::to_string(m) + " has " + std::to_string(members[m].size()) +
                         " weights, expected " + std::to_string(dim));
  }
}

AbsExp seminorm_eval(std::span<const AbsExp> weights, std::span<const Scalar> x) {
  if (weights.size() != x.size()) throw InvalidInput("seminorm dimension mismatch");
  AbsExp e;
  for (std::size_t i = 0; i < x.size(); ++i) e = max(e, weights[i] + x[i].abs_exponent());
  return e;
}

const char* to_string(EquiStatus s) { return s == EquiStatus::witnessed ? "witnessed" : "refuted"; }

namespace {

struct Candidate {
  std::size_t p = 0;
  bool feasible = false;
  std::int64_t scale = 0;     // meaningful when feasible
  std::size_t worst_column = 0;
};

}  // namespace

EquiContinuityVerdict equicontinuity_check(std::span<const Matrix> family, const SeminormFamily& seminorms,
                                           std::int64_t budget) {
  seminorms.validate();
  if (!seminorms.is_hausdorff())
    throw InvalidInput("seminorm family is not Hausdorff: some coordinate is annihilated by every member");
  if (budget < 0) throw InvalidInput("scaling budget must be nonnegative");
  const std::size_t d = seminorms.dim;
  for (const auto& t : family)
    if (t.dim() != d) throw InvalidInput("operator dimension does not match the seminorm family");

  EquiContinuityVerdict verdict;
  for (std::size_t q = 0; q < seminorms.members.size(); ++q) {
    const auto& wq = seminorms.members[q];
    std::vector<AbsExp> need(d);
    std::vector<std::size_t> attained_by(d, 0);
    for (std::size_t t = 0; t < family.size(); ++t) {
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
          const AbsExp c = wq[i] + family[t](i, j).abs_exponent();
          if (c > need[j]) {
            need[j] = c;
            attained_by[j] = t;
          }
        }
      }
    }

    // Best dominating member: smallest feasible scale; q itself wins ties.
    Candidate best;
    bool have_best = false;
    auto better = [&](const Candidate& a, const Candidate& b) {
      if (a.feasible != b.feasible) return a.feasible;
      if (!a.feasible) return false;
      if (a.scale != b.scale) return a.scale < b.scale;
      return a.p == q && b.p != q;
    };
    for (std::size_t p = 0; p < seminorms.members.size(); ++p) {
      const auto& wp = seminorms.members[p];
      Candidate c{p, true, -budget, 0};
      bool constrained = false;
      for (std::size_t j = 0; j < d; ++j) {
        if (need[j].is_neg_inf()) continue;
        if (wp[j].is_neg_inf()) {
          c.feasible = false;
          c.worst_column = j;
          break;
        }
        const std::int64_t s = need[j].value() - wp[j].value();
        if (!constrained || s > c.scale) {
          c.scale = constrained ? std::max(c.scale, s) : s;
          c.worst_column = j;
          constrained = true;
        }
      }
      if (c.feasible) c.scale = std::max(c.scale, -budget);
      if (!have_best || better(c, best)) {
        best = c;
        have_best = true;
      }
    }

    verdict.needed_scales.push_back(best.feasible ? std::optional<std::int64_t>(best.scale) : std::nullopt);
    if (best.feasible && best.scale <= budget) {
      verdict.witnesses.push_back({q, best.p, best.scale});
    } else if (!verdict.refutation) {
      verdict.refutation = EquiRefutation{q,
                                          best.p,
                                          best.worst_column,
                                          attained_by[best.worst_column],
                                          best.feasible ? std::optional<std::int64_t>(best.scale) : std::nullopt,
                                          budget};
    }
  }
  if (verdict.refutation) {
    verdict.status = EquiStatus::refuted;
    verdict.witnesses.clear();
  }
  return verdict;
}

}  // namespace padicres
