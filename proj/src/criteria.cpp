#include "padicres/criteria.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <utility>

#include "padicres/errors.hpp"

namespace padicres {

// ---------------------------------------------------------------------------
// OperatorSystem

OperatorSystem OperatorSystem::create(Matrix a, Scalar omega, std::int64_t declared_radius, SeminormFamily seminorms,
                                      std::int64_t k_max) {
  if (a.dim() == 0) throw InvalidInput("operator dimension must be positive");
  if (!(omega.field() == a.field())) throw InvalidInput("omega and A live in different fields");
  if (omega.is_zero()) throw HypothesisError("omega must be nonzero: hypothesis omega in C_p^* unsatisfied");
  seminorms.validate();
  if (seminorms.dim != a.dim())
    throw InvalidInput("seminorm family dimension " + std::to_string(seminorms.dim) + " does not match operator dimension " +
                       std::to_string(a.dim()));
  if (!seminorms.is_hausdorff())
    throw HypothesisError("seminorm family does not separate points: the space is not Hausdorff");

  OperatorSystem s;
  s.a_ = std::move(a);
  s.omega_ = std::move(omega);
  s.declared_radius_ = declared_radius;
  s.seminorms_ = std::move(seminorms);
  s.certified_radius_ = domain_radius_estimate(s.a_, k_max);
  if (s.certified_radius_ && declared_radius > *s.certified_radius_) {
    throw HypothesisError("declared radius exponent " + std::to_string(declared_radius) +
                          " exceeds the certified radius exponent " + std::to_string(*s.certified_radius_) +
                          ": the resolvent is not analytic on D(0," + std::to_string(s.a_.field().prime) + "^" +
                          std::to_string(declared_radius) + "), hypothesis " + s.hypothesis_name() + " unsatisfied");
  }
  return s;
}

bool OperatorSystem::hypothesis_holds() const {
  return !certified_radius_ || *certified_radius_ >= theorem_radius();
}

Matrix OperatorSystem::scaled_operator() const { return omega_.inverse() * a_; }

std::string OperatorSystem::hypothesis_name() const {
  return omega_ == Scalar::one(omega_.field()) ? "U_A = D(0,1)" : "U_A = D(0,1/|omega|)";
}

// ---------------------------------------------------------------------------
// Configuration

void CheckConfig::validate(const OperatorSystem& system) const {
  budget.validate();
  if (lambdas.empty()) throw InvalidInput("lambda sample set is empty: no point of D(0,p^r)* to test");
  if (n_max < 2) throw InvalidInput("n_max must be at least 2");
  if (k_max < static_cast<std::int64_t>(system.a().dim())) throw InvalidInput("k_max must be at least the dimension");
  if (scaling_budget < 0) throw InvalidInput("scaling budget must be nonnegative");
  const std::int64_t r = system.declared_radius();
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const Scalar& l = lambdas[i];
    const std::string where = "lambda sample " + std::to_string(i) + " (" + l.to_string() + ")";
    if (!(l.field() == system.a().field())) throw InvalidInput(where + " is not in the field of A");
    if (l.is_zero()) throw InvalidInput(where + " is zero: samples must lie in the punctured disk D(0,p^r)*");
    if (!(l.abs_exponent() < AbsExp{r}))
      throw InvalidInput(where + " has |lambda| >= p^" + std::to_string(r) + ": outside the declared disk D(0,p^r)*");
  }
}

std::vector<Scalar> default_lambda_grid(const OperatorSystem& system) {
  const Field& f = system.a().field();
  std::vector<Scalar> grid;
  for (std::int64_t m = 1; m <= 3; ++m) {
    if (-m >= system.declared_radius()) continue;
    const Scalar base = Scalar::prime_power(m, f);
    grid.push_back(base);
    grid.push_back(base * Scalar::from_integer(1 + static_cast<long>(f.prime), f));
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Criterion families

AbsExp residual_exponent(const Matrix& difference) {
  if (difference.is_exact_zero()) return AbsExp::neg_inf();
  return difference.norm_bound_exponent();
}

namespace {

void require_nonzero_lambda(const Scalar& lambda) {
  if (lambda.is_zero()) throw InvalidInput("lambda must be nonzero for the criterion families");
}

[[noreturn]] void route_mismatch(const char* family, std::uint32_t n, const Scalar& lambda, AbsExp residual) {
  throw InternalConsistencyError(std::string(family) + "_" + std::to_string(n) + " routes disagree at lambda = " +
                                 lambda.to_string() + " (residual exponent " + residual.to_string() +
                                 "): precision exhausted");
}

// S_n and T_n for n = 0..n_max by both routes, built incrementally from one
// resolvent. T_0 = I is carried for indexing only.
struct CriteriaSeries {
  std::vector<Matrix> s;
  std::vector<Matrix> t;
  AbsExp route_residual_s;
  AbsExp route_residual_t;
};

CriteriaSeries evaluate_criteria(const Matrix& a, const Scalar& lambda, const Matrix& r, std::uint32_t n_max) {
  const Field& f = a.field();
  const Matrix id = Matrix::identity(a.dim(), f);
  const Matrix x = r - id;
  const Matrix ar = a * r;
  const Scalar lambda_inv = lambda.inverse();
  CriteriaSeries out;
  Matrix xpow = id, apow = id, rpow = r, arpow = id;
  Scalar scale = Scalar::one(f);
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    Matrix s1 = scale * (xpow * r);
    const Matrix s2 = apow * rpow;
    const AbsExp ds = residual_exponent(s1 - s2);
    if (!s1.agrees_with(s2)) route_mismatch("S", n, lambda, ds);
    out.route_residual_s = max(out.route_residual_s, ds);
    Matrix t1 = scale * xpow;
    if (n > 0) {
      const AbsExp dt = residual_exponent(t1 - arpow);
      if (!t1.agrees_with(arpow)) route_mismatch("T", n, lambda, dt);
      out.route_residual_t = max(out.route_residual_t, dt);
    }
    out.s.push_back(std::move(s1));
    out.t.push_back(std::move(t1));
    if (n == n_max) break;
    xpow = xpow * x;
    apow = apow * a;
    rpow = rpow * r;
    arpow = arpow * ar;
    scale = scale * lambda_inv;
  }
  return out;
}

}  // namespace

Matrix criterion_S(const Matrix& a, const Scalar& lambda, std::uint32_t n) {
  require_nonzero_lambda(lambda);
  return evaluate_criteria(a, lambda, exact_resolvent(a, lambda), n).s.back();
}

Matrix criterion_T(const Matrix& a, const Scalar& lambda, std::uint32_t n) {
  require_nonzero_lambda(lambda);
  if (n == 0) throw InvalidInput("the T family starts at n = 1");
  return evaluate_criteria(a, lambda, exact_resolvent(a, lambda), n).t.back();
}

Matrix criterion_S_scaled(const Matrix& a, const Scalar& lambda, std::uint32_t n, const Scalar& omega) {
  return omega.pow(-static_cast<std::int64_t>(n)) * criterion_S(a, lambda, n);
}

Matrix criterion_T_scaled(const Matrix& a, const Scalar& lambda, std::uint32_t n, const Scalar& omega) {
  return omega.pow(-static_cast<std::int64_t>(n)) * criterion_T(a, lambda, n);
}

// ---------------------------------------------------------------------------
// Identities

namespace {

Scalar factorial(std::uint32_t n, const Field& f) {
  mpz_class v = 1;
  for (std::uint32_t i = 2; i <= n; ++i) v *= i;
  return Scalar::from_rational(mpq_class(v), f);
}

Scalar binomial(std::uint64_t k, std::uint64_t n, const Field& f) {
  if (n > k) return Scalar::zero(f);
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), k, n);
  return Scalar::from_rational(mpq_class(c), f);
}

// n! λ^{-n} (R − I)^n R.
Matrix derivative_rhs(const Matrix& r, const Scalar& lambda, std::uint32_t n) {
  const Matrix x = r - Matrix::identity(r.dim(), r.field());
  return (factorial(n, r.field()) * lambda.pow(-static_cast<std::int64_t>(n))) * (x.pow(n) * r);
}

constexpr std::int64_t kUnboundedTarget = std::numeric_limits<std::int64_t>::max() / 4;

// Binomial series Σ_{j=n}^{K} C(j, n) X^{j+1} together with its closed-form
// remainder X^{K+2} Σ_t C(K+1, n−t) X^t R^{t+1}.
struct BinomialSeries {
  Matrix partial;
  Matrix remainder;
  AbsExp tail;
};

BinomialSeries binomial_series(PowerTailCertifier& cert, const Matrix& r, std::uint32_t n, std::int64_t truncation) {
  const Field& f = r.field();
  BinomialSeries out{Matrix::zero(r.dim(), f), Matrix::zero(r.dim(), f), AbsExp{}};
  for (std::int64_t j = n; j <= truncation; ++j)
    out.partial = out.partial + binomial(static_cast<std::uint64_t>(j), n, f) * cert.power(static_cast<std::size_t>(j + 1));
  Matrix inner = Matrix::zero(r.dim(), f);
  Matrix rpow = r;
  for (std::uint32_t t = 0; t <= n; ++t) {
    inner = inner + binomial(static_cast<std::uint64_t>(truncation + 1), n - t, f) * (cert.power(t) * rpow);
    rpow = rpow * r;
  }
  out.remainder = cert.power(static_cast<std::size_t>(truncation + 2)) * inner;
  out.tail = cert.certify(AbsExp{kUnboundedTarget}, 0, truncation + 1).tail;
  return out;
}

}  // namespace

DerivativeCheck check_derivative_formula(const Matrix& a, const Scalar& lambda, std::uint32_t n,
                                         const PrecisionBudget& budget) {
  require_nonzero_lambda(lambda);
  budget.validate();
  const auto derivs = resolvent_derivatives_closed(a, lambda, n);
  const Matrix rhs = derivative_rhs(derivs.front(), lambda, n);
  DerivativeCheck out;
  out.residual = residual_exponent(derivs.back() - rhs);
  const ResolventValue series = resolvent_derivative(a, lambda, n, budget.tolerance_exponent());
  out.series_residual = residual_exponent(series.value - rhs);
  out.series_tail = series.tail_exponent;
  return out;
}

std::int64_t series_identity_truncation(const Matrix& a, const Scalar& lambda, std::uint32_t n,
                                        std::int64_t target_exponent) {
  require_nonzero_lambda(lambda);
  PowerTailCertifier cert(lambda * a, default_iteration_cap(a));
  // Omitted terms are X^k for k > K + 1.
  return cert.certify(AbsExp{target_exponent}, 0, static_cast<std::int64_t>(n) + 1).truncation - 1;
}

SeriesIdentityCheck series_identity_T(const Matrix& a, const Scalar& lambda, std::uint32_t n, std::int64_t truncation) {
  require_nonzero_lambda(lambda);
  if (truncation < static_cast<std::int64_t>(n)) throw InvalidInput("series truncation must be at least n");
  const Matrix r = exact_resolvent(a, lambda);
  const Matrix lhs = (r - Matrix::identity(a.dim(), a.field())).pow(n + 1);
  PowerTailCertifier cert(lambda * a, default_iteration_cap(a));
  const BinomialSeries series = binomial_series(cert, r, n, truncation);
  return {residual_exponent(lhs - series.partial), series.tail,
          residual_exponent(lhs - series.partial - series.remainder)};
}

AbsExp reconstruction_check(const Matrix& a, const Scalar& lambda, std::uint32_t k) {
  const Matrix s = criterion_S(a, lambda, k);
  const Matrix shifted = Matrix::identity(a.dim(), a.field()) - lambda * a;
  return residual_exponent(shifted.pow(k + 1) * s - a.pow(k));
}

LambdaProbe lambda_to_zero_probe(const Matrix& a, std::uint32_t k, const std::vector<std::int64_t>& m_range) {
  if (m_range.empty()) throw InvalidInput("probe range is empty");
  if (!std::is_sorted(m_range.begin(), m_range.end()) ||
      std::adjacent_find(m_range.begin(), m_range.end()) != m_range.end())
    throw InvalidInput("probe range must be strictly increasing");
  LambdaProbe out;
  out.target = residual_exponent(a.pow(k));
  for (const std::int64_t m : m_range) {
    const Scalar lambda = Scalar::prime_power(m, a.field());
    const Matrix x = lambda * a;
    Matrix term = criterion_S(a, lambda, k);
    AbsExp bound;
    for (std::uint32_t j = 0; j <= k + 1; ++j) {
      bound = max(bound, residual_exponent(term));
      term = x * term;
    }
    out.bounds.emplace_back(m, bound);
  }
  const std::size_t tail = std::min<std::size_t>(2, out.bounds.size());
  out.stabilized = std::all_of(out.bounds.end() - static_cast<std::ptrdiff_t>(tail), out.bounds.end(),
                               [&](const auto& b) { return b.second == out.target; });
  return out;
}

// ---------------------------------------------------------------------------
// Verdict

namespace {

// Scale needed by member q against member p over the whole family, with the
// column and operator attaining it. std::nullopt scale: p vanishes where some
// image does not.
struct Attainment {
  std::optional<std::int64_t> scale;
  std::size_t column = 0;
  std::size_t op = 0;
};

Attainment attain(std::span<const Matrix> family, const SeminormFamily& s, std::size_t q, std::size_t p) {
  Attainment best;
  bool found = false;
  for (std::size_t t = 0; t < family.size(); ++t) {
    for (std::size_t j = 0; j < s.dim; ++j) {
      for (std::size_t i = 0; i < s.dim; ++i) {
        const AbsExp c = s.members[q][i] + family[t](i, j).abs_exponent();
        if (c.is_neg_inf()) continue;
        if (s.members[p][j].is_neg_inf()) return {std::nullopt, j, t};
        const std::int64_t need = c.value() - s.members[p][j].value();
        if (!found || need > *best.scale) {
          best = {need, j, t};
          found = true;
        }
      }
    }
  }
  return best;
}

FamilyVerdict family_verdict(const std::vector<Matrix>& family, const std::vector<GridNorm>& norms,
                             std::uint32_t horizon, std::uint32_t prefix_horizon, const SeminormFamily& s,
                             std::int64_t budget) {
  FamilyVerdict v;
  v.horizon = horizon;
  v.prefix_horizon = prefix_horizon;
  v.norms = norms;
  for (const auto& g : norms) v.max_norm = max(v.max_norm, g.exponent);
  std::vector<Matrix> prefix;
  for (std::size_t i = 0; i < family.size(); ++i)
    if (norms[i].n <= prefix_horizon) prefix.push_back(family[i]);
  v.full = equicontinuity_check(family, s, budget);
  v.prefix = equicontinuity_check(prefix, s, budget);
  v.stabilized = v.full.needed_scales == v.prefix.needed_scales;
  if (v.full.status == EquiStatus::refuted) {
    v.status = EquiStatus::refuted;
    v.refutation = v.full.refutation;
    return v;
  }
  if (v.stabilized) return v;
  v.status = EquiStatus::refuted;
  // The first member whose scale still grows past the prefix horizon.
  for (std::size_t q = 0; q < v.full.needed_scales.size(); ++q) {
    if (v.full.needed_scales[q] == v.prefix.needed_scales[q]) continue;
    const EquiWitness& w = v.full.witnesses[q];
    const Attainment at = attain(family, s, q, w.p);
    v.refutation = EquiRefutation{q, w.p, at.column, at.op, w.scale, v.prefix.needed_scales[q].value_or(budget)};
    break;
  }
  return v;
}

ResidualSummary summarize(std::string name, AbsExp max_exponent, AbsExp allowed, std::size_t evaluations) {
  return {std::move(name), max_exponent, allowed, evaluations, max_exponent <= allowed};
}

}  // namespace

bool VerdictReport::all_pass() const {
  if (!agreement) return false;
  for (const auto& r : residuals)
    if (!r.pass) return false;
  for (const auto& p : probes)
    if (!p.probe.stabilized) return false;
  if (witness_violations != 0) return false;
  return !forward.applicable || forward.holds;
}

VerdictReport hyp_verdict(const OperatorSystem& system, const CheckConfig& config) {
  config.validate(system);
  const Matrix& a = system.a();
  const Field& f = a.field();
  const Scalar& omega = system.omega();
  const Matrix b = system.scaled_operator();
  const std::uint32_t n_max = config.n_max;
  const std::uint32_t prefix = n_max / 2;
  const bool exact = f.backend == Backend::exact;
  const AbsExp tolerance = exact ? AbsExp::neg_inf() : AbsExp{config.budget.tolerance_exponent()};

  VerdictReport report;
  report.lambdas = config.lambdas;
  report.oracle = power_bounded_oracle(b);
  report.charpoly = char_poly(b);

  // Powers of B.
  {
    std::vector<Matrix> family;
    std::vector<GridNorm> norms;
    Matrix power = Matrix::identity(a.dim(), f);
    for (std::uint32_t n = 0; n <= n_max; ++n) {
      norms.push_back({Scalar::zero(f), n, residual_exponent(power)});
      family.push_back(power);
      power = power * b;
    }
    report.powers = family_verdict(family, norms, n_max, prefix, system.seminorms(), config.scaling_budget);
  }

  // Criterion families, identities, and ω-coherence over the grid.
  std::vector<Matrix> s_family, t_family;
  std::vector<GridNorm> s_norms, t_norms;
  AbsExp route_s, route_t, derivative, reconstruction, series, resummed, coherence;
  AbsExp series_allowed = tolerance;
  std::size_t evals = 0, series_evals = 0;
  const Matrix id = Matrix::identity(a.dim(), f);
  for (const Scalar& lambda : config.lambdas) {
    const auto derivs = resolvent_derivatives_closed(a, lambda, n_max);
    const Matrix& r = derivs.front();
    const CriteriaSeries crit = evaluate_criteria(a, lambda, r, n_max);
    route_s = max(route_s, crit.route_residual_s);
    route_t = max(route_t, crit.route_residual_t);

    const Scalar z = lambda * omega;
    const CriteriaSeries crit_b = evaluate_criteria(b, z, exact_resolvent(b, z), n_max);
    route_s = max(route_s, crit_b.route_residual_s);
    route_t = max(route_t, crit_b.route_residual_t);

    const Scalar omega_inv = omega.inverse();
    Scalar omega_scale = Scalar::one(f);
    const Matrix shifted = id - lambda * a;
    Matrix shifted_pow = shifted;
    Matrix apow = id;
    for (std::uint32_t n = 0; n <= n_max; ++n) {
      const Matrix s_scaled = omega_scale * crit.s[n];
      const Matrix t_scaled = omega_scale * crit.t[n];
      coherence = max(coherence, residual_exponent(s_scaled - crit_b.s[n]));
      s_norms.push_back({lambda, n, residual_exponent(s_scaled)});
      s_family.push_back(s_scaled);
      if (n > 0) {
        coherence = max(coherence, residual_exponent(t_scaled - crit_b.t[n]));
        t_norms.push_back({lambda, n, residual_exponent(t_scaled)});
        t_family.push_back(t_scaled);
        derivative = max(derivative, residual_exponent(derivs[n] - derivative_rhs(r, lambda, n)));
      }
      reconstruction = max(reconstruction, residual_exponent(shifted_pow * crit.s[n] - apow));
      ++evals;
      shifted_pow = shifted_pow * shifted;
      apow = apow * a;
      omega_scale = omega_scale * omega_inv;
    }

    PowerTailCertifier cert(lambda * a, default_iteration_cap(a));
    const Matrix x = r - id;
    Matrix lhs = x;
    for (std::uint32_t n = 0; n < n_max; ++n) {
      const std::int64_t k =
          cert.certify(AbsExp{config.budget.tolerance_exponent()}, 0, static_cast<std::int64_t>(n) + 1).truncation - 1;
      const BinomialSeries bs = binomial_series(cert, r, n, k);
      series = max(series, residual_exponent(lhs - bs.partial));
      resummed = max(resummed, residual_exponent(lhs - bs.partial - bs.remainder));
      // Exact residual is bounded by the certified tail; capped adds rounding.
      series_allowed = max(series_allowed, exact ? bs.tail : max(bs.tail, tolerance));
      ++series_evals;
      lhs = lhs * x;
    }
  }

  const SeminormFamily& sem = system.seminorms();
  report.criterion_s = family_verdict(s_family, s_norms, n_max, prefix, sem, config.scaling_budget);
  report.criterion_t = family_verdict(t_family, t_norms, n_max, prefix, sem, config.scaling_budget);
  report.agreement = report.powers.status == report.criterion_s.status &&
                     report.criterion_s.status == report.criterion_t.status;

  const std::size_t grid = config.lambdas.size();
  report.residuals.push_back(summarize("derivative_formula", derivative, tolerance, grid * n_max));
  report.residuals.push_back(summarize("dual_route_S", route_s, tolerance, 2 * evals));
  report.residuals.push_back(summarize("dual_route_T", route_t, tolerance, 2 * (evals - grid)));
  report.residuals.push_back(summarize("omega_coherence", coherence, tolerance, 2 * evals - grid));
  report.residuals.push_back(summarize("reconstruction", reconstruction, tolerance, evals));
  report.residuals.push_back(summarize("series_identity_T", series, series_allowed, series_evals));
  report.residuals.push_back(summarize("series_identity_T_resummed", resummed, tolerance, series_evals));

  // Forward bound C = max_{k≤k_max} ‖B^k‖, stable through 5·k_max/2.
  {
    ForwardBound& fb = report.forward;
    fb.max_s = report.criterion_s.max_norm;
    fb.max_t = report.criterion_t.max_norm;
    const bool inside = std::all_of(config.lambdas.begin(), config.lambdas.end(),
                                    [&](const Scalar& l) { return (l * omega).abs_exponent() < AbsExp{0}; });
    fb.applicable = report.oracle == PowerBound::bounded && inside;
    if (fb.applicable) {
      const std::int64_t horizon = config.k_max * 5 / 2;
      Matrix power = Matrix::identity(a.dim(), f);
      AbsExp later;
      for (std::int64_t k = 0; k <= horizon; ++k) {
        const AbsExp e = residual_exponent(power);
        if (k <= config.k_max) fb.constant = max(fb.constant, e);
        later = max(later, e);
        power = power * b;
      }
      fb.stable = later == fb.constant;
      fb.holds = fb.stable && fb.max_s <= fb.constant && fb.max_t <= fb.constant;
    }
  }

  // λ → 0 probes on A below the declared disk; they settle once |λ|·‖A‖ < 1.
  {
    const AbsExp norm_a = residual_exponent(a);
    const std::int64_t start = std::max<std::int64_t>(1, 1 - system.declared_radius());
    const std::int64_t stop = start + std::max<std::int64_t>(0, norm_a.is_finite() ? norm_a.value() : 0) + 5;
    std::vector<std::int64_t> ms;
    for (std::int64_t m = start; m <= stop; ++m) ms.push_back(m);
    for (std::uint32_t k = 1; k <= std::min<std::uint32_t>(3, n_max); ++k)
      report.probes.push_back({k, lambda_to_zero_probe(a, k, ms)});
  }

  // Spot checks of every witness on seeded random vectors.
  {
    std::mt19937_64 rng(config.seed);
    auto draw = [&] {
      Vector v;
      for (std::size_t i = 0; i < a.dim(); ++i) {
        const std::int64_t num = static_cast<std::int64_t>(rng() % 2001) - 1000;
        const std::int64_t den = static_cast<std::int64_t>(rng() % 1000) + 1;
        const std::int64_t shift = static_cast<std::int64_t>(rng() % 9) - 4;
        v.push_back(Scalar::from_rational(num, den, f) * Scalar::prime_power(shift, f));
      }
      return v;
    };
    auto spot = [&](const FamilyVerdict& fv, const std::vector<Matrix>& family) {
      if (fv.status != EquiStatus::witnessed) return;
      for (int trial = 0; trial < 4; ++trial) {
        const Vector x = draw();
        for (const auto& w : fv.full.witnesses) {
          const AbsExp bound = seminorm_eval(sem.members[w.p], x) + w.scale;
          for (const auto& t : family) {
            ++report.witness_spot_checks;
            if (seminorm_eval(sem.members[w.q], t * std::span<const Scalar>(x)) > bound) ++report.witness_violations;
          }
        }
      }
    };
    std::vector<Matrix> powers;
    for (std::uint32_t n = 0; n <= n_max; ++n) powers.push_back(b.pow(n));
    spot(report.powers, powers);
    spot(report.criterion_s, s_family);
    spot(report.criterion_t, t_family);
  }
  return report;
}

}  // namespace padicres
