#include "padicres/resolvent.hpp"

#include <algorithm>
#include <utility>

#include "padicres/errors.hpp"

namespace padicres {

PowerTailCertifier::PowerTailCertifier(Matrix x, std::int64_t iteration_cap) : cap_(iteration_cap) {
  powers_.push_back(Matrix::identity(x.dim(), x.field()));
  norms_.push_back(powers_.back().norm_bound_exponent());
  powers_.push_back(std::move(x));
  norms_.push_back(powers_.back().norm_bound_exponent());
  if (powers_.back().is_exact_zero()) nil_index_ = 1;
  if (nil_index_ || norms_.back() < 0) block_ = 1;
}

void PowerTailCertifier::extend() {
  if (static_cast<std::int64_t>(powers_.size()) > cap_)
    throw DomainError("series terms do not tend to zero within " + std::to_string(cap_) + " iterations");
  Matrix next = powers_.back() * powers_[1];
  norms_.push_back(next.norm_bound_exponent());
  const bool zero = next.is_exact_zero();
  powers_.push_back(std::move(next));
  if (zero && !nil_index_) nil_index_ = powers_.size() - 1;
  if (!block_ && (zero || norms_.back() < 0)) block_ = powers_.size() - 1;
}

const Matrix& PowerTailCertifier::power(std::size_t k) {
  while (powers_.size() <= k) extend();
  return powers_[k];
}

PowerTailCertifier::Cut PowerTailCertifier::certify(AbsExp target, std::int64_t offset, std::int64_t min_index) {
  while (!block_) extend();
  const std::size_t block = *block_;
  for (auto k = static_cast<std::size_t>(std::max<std::int64_t>(min_index, 0));; ++k) {
    if (!nil_index_) {
      while (powers_.size() <= k + block && !nil_index_) extend();
    }
    // The first exact zero power kills every later one.
    if (nil_index_ && k + 1 >= *nil_index_) return {static_cast<std::int64_t>(k), AbsExp::neg_inf()};
    AbsExp tail;
    for (std::size_t m = k + 1; m <= k + block && m < norms_.size(); ++m) tail = max(tail, norms_[m]);
    if (tail + offset <= target) return {static_cast<std::int64_t>(k), tail};
    if (static_cast<std::int64_t>(k) > cap_)
      throw DomainError("series tail does not reach the target within " + std::to_string(cap_) + " terms");
  }
}

std::int64_t default_iteration_cap(const Matrix& a) {
  return 10 * static_cast<std::int64_t>(a.dim()) * a.field().digits;
}

namespace {

Matrix falling_factorial_scalar_times(const Matrix& m, std::uint64_t k, std::uint32_t j) {
  mpz_class ff = 1;
  for (std::uint64_t i = 0; i < j; ++i) ff *= static_cast<unsigned long>(k - i);
  return Scalar::from_rational(mpq_class(ff), m.field()) * m;
}

void require_usable_lambda(const Scalar& lambda) {
  if (lambda.is_approx_zero()) throw InvalidInput("lambda is zero to precision");
}

}  // namespace

ResolventValue neumann_resolvent(const Matrix& a, const Scalar& lambda, std::int64_t target_exponent) {
  require_usable_lambda(lambda);
  PowerTailCertifier cert(lambda * a, default_iteration_cap(a));
  const auto cut = cert.certify(AbsExp{target_exponent});
  Matrix sum = cert.power(0);
  for (std::int64_t k = 1; k <= cut.truncation; ++k) sum = sum + cert.power(static_cast<std::size_t>(k));
  return {std::move(sum), cut.tail, lambda, cut.truncation};
}

Matrix exact_resolvent(const Matrix& a, const Scalar& lambda) {
  try {
    return inverse(Matrix::identity(a.dim(), a.field()) - lambda * a);
  } catch (const SingularError&) {
    throw SingularError("I - lambda*A is singular at lambda = " + lambda.to_string() +
                        " (1/lambda is an eigenvalue of A)");
  }
}

ResolventValue resolvent_derivative(const Matrix& a, const Scalar& lambda, std::uint32_t j,
                                    std::int64_t target_exponent) {
  require_usable_lambda(lambda);
  if (j == 0) return neumann_resolvent(a, lambda, target_exponent);
  if (lambda.is_exact_zero()) {
    // Only the k = j term survives: j! A^j.
    return {falling_factorial_scalar_times(a.pow(j), j, j), AbsExp::neg_inf(), lambda, static_cast<std::int64_t>(j)};
  }
  // k(k−1)…(k−j+1) λ^{k−j} A^k = λ^{−j} · ff(k, j) · (λA)^k with |ff| ≤ 1.
  const std::int64_t offset = -static_cast<std::int64_t>(j) * lambda.abs_exponent().value();
  PowerTailCertifier cert(lambda * a, default_iteration_cap(a));
  const auto cut = cert.certify(AbsExp{target_exponent}, offset, j);
  Matrix sum = Matrix::zero(a.dim(), a.field());
  for (std::int64_t k = j; k <= cut.truncation; ++k)
    sum = sum + falling_factorial_scalar_times(cert.power(static_cast<std::size_t>(k)), static_cast<std::uint64_t>(k), j);
  return {lambda.pow(-static_cast<std::int64_t>(j)) * sum, cut.tail + offset, lambda, cut.truncation};
}

Matrix resolvent_derivative_closed(const Matrix& a, const Scalar& lambda, std::uint32_t n) {
  return resolvent_derivatives_closed(a, lambda, n).back();
}

std::vector<Matrix> resolvent_derivatives_closed(const Matrix& a, const Scalar& lambda, std::uint32_t n) {
  std::vector<Matrix> d;
  d.push_back(exact_resolvent(a, lambda));
  for (std::uint32_t m = 1; m <= n; ++m) {
    Matrix acc = Matrix::zero(a.dim(), a.field());
    mpz_class binom = 1;  // C(m−1, i)
    for (std::uint32_t i = 0; i < m; ++i) {
      acc = acc + Scalar::from_rational(mpq_class(binom), a.field()) * (d[i] * a * d[m - 1 - i]);
      binom = binom * (m - 1 - i) / (i + 1);
    }
    d.push_back(std::move(acc));
  }
  return d;
}

ResolventValue taylor_recenter(const Matrix& a, const Scalar& mu, const Scalar& lambda, std::int64_t target_exponent) {
  require_usable_lambda(mu);
  require_usable_lambda(lambda);
  const Field& f = a.field();
  const Matrix id = Matrix::identity(a.dim(), f);
  const Matrix shifted = id - lambda * a;
  std::int64_t working_target = target_exponent;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const ResolventValue r_mu = neumann_resolvent(a, mu, working_target);
    const Scalar step = lambda - mu;
    // X = μ^{-1}(R(μ) − I)(λ − μ); at μ = 0, R(0) = I and X = (λ − μ)A.
    Matrix x = mu.is_exact_zero() ? step * a : (step / mu) * (r_mu.value - id);
    PowerTailCertifier cert(std::move(x), default_iteration_cap(a));
    const std::int64_t offset = r_mu.value.norm_bound_exponent().is_finite()
                                    ? r_mu.value.norm_bound_exponent().value()
                                    : 0;
    PowerTailCertifier::Cut cut{};
    try {
      cut = cert.certify(AbsExp{working_target}, offset);
    } catch (const DomainError&) {
      throw DomainError("Taylor recentering at mu = " + mu.to_string() + " does not converge at lambda = " +
                        lambda.to_string() + ": lambda is outside the disk of convergence around mu");
    }
    Matrix v = Matrix::zero(a.dim(), f);
    for (std::int64_t j = 0; j <= cut.truncation; ++j) v = v + cert.power(static_cast<std::size_t>(j)) * r_mu.value;
    const Matrix defect = shifted * v - id;
    const AbsExp dn = defect.is_exact_zero() ? AbsExp::neg_inf() : defect.norm_bound_exponent();
    if (dn >= AbsExp{0})
      throw DomainError("Taylor recentering residual does not contract at lambda = " + lambda.to_string());
    const AbsExp tail = v.norm_bound_exponent() + dn;
    if (tail <= AbsExp{target_exponent}) return {std::move(v), tail, lambda, cut.truncation};
    working_target -= tail.value() - target_exponent;
  }
  throw DomainError("Taylor recentering could not reach the requested precision");
}

std::optional<std::int64_t> domain_radius_estimate(const Matrix& a, std::int64_t k_max) {
  if (k_max < static_cast<std::int64_t>(a.dim()))
    throw InvalidInput("domain_radius_estimate needs k_max >= dimension");
  auto ceil_div = [](std::int64_t num, std::int64_t den) {  // den > 0
    return num >= 0 ? (num + den - 1) / den : -((-num) / den);
  };
  std::optional<std::int64_t> best;
  Matrix power = a;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    if (k > 1) power = power * a;
    if (power.is_exact_zero()) return std::nullopt;
    const AbsExp e = power.norm_bound_exponent();
    // |λ| ≤ p^(r−1) contracts the k-th power iff (r−1)k + e_k < 0.
    const std::int64_t r = ceil_div(k - e.value(), k) - 1;
    best = best ? std::max(*best, r) : r;
  }
  return best;
}

}  // namespace padicres
