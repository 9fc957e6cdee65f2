#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padicres/errors.hpp"
#include "padicres/resolvent.hpp"
#include "test_support.hpp"

using namespace padicres;
using padicres::testing::Rng;

namespace {

Matrix mat(const std::vector<std::vector<std::string>>& rows, const Field& f) { return Matrix::from_strings(rows, f); }
Scalar sc(const char* s, const Field& f) { return Scalar::parse(s, f); }

/// ‖a − b‖ exponent, exact backend.
AbsExp distance(const Matrix& a, const Matrix& b) { return (a - b).norm_exponent(); }

}  // namespace

TEST_CASE("neumann_resolvent examples") {
  const Field f = Field::exact(2);
  SUBCASE("scalar 2 at lambda 2 approximates -1/3") {
    const auto r = neumann_resolvent(mat({{"2"}}, f), sc("2", f), -40);
    CHECK(r.tail_exponent <= AbsExp{-40});
    CHECK(distance(r.value, mat({{"-1/3"}}, f)) <= r.tail_exponent);
    // Capped with 3 digits: unit ≡ 5 mod 8.
    const auto rc = neumann_resolvent(mat({{"2"}}, Field::capped(2, 3)), sc("2", Field::capped(2, 3)), -3);
    CHECK(rc.value(0, 0).lift() == 5);
  }
  SUBCASE("nilpotent series terminates after one step") {
    const Matrix a = mat({{"0", "1"}, {"0", "0"}}, f);
    const Scalar lambda = sc("7/3", f);
    const auto r = neumann_resolvent(a, lambda, -64);
    CHECK(r.tail_exponent.is_neg_inf());
    CHECK(r.truncation == 1);
    CHECK(r.value == Matrix::identity(2, f) + lambda * a);
  }
  SUBCASE("diag(2,3) at lambda 2") {
    const auto r = neumann_resolvent(mat({{"2", "0"}, {"0", "3"}}, f), sc("2", f), -50);
    CHECK(distance(r.value, mat({{"-1/3", "0"}, {"0", "-1/5"}}, f)) <= r.tail_exponent);
    CHECK(Scalar::from_rational(-1, 5, Field::capped(2, 3)).lift() == 3);
  }
  SUBCASE("lambda = 0 gives the identity") {
    const auto r = neumann_resolvent(mat({{"1/2", "3"}, {"1", "1"}}, f), Scalar::zero(f), -10);
    CHECK(r.value == Matrix::identity(2, f));
    CHECK(r.tail_exponent.is_neg_inf());
  }
  SUBCASE("divergent series is a domain error") {
    CHECK_THROWS_AS(neumann_resolvent(mat({{"1"}}, f), sc("1", f), -10), DomainError);
    CHECK_THROWS_AS(neumann_resolvent(mat({{"1/2"}}, f), sc("2", f), -10), DomainError);
    CHECK_THROWS_AS(neumann_resolvent(mat({{"1", "1"}, {"0", "1"}}, f), sc("3", f), -10), DomainError);
  }
}

TEST_CASE("exact_resolvent examples") {
  const Field f = Field::exact(2);
  CHECK(exact_resolvent(mat({{"2"}}, f), sc("2", f)) == mat({{"-1/3"}}, f));
  const Matrix a = mat({{"1/2", "3"}, {"5", "-7"}}, f);
  CHECK(exact_resolvent(a, Scalar::zero(f)) == Matrix::identity(2, f));
  CHECK(exact_resolvent(mat({{"2", "0"}, {"0", "3"}}, f), sc("2", f)) == mat({{"-1/3", "0"}, {"0", "-1/5"}}, f));
  CHECK_THROWS_AS(exact_resolvent(mat({{"1/2"}}, f), sc("2", f)), SingularError);
}

TEST_CASE("resolvent_derivative examples") {
  const Field f = Field::exact(2);
  const auto d = resolvent_derivative(mat({{"2"}}, f), sc("2", f), 1, -40);
  CHECK(d.tail_exponent <= AbsExp{-40});
  CHECK(distance(d.value, mat({{"2/9"}}, f)) <= d.tail_exponent);

  const Matrix nil = mat({{"0", "1"}, {"0", "0"}}, f);
  const auto dn = resolvent_derivative(nil, sc("5", f), 1, -40);
  CHECK(dn.value == nil);
  CHECK(dn.tail_exponent.is_neg_inf());

  const Matrix a = mat({{"2", "4"}, {"6", "1"}}, f);
  const auto d0 = resolvent_derivative(a, sc("2", f), 0, -30);
  CHECK(d0.value == neumann_resolvent(a, sc("2", f), -30).value);

  // At λ = 0 only j! A^j survives.
  CHECK(resolvent_derivative(a, Scalar::zero(f), 3, -10).value == Scalar::from_integer(6, f) * a.pow(3));
}

TEST_CASE("closed-form derivative matches the scalar formula n! a^n / (1 - λa)^(n+1)") {
  const Field f = Field::exact(3);
  const Scalar a = sc("5/2", f), lambda = sc("9", f);
  const Matrix m = Matrix::diagonal(std::vector<Scalar>{a});
  Scalar fact = Scalar::one(f);
  for (std::uint32_t n = 0; n <= 6; ++n) {
    if (n > 0) fact *= Scalar::from_integer(n, f);
    const Scalar expected = fact * a.pow(n) / (Scalar::one(f) - lambda * a).pow(n + 1);
    CHECK(resolvent_derivative_closed(m, lambda, n)(0, 0) == expected);
  }
}

TEST_CASE("taylor_recenter examples") {
  const Field f = Field::exact(2);
  SUBCASE("scalar 2 recentred from 2 to 4") {
    const auto r = taylor_recenter(mat({{"2"}}, f), sc("2", f), sc("4", f), -40);
    CHECK(r.tail_exponent <= AbsExp{-40});
    CHECK(distance(r.value, mat({{"-1/7"}}, f)) <= r.tail_exponent);
  }
  SUBCASE("lambda = mu returns R(mu)") {
    const Matrix a = mat({{"2", "1"}, {"0", "4"}}, f);
    const auto r = taylor_recenter(a, sc("2", f), sc("2", f), -30);
    CHECK(r.truncation == 0);
    CHECK(distance(r.value, exact_resolvent(a, sc("2", f))) <= r.tail_exponent);
  }
  SUBCASE("nilpotent recentring is a finite expansion") {
    const Matrix a = mat({{"0", "1"}, {"0", "0"}}, f);
    const auto r = taylor_recenter(a, sc("1", f), sc("3", f), -30);
    CHECK(r.value == Matrix::identity(2, f) + sc("3", f) * a);
    CHECK(r.tail_exponent.is_neg_inf());
  }
  SUBCASE("outside the recentred disk") {
    CHECK_THROWS_AS(taylor_recenter(mat({{"2"}}, f), sc("2", f), sc("1/2", f), -20), DomainError);
  }
}

TEST_CASE("domain_radius_estimate examples") {
  const Field f = Field::exact(2);
  CHECK(domain_radius_estimate(mat({{"2"}}, f), 50) == 1);
  CHECK(domain_radius_estimate(mat({{"1", "1"}, {"0", "1"}}, f), 50) == 0);
  CHECK(domain_radius_estimate(mat({{"1/2"}}, f), 50) == -1);
  CHECK_FALSE(domain_radius_estimate(mat({{"0", "1"}, {"0", "0"}}, f), 50).has_value());
  CHECK_THROWS_AS(domain_radius_estimate(Matrix::identity(3, f), 2), InvalidInput);
}

TEST_CASE("domain_radius_estimate matches the Newton polygon of the characteristic polynomial") {
  Rng rng(77);
  for (int t = 0; t < 60; ++t) {
    const std::uint32_t p = t % 3 == 0 ? 2 : (t % 3 == 1 ? 3 : 5);
    const std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto rows = rng.rational_matrix(d, 12, 12);
    const Matrix a = Matrix::from_rationals(rows, Field::exact(p));
    CAPTURE(p);
    CHECK(domain_radius_estimate(a, 200) == oracle::neumann_radius_from_spectrum(rows, p));
  }
}

TEST_CASE("Neumann resolvent agrees with the exact solve within its tail") {
  Rng rng(2);
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    const std::uint32_t p = t % 3 == 0 ? 2 : (t % 3 == 1 ? 3 : 5);
    const Field f = Field::exact(p);
    const std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto rows = rng.rational_matrix(d, 9, 9);
    const Matrix a = Matrix::from_rationals(rows, f);
    const auto r = domain_radius_estimate(a, 100);
    // λ = p^m·u with |λ| < p^r.
    const std::int64_t m = (r ? -*r : 0) + rng.uniform(1, 2);
    const Scalar lambda = Scalar::prime_power(m, f) * Scalar::from_rational(rng.integral_rational(p, 5, 5) + p, f);
    if (lambda.is_zero()) continue;
    const auto nr = neumann_resolvent(a, lambda, -30);
    const Matrix ex = exact_resolvent(a, lambda);
    CHECK(nr.tail_exponent <= AbsExp{-30});
    CHECK(distance(nr.value, ex) <= nr.tail_exponent);
    // ‖(I − λA)·value − I‖ ≤ p^(tail + ‖I − λA‖)
    const Matrix shifted = Matrix::identity(d, f) - lambda * a;
    CHECK((shifted * nr.value - Matrix::identity(d, f)).norm_exponent() <=
          nr.tail_exponent + shifted.norm_exponent());
    // R − I = λ A R exactly.
    CHECK(ex - Matrix::identity(d, f) == lambda * (a * ex));
    ++checked;
  }
  CHECK(checked > 90);
}

TEST_CASE("derivative series matches divided differences") {
  Rng rng(19);
  for (int t = 0; t < 40; ++t) {
    const std::uint32_t p = t % 2 == 0 ? 3 : 2;
    const Field f = Field::exact(p);
    const std::size_t d = t % 2 == 0 ? 1 : 3;
    const Matrix a = Matrix::from_rationals(rng.integral_matrix(d, p, 9, 9), f);
    const Scalar lambda = Scalar::prime_power(1, f) * Scalar::from_rational(rng.integral_rational(p, 5, 5), f);
    const Scalar h = Scalar::prime_power(rng.uniform(3, 8), f);
    const Matrix r0 = exact_resolvent(a, lambda);
    const Matrix r1 = exact_resolvent(a, lambda + h);
    const auto deriv = resolvent_derivative(a, lambda, 1, -80);
    const Matrix dd = h.inverse() * (r1 - r0);
    // Second-order remainder h·R(λ+h)·A·R·A·R bounds the divided difference error.
    const AbsExp c = r1.norm_exponent() + a.norm_exponent() + a.norm_exponent() + r0.norm_exponent() +
                     r0.norm_exponent();
    CHECK(distance(dd, deriv.value) <= max(h.abs_exponent() + c, deriv.tail_exponent));
  }
}

TEST_CASE("Taylor recentering agrees with direct evaluation") {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const std::uint32_t p = t % 2 == 0 ? 2 : 5;
    const Field f = Field::exact(p);
    const std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    const Matrix a = Matrix::from_rationals(rng.integral_matrix(d, p, 7, 7), f);
    const Scalar mu = Scalar::prime_power(rng.uniform(1, 2), f) * Scalar::from_rational(rng.integral_rational(p, 4, 4), f);
    const Scalar lambda = Scalar::prime_power(rng.uniform(1, 3), f);
    if (mu.is_zero()) continue;
    const auto rec = taylor_recenter(a, mu, lambda, -30);
    const auto direct = neumann_resolvent(a, lambda, -30);
    CHECK(distance(rec.value, direct.value) <= max(rec.tail_exponent, direct.tail_exponent));
  }
}

TEST_CASE("capped Neumann resolvent tracks the exact value") {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const std::uint32_t p = 3;
    const auto rows = rng.integral_matrix(3, p, 9, 9);
    const Matrix ae = Matrix::from_rationals(rows, Field::exact(p));
    const Matrix ac = Matrix::from_rationals(rows, Field::capped(p, 64));
    const auto rc = neumann_resolvent(ac, Scalar::from_integer(3, ac.field()), -54);
    const Matrix ex = exact_resolvent(ae, Scalar::from_integer(3, ae.field())).convert(ac.field());
    CHECK((rc.value - ex).norm_bound_exponent() <= AbsExp{-54});
  }
}
