#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padicres/criteria.hpp"
#include "padicres/errors.hpp"
#include "test_support.hpp"

using namespace padicres;
using padicres::testing::Rng;

namespace {

Matrix mat(const std::vector<std::vector<std::string>>& rows, const Field& f) { return Matrix::from_strings(rows, f); }
Scalar sc(const char* s, const Field& f) { return Scalar::parse(s, f); }

Matrix nilpotent(const Field& f) { return mat({{"0", "1"}, {"0", "0"}}, f); }

// S_n = A^n R^{n+1} and T_n = (AR)^n with the resolvent from plain Gauss–Jordan.
oracle::QMatrix oracle_s(const oracle::QMatrix& a, const mpq_class& lambda, std::uint64_t n) {
  const auto r = *oracle::inverse(oracle::add(oracle::identity(a.size()), oracle::scale(-lambda, a)));
  return oracle::multiply(oracle::power(a, n), oracle::power(r, n + 1));
}

oracle::QMatrix oracle_t(const oracle::QMatrix& a, const mpq_class& lambda, std::uint64_t n) {
  const auto r = *oracle::inverse(oracle::add(oracle::identity(a.size()), oracle::scale(-lambda, a)));
  return oracle::power(oracle::multiply(a, r), n);
}

CheckConfig config_with(std::vector<Scalar> lambdas) {
  CheckConfig c;
  c.lambdas = std::move(lambdas);
  return c;
}

}  // namespace

TEST_CASE("check_derivative_formula examples") {
  const Field f3 = Field::exact(3);
  const auto nil = check_derivative_formula(nilpotent(f3), sc("3", f3), 1, PrecisionBudget{});
  CHECK(nil.residual.is_neg_inf());
  CHECK(nil.series_residual.is_neg_inf());

  const Field f2 = Field::exact(2);
  const Matrix a = mat({{"2"}}, f2);
  CHECK(resolvent_derivative_closed(a, sc("2", f2), 1) == mat({{"2/9"}}, f2));
  CHECK(check_derivative_formula(a, sc("2", f2), 1, PrecisionBudget{}).residual.is_neg_inf());

  Rng rng(303);
  const Field c3 = Field::capped(3, 64);
  for (int t = 0; t < 5; ++t) {
    const Matrix b = Matrix::from_rationals(rng.integral_matrix(3, 3, 9, 9), c3);
    const auto r = check_derivative_formula(b, sc("3", c3), 2, PrecisionBudget{});
    CHECK(r.residual <= AbsExp{-(64 - 10)});
    CHECK(r.series_residual <= max(r.series_tail, AbsExp{-(64 - 10)}));
  }
}

TEST_CASE("criterion_S examples") {
  const Field f = Field::exact(2);
  const Matrix a = mat({{"2"}}, f);
  const Matrix s1 = criterion_S(a, sc("2", f), 1);
  CHECK(s1 == mat({{"2/9"}}, f));
  CHECK(s1.norm_exponent() == AbsExp{-1});
  CHECK(criterion_S(a, sc("2", f), 0) == exact_resolvent(a, sc("2", f)));
  for (const char* l : {"1", "3/5", "8"}) CHECK(criterion_S(nilpotent(f), sc(l, f), 1) == nilpotent(f));
  CHECK_THROWS_AS(criterion_S(a, Scalar::zero(f), 1), InvalidInput);
}

TEST_CASE("criterion_T examples") {
  const Field f = Field::exact(2);
  const Matrix t1 = criterion_T(mat({{"2"}}, f), sc("2", f), 1);
  CHECK(t1 == mat({{"-2/3"}}, f));
  CHECK(t1.norm_exponent() == AbsExp{-1});
  CHECK(criterion_T(nilpotent(f), sc("5", f), 2).is_exact_zero());
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const Field fp = Field::exact(p);
    const Matrix t = criterion_T(Matrix::identity(2, fp), Scalar::from_integer(p, fp), 1);
    CHECK(t == Matrix::diagonal(std::vector<Scalar>(2, Scalar::from_rational(1, 1 - static_cast<long>(p), fp))));
    CHECK(t.norm_exponent() == AbsExp{0});
  }
  CHECK_THROWS_AS(criterion_T(nilpotent(f), sc("2", f), 0), InvalidInput);
}

TEST_CASE("series_identity_T examples") {
  const Field f = Field::exact(2);
  const auto nil = series_identity_T(nilpotent(f), sc("2", f), 0, 0);
  CHECK(nil.residual.is_neg_inf());
  CHECK(nil.resummed_residual.is_neg_inf());

  const Field c = Field::capped(2, 64);
  const auto capped = series_identity_T(mat({{"2"}}, c), sc("2", c), 1, 40);
  CHECK(capped.residual <= AbsExp{-(64 - 10)});
  CHECK(capped.tail <= AbsExp{-80});

  const auto diag = series_identity_T(mat({{"2", "0"}, {"0", "3"}}, f), sc("2", f), 0, 64);
  CHECK(diag.resummed_residual.is_neg_inf());
  CHECK(diag.residual <= diag.tail);
  CHECK_FALSE(diag.residual.is_neg_inf());

  CHECK(series_identity_truncation(mat({{"2"}}, f), sc("2", f), 1, -54) >= 1);
  CHECK_THROWS_AS(series_identity_T(mat({{"2"}}, f), sc("2", f), 3, 2), InvalidInput);
}

TEST_CASE("reconstruction_check examples") {
  const Field f = Field::exact(2);
  CHECK(reconstruction_check(mat({{"2"}}, f), sc("2", f), 1).is_neg_inf());
  CHECK(reconstruction_check(mat({{"2"}}, f), sc("2", f), 0).is_neg_inf());
  Rng rng(77);
  for (int t = 0; t < 5; ++t) {
    const Matrix a = Matrix::from_rationals(rng.integral_matrix(3, 3, 9, 9), Field::exact(3));
    CHECK(reconstruction_check(a, sc("3", a.field()), 3).is_neg_inf());
  }
}

TEST_CASE("lambda_to_zero_probe examples") {
  const Field f = Field::exact(2);
  const std::vector<std::int64_t> ms{1, 2, 3, 4, 5, 6};
  const auto scalar = lambda_to_zero_probe(mat({{"2"}}, f), 1, ms);
  CHECK(scalar.target == AbsExp{-1});
  CHECK(scalar.stabilized);
  for (const auto& [m, e] : scalar.bounds) CHECK(e == AbsExp{-1});

  const auto nil = lambda_to_zero_probe(nilpotent(f), 2, ms);
  CHECK(nil.target.is_neg_inf());
  CHECK(nil.stabilized);

  const auto diag = lambda_to_zero_probe(mat({{"2", "0"}, {"0", "3"}}, f), 2, ms);
  CHECK(diag.target == AbsExp{0});
  CHECK(diag.stabilized);
  CHECK(diag.bounds.back().second == AbsExp{0});

  CHECK_THROWS_AS(lambda_to_zero_probe(nilpotent(f), 1, {3, 2}), InvalidInput);
}

TEST_CASE("probe bounds dominate the target and settle once |lambda|·‖A‖ < 1") {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const std::uint32_t p = t % 2 ? 3 : 2;
    const Matrix a = Matrix::from_rationals(rng.rational_matrix(2, 9, 9), Field::exact(p));
    const auto r = domain_radius_estimate(a, 40);
    const std::int64_t start = std::max<std::int64_t>(1, 1 - r.value_or(0));
    const AbsExp na = a.norm_exponent();
    std::vector<std::int64_t> ms;
    for (std::int64_t m = start; m <= start + (na.is_finite() ? std::max<std::int64_t>(na.value(), 0) : 0) + 3; ++m)
      ms.push_back(m);
    for (std::uint32_t k = 0; k <= 3; ++k) {
      const auto probe = lambda_to_zero_probe(a, k, ms);
      for (const auto& [m, e] : probe.bounds) {
        CHECK(e >= probe.target);
        if (na.is_finite() && m > na.value()) CHECK(e == probe.target);
      }
      CHECK(probe.stabilized);
    }
  }
}

TEST_CASE("criteria agree with the Gauss-Jordan oracle; identities are exact") {
  Rng rng(2718);
  for (int t = 0; t < 30; ++t) {
    const std::uint32_t p = static_cast<std::uint32_t>(std::vector<int>{2, 3, 5}[t % 3]);
    const Field f = Field::exact(p);
    const std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto rows = rng.integral_matrix(d, p, 9, 9);
    const Matrix a = Matrix::from_rationals(rows, f);
    for (const mpq_class lambda : {mpq_class(p), mpq_class(p * p), mpq_class((1 + p) * p)}) {
      const Scalar l = Scalar::from_rational(lambda, f);
      for (std::uint32_t n = 0; n <= 6; ++n) {
        CHECK(criterion_S(a, l, n).to_rationals() == oracle_s(rows, lambda, n));
        if (n > 0) {
          CHECK(criterion_T(a, l, n).to_rationals() == oracle_t(rows, lambda, n));
          CHECK(check_derivative_formula(a, l, n, PrecisionBudget{}).residual.is_neg_inf());
        }
      }
      for (std::uint32_t k = 0; k <= 10; ++k) CHECK(reconstruction_check(a, l, k).is_neg_inf());
    }
  }
}

TEST_CASE("scaled criteria on A at lambda equal criteria on A/omega at lambda·omega") {
  Rng rng(5);
  for (std::uint32_t p : {2u, 3u}) {
    const Field f = Field::exact(p);
    for (const mpq_class omega : {mpq_class(p), mpq_class(1, p), mpq_class(1 + p)}) {
      const Scalar w = Scalar::from_rational(omega, f);
      const Matrix a = Matrix::from_rationals(rng.integral_matrix(2, p, 9, 9), f);
      const Matrix b = w.inverse() * a;
      const Scalar l = Scalar::prime_power(2, f);
      for (std::uint32_t n = 1; n <= 5; ++n) {
        CHECK(criterion_S_scaled(a, l, n, w) == criterion_S(b, l * w, n));
        CHECK(criterion_T_scaled(a, l, n, w) == criterion_T(b, l * w, n));
      }
    }
  }
}

TEST_CASE("OperatorSystem validation") {
  const Field f = Field::exact(2);
  const Matrix half = mat({{"1/2"}}, f);
  SUBCASE("declared radius above the certified one is rejected") {
    try {
      OperatorSystem::create(half, Scalar::one(f), 0, SeminormFamily::sup(1));
      FAIL("expected rejection");
    } catch (const HypothesisError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("U_A = D(0,1)") != std::string::npos);
      CHECK(msg.find("-1") != std::string::npos);
    }
    const auto ok = OperatorSystem::create(half, Scalar::one(f), -1, SeminormFamily::sup(1));
    CHECK(ok.certified_radius() == -1);
    CHECK_FALSE(ok.hypothesis_holds());
  }
  SUBCASE("Jordan block at radius 0") {
    const auto s = OperatorSystem::create(mat({{"1", "1"}, {"0", "1"}}, f), Scalar::one(f), 0, SeminormFamily::sup(2));
    CHECK(s.certified_radius() == 0);
    CHECK(s.hypothesis_holds());
  }
  SUBCASE("bad inputs") {
    CHECK_THROWS_AS(OperatorSystem::create(half, Scalar::zero(f), -1, SeminormFamily::sup(1)), HypothesisError);
    CHECK_THROWS_AS(OperatorSystem::create(half, Scalar::one(f), -1, SeminormFamily::sup(2)), InvalidInput);
    CHECK_THROWS_AS(OperatorSystem::create(half, Scalar::one(f), -1, SeminormFamily{1, {{AbsExp::neg_inf()}}}),
                    HypothesisError);
    CHECK_THROWS_AS(OperatorSystem::create(half, Scalar::one(Field::exact(3)), -1, SeminormFamily::sup(1)),
                    InvalidInput);
  }
}

TEST_CASE("config validation and default grid") {
  const Field f = Field::exact(2);
  const auto jordan = OperatorSystem::create(mat({{"1", "1"}, {"0", "1"}}, f), Scalar::one(f), 0, SeminormFamily::sup(2));
  const auto grid = default_lambda_grid(jordan);
  REQUIRE(grid.size() == 6);
  CHECK(grid[0] == sc("2", f));
  CHECK(grid[1] == sc("6", f));
  CHECK(grid[5] == sc("24", f));
  CHECK_NOTHROW(config_with(grid).validate(jordan));
  CHECK_THROWS_AS(config_with({}).validate(jordan), InvalidInput);
  CHECK_THROWS_AS(config_with({sc("1", f)}).validate(jordan), InvalidInput);
  CHECK_THROWS_AS(config_with({Scalar::zero(f)}).validate(jordan), InvalidInput);

  // ω = 1/8 leaves no grid point inside D(0, 2^-3).
  const auto deep =
      OperatorSystem::create(mat({{"1/8"}}, f), sc("1/8", f), -3, SeminormFamily::sup(1));
  CHECK(default_lambda_grid(deep).empty());
  CHECK_THROWS_AS(config_with(default_lambda_grid(deep)).validate(deep), InvalidInput);
}

TEST_CASE("hyp_verdict: Jordan block") {
  for (const Field f : {Field::exact(2), Field::capped(2, 64)}) {
    CAPTURE(to_string(f.backend));
    const auto system =
        OperatorSystem::create(mat({{"1", "1"}, {"0", "1"}}, f), Scalar::one(f), 0, SeminormFamily::sup(2));
    const VerdictReport v = hyp_verdict(system, config_with(default_lambda_grid(system)));
    CHECK(v.oracle == PowerBound::bounded);
    CHECK(v.powers.status == EquiStatus::witnessed);
    CHECK(v.criterion_s.status == EquiStatus::witnessed);
    CHECK(v.criterion_t.status == EquiStatus::witnessed);
    CHECK(v.agreement);
    CHECK(v.forward.applicable);
    CHECK(v.forward.stable);
    CHECK(v.forward.constant == AbsExp{0});
    CHECK(v.forward.holds);
    for (const auto& r : v.residuals) {
      CAPTURE(r.name);
      CHECK(r.pass);
    }
    CHECK(v.witness_spot_checks > 0);
    CHECK(v.witness_violations == 0);
    CHECK(v.all_pass());
  }
}

TEST_CASE("hyp_verdict: scaled diagonal diag(1/2), omega = 1/2") {
  const Field f = Field::exact(2);
  const auto system = OperatorSystem::create(mat({{"1/2"}}, f), sc("1/2", f), -1, SeminormFamily::sup(1));
  CHECK(system.hypothesis_holds());
  CHECK(criterion_S_scaled(system.a(), sc("4", f), 1, system.omega()) == mat({{"1"}}, f));
  const VerdictReport v = hyp_verdict(system, config_with({sc("4", f)}));
  CHECK(v.powers.status == EquiStatus::witnessed);
  CHECK(v.criterion_s.status == EquiStatus::witnessed);
  CHECK(v.agreement);
  bool found = false;
  for (const auto& g : v.criterion_s.norms)
    if (g.n == 1) {
      CHECK(g.exponent == AbsExp{0});
      found = true;
    }
  CHECK(found);
  CHECK(v.all_pass());
}

TEST_CASE("hyp_verdict: unbounded diagonal at its certified radius") {
  const Field f = Field::exact(2);
  const auto system = OperatorSystem::create(mat({{"1/2", "0"}, {"0", "3"}}, f), Scalar::one(f), -1,
                                             SeminormFamily::sup(2));
  const VerdictReport v = hyp_verdict(system, config_with(default_lambda_grid(system)));
  CHECK(v.oracle == PowerBound::unbounded);
  CHECK(v.powers.status == EquiStatus::refuted);
  CHECK(v.criterion_s.status == EquiStatus::refuted);
  CHECK(v.criterion_t.status == EquiStatus::refuted);
  REQUIRE(v.powers.refutation.has_value());
  CHECK_FALSE(v.powers.stabilized);
  CHECK(v.agreement);
  CHECK_FALSE(v.forward.applicable);
  CHECK(v.all_pass());
}

TEST_CASE("hyp_verdict: quasi-equicontinuity of (1/p)·B") {
  Rng rng(12);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const Field f = Field::exact(p);
    const Matrix b = Matrix::from_rationals(rng.integral_matrix(2, p, 9, 9), f);
    const Scalar omega = Scalar::from_rational(mpq_class(1, p), f);
    const auto system = OperatorSystem::create(omega * b, omega, -1, SeminormFamily::sup(2));
    const VerdictReport v = hyp_verdict(system, config_with(default_lambda_grid(system)));
    CHECK(v.powers.status == EquiStatus::witnessed);
    CHECK(v.agreement);
    CHECK(v.all_pass());
  }
}
