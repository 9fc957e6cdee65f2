#include "padicres/acceptance.hpp"

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "padicres/cli.hpp"
#include "padicres/criteria.hpp"
#include "padicres/errors.hpp"
#include "padicres/instances.hpp"
#include "padicres/oracles.hpp"
#include "padicres/report.hpp"
#include "padicres/spec_io.hpp"

#ifndef PADICRES_GOLDEN_DIR
#error "PADICRES_GOLDEN_DIR must point at the checked-in golden files"
#endif

namespace padicres::acceptance {

namespace {

using oracle::QMatrix;
namespace fs = std::filesystem;

constexpr int kDigits = 64;
constexpr std::int64_t kTolerance = -(kDigits - 10);
constexpr std::size_t kMaxNotes = 5;

class Tally {
 public:
  template <class Describe>
  void check(bool ok, Describe&& describe) {
    ++assertions_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < kMaxNotes) notes_.push_back(describe());
  }
  void note(std::string text) { notes_.push_back(std::move(text)); }

  std::size_t assertions() const { return assertions_; }
  std::size_t failures() const { return failures_; }
  std::vector<std::string>& notes() { return notes_; }

 private:
  std::size_t assertions_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
};

std::string str(const AbsExp& e) { return e.to_string(); }

// ---------------------------------------------------------------------------
// Instances

SpecDocument random_bounded(std::size_t d, std::uint32_t p, std::uint64_t seed) {
  return generate_instance("randomBounded",
                           {{"d", std::to_string(d)}, {"p", std::to_string(p)}, {"seed", std::to_string(seed)}});
}

struct SuiteMatrix {
  std::uint32_t p;
  QMatrix rows;
};

// The 50 seeded power-bounded matrices shared by AC1, AC2, AC3 and AC6.
const std::vector<SuiteMatrix>& identity_suite() {
  static const std::vector<SuiteMatrix> suite = [] {
    std::vector<SuiteMatrix> out;
    for (std::uint64_t i = 0; i < 50; ++i) {
      const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5}[i % 3];
      out.push_back({p, random_bounded(1 + i % 4, p, 1000 + i).matrix});
    }
    return out;
  }();
  return suite;
}

std::vector<mpq_class> identity_lambdas(std::uint32_t p) { return {mpq_class(p), mpq_class(p * p), mpq_class((1 + p) * p)}; }

QMatrix resolvent_oracle(const QMatrix& a, const mpq_class& lambda) {
  return *oracle::inverse(oracle::add(oracle::identity(a.size()), oracle::scale(-lambda, a)));
}

QMatrix sub(const QMatrix& a, const QMatrix& b) { return oracle::add(a, oracle::scale(-1, b)); }

bool charpoly_integral(const QMatrix& a, std::uint32_t p) {
  for (const auto& c : oracle::charpoly_by_minors(a))
    if (c != 0 && oracle::valuation(c, p) < 0) return false;
  return true;
}

std::string matrix_text(const QMatrix& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < a.size(); ++j) s += (j ? "," : "") + a[i][j].get_str();
    s += "]";
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// AC1

void ac1(Tally& t) {
  const auto start = std::chrono::steady_clock::now();
  const PrecisionBudget budget{kDigits, 10};
  for (const auto& [p, rows] : identity_suite()) {
    const Field fe = Field::exact(p), fc = Field::capped(p, kDigits);
    const Matrix a = Matrix::from_rationals(rows, fe);
    t.check(charpoly_integral(rows, p) && power_bounded_oracle(a) == PowerBound::bounded,
            [&] { return "instance " + matrix_text(rows) + " is not power bounded"; });
    const Matrix ac = a.convert(fc);
    for (const mpq_class& lq : identity_lambdas(p)) {
      for (std::uint32_t n = 1; n <= 4; ++n) {
        const auto exact = check_derivative_formula(a, Scalar::from_rational(lq, fe), n, budget);
        t.check(exact.residual.is_neg_inf(), [&] {
          return "exact residual " + str(exact.residual) + " for " + matrix_text(rows) + ", lambda " + lq.get_str() +
                 ", n " + std::to_string(n);
        });
        t.check(exact.series_residual <= exact.series_tail, [&] { return "series residual exceeds its tail"; });
        const auto capped = check_derivative_formula(ac, Scalar::from_rational(lq, fc), n, budget);
        t.check(capped.residual <= AbsExp{kTolerance}, [&] {
          return "capped residual " + str(capped.residual) + " for " + matrix_text(rows) + ", lambda " +
                 lq.get_str() + ", n " + std::to_string(n);
        });
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.check(secs <= 60.0, [&] { return "runtime " + std::to_string(secs) + " s exceeds 60 s"; });
}

// ---------------------------------------------------------------------------
// AC2

void ac2(Tally& t) {
  for (const auto& [p, rows] : identity_suite()) {
    const Field f = Field::exact(p);
    const Matrix a = Matrix::from_rationals(rows, f);
    const std::size_t d = rows.size();
    for (const mpq_class& lq : identity_lambdas(p)) {
      const QMatrix r = resolvent_oracle(rows, lq);
      const QMatrix x = sub(r, oracle::identity(d));
      const QMatrix ar = oracle::multiply(rows, r);
      const Scalar l = Scalar::from_rational(lq, f);
      for (std::uint32_t n = 0; n <= 6; ++n) {
        mpq_class scale = 1;
        for (std::uint32_t i = 0; i < n; ++i) scale /= lq;
        const QMatrix s_route1 = oracle::scale(scale, oracle::multiply(oracle::power(x, n), r));
        const QMatrix s_route2 = oracle::multiply(oracle::power(rows, n), oracle::power(r, n + 1));
        t.check(s_route1 == s_route2, [&] { return "S routes differ for " + matrix_text(rows); });
        t.check(criterion_S(a, l, n).to_rationals() == s_route1,
                [&] { return "criterion_S differs from the oracle for " + matrix_text(rows); });
        if (n == 0) continue;
        const QMatrix t_route1 = oracle::scale(scale, oracle::power(x, n));
        const QMatrix t_route2 = oracle::power(ar, n);
        t.check(t_route1 == t_route2, [&] { return "T routes differ for " + matrix_text(rows); });
        t.check(criterion_T(a, l, n).to_rationals() == t_route1,
                [&] { return "criterion_T differs from the oracle for " + matrix_text(rows); });
      }
    }
  }
}

// ---------------------------------------------------------------------------
// AC3

std::vector<SuiteMatrix> forward_suite() {
  std::vector<SuiteMatrix> out = identity_suite();
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (const std::string& eigen : std::vector<std::string>{"1", "-1", std::to_string(1 + p)})
      out.push_back({p, generate_instance("jordan", {{"d", "3"}, {"p", std::to_string(p)}, {"eigen", eigen}}).matrix});
    out.push_back({p, generate_instance("diagonal", {{"p", std::to_string(p)}, {"entries", "2:3:1/7"}}).matrix});
  }
  return out;
}

void ac3(Tally& t) {
  for (const auto& [p, rows] : forward_suite()) {
    const Field f = Field::exact(p);
    const Matrix a = Matrix::from_rationals(rows, f);
    if (!charpoly_integral(rows, p)) {
      t.check(false, [&] { return "forward suite instance " + matrix_text(rows) + " is not power bounded"; });
      continue;
    }
    std::optional<std::int64_t> c200, c500;
    QMatrix power = oracle::identity(rows.size());
    for (int k = 0; k <= 500; ++k) {
      const auto e = oracle::norm_exponent(power, p);
      if (e && (!c500 || *e > *c500)) c500 = e;
      if (k == 200) c200 = c500;
      power = oracle::multiply(power, rows);
    }
    t.check(c200 == c500, [&] { return "C not stable through k = 500 for " + matrix_text(rows); });
    const std::int64_t c = c200.value_or(std::numeric_limits<std::int64_t>::min());
    for (std::int64_t m = 1; m <= 3; ++m) {
      for (const mpq_class& u : {mpq_class(1), mpq_class(1 + p)}) {
        mpq_class lq = u;
        for (std::int64_t i = 0; i < m; ++i) lq *= p;
        const Scalar l = Scalar::from_rational(lq, f);
        for (std::uint32_t n = 0; n <= 12; ++n) {
          const auto s = oracle::norm_exponent(criterion_S(a, l, n).to_rationals(), p);
          t.check(!s || *s <= c, [&] {
            return "||S_" + std::to_string(n) + "(" + lq.get_str() + ")|| = p^" + std::to_string(*s) + " exceeds C = p^" +
                   std::to_string(c) + " for " + matrix_text(rows);
          });
          if (n == 0) continue;
          const auto tn = oracle::norm_exponent(criterion_T(a, l, n).to_rationals(), p);
          t.check(!tn || *tn <= c, [&] {
            return "||T_" + std::to_string(n) + "(" + lq.get_str() + ")|| exceeds C for " + matrix_text(rows);
          });
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// AC4

struct MixedInstance {
  std::string label;
  SpecDocument doc;
};

std::vector<MixedInstance> mixed_suite() {
  std::vector<MixedInstance> out;
  std::mt19937_64 rng(4242);
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  auto prime = [&](std::size_t i) { return std::vector<std::uint32_t>{2, 3, 5}[i % 3]; };
  auto add = [&](std::string label, std::string kind, InstanceParams params) {
    SpecDocument doc = generate_instance(kind, params);
    doc.k_max = 200;
    // Every other instance carries a weighted second seminorm.
    if (out.size() % 2 == 1) {
      std::vector<AbsExp> w;
      for (std::size_t j = 0; j < doc.matrix.size(); ++j)
        w.push_back(pick(4) == 0 ? AbsExp::neg_inf() : AbsExp{static_cast<std::int64_t>(pick(5)) - 2});
      doc.seminorms = {std::vector<AbsExp>(doc.matrix.size(), AbsExp{0}), w};
    }
    out.push_back({std::move(label) + " " + kind, std::move(doc)});
  };
  for (std::size_t i = 0; i < 40; ++i)
    add("bounded", "randomBounded",
        {{"d", std::to_string(1 + i % 3)}, {"p", std::to_string(prime(i))}, {"seed", std::to_string(5000 + i)}});
  const std::vector<std::string> unit_eigen{"1", "-1", "3/5", "7", "1/3"};
  for (std::size_t i = 0; i < 15; ++i) {
    const std::uint32_t p = prime(i);
    std::string eigen = unit_eigen[i % unit_eigen.size()];
    if (mpq_class(eigen).get_den() % p == 0 || mpq_class(eigen).get_num() % p == 0) eigen = "1";
    add("bounded", "jordan", {{"d", std::to_string(2 + i % 2)}, {"p", std::to_string(p)}, {"eigen", eigen}});
  }
  for (std::size_t i = 0; i < 15; ++i) {
    const std::uint32_t p = prime(i);
    std::string entries;
    for (std::size_t j = 0; j < 1 + i % 3; ++j) {
      std::uint64_t den = 0;
      do den = 1 + pick(7);
      while (den % p == 0);
      entries += (j ? ":" : "") + std::to_string(static_cast<std::int64_t>(pick(19)) - 9) + "/" + std::to_string(den);
    }
    add("bounded", "diagonal", {{"p", std::to_string(p)}, {"entries", entries}});
  }
  const std::vector<std::string> shifts{"1/2", "4", "1/3", "9", "1/5", "25", "1", "2/7"};
  for (std::size_t i = 0; i < 10; ++i) {
    const std::size_t d = 2 + i % 3;
    std::string super;
    for (std::size_t j = 0; j + 1 < d; ++j) super += (j ? ":" : "") + shifts[pick(shifts.size())];
    add("nilpotent", "staircaseShift", {{"d", std::to_string(d)}, {"p", std::to_string(prime(i))}, {"super", super}});
  }
  for (std::size_t i = 0; i < 10; ++i) {
    const std::uint32_t p = prime(i);
    const std::string small = "1/" + std::to_string(i % 2 ? p * p : p);
    add("unbounded", "diagonal", {{"p", std::to_string(p)}, {"entries", small + (i % 3 ? ":1" : ":3:" + small)}});
  }
  for (std::size_t i = 0; i < 10; ++i) {
    const std::uint32_t p = prime(i);
    add("unbounded", "jordan", {{"d", std::to_string(2 + i % 2)}, {"p", std::to_string(p)}, {"eigen", "1/" + std::to_string(p)}});
  }
  return out;
}

void ac4(Tally& t, std::ostream& out) {
  std::size_t witnessed = 0, refuted = 0;
  for (const auto& inst : mixed_suite()) {
    try {
      const BuiltSystem built = build_system(inst.doc);
      const VerdictReport v = hyp_verdict(built.system, built.config);
      const bool bounded = charpoly_integral(inst.doc.matrix, inst.doc.prime);
      t.check((v.oracle == PowerBound::bounded) == bounded,
              [&] { return "oracle verdict mismatch on " + inst.label + "\n" + serialize_spec(inst.doc); });
      t.check(v.agreement, [&] {
        return "verdicts disagree on " + inst.label + " (powers " + to_string(v.powers.status) + ", S " +
               to_string(v.criterion_s.status) + ", T " + to_string(v.criterion_t.status) + ")\n" +
               serialize_spec(inst.doc);
      });
      (v.powers.status == EquiStatus::witnessed ? witnessed : refuted) += 1;
    } catch (const Error& e) {
      t.check(false, [&] { return inst.label + " raised: " + e.what() + "\n" + serialize_spec(inst.doc); });
    }
  }
  t.check(witnessed > 0 && refuted > 0, [&] { return std::string("suite is not mixed"); });
  out << "    AC4 statuses: " << witnessed << " witnessed, " << refuted << " refuted\n";
}

// ---------------------------------------------------------------------------
// AC5

void ac5(Tally& t) {
  std::mt19937_64 rng(55);
  std::size_t bounded = 0, unbounded = 0;
  for (int i = 0; i < 100; ++i) {
    const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5}[i % 3];
    QMatrix rows(3, std::vector<mpq_class>(3));
    for (auto& row : rows)
      for (auto& x : row) {
        x = mpq_class(static_cast<long>(rng() % 13) - 6, static_cast<unsigned long>(rng() % 4 + 1));
        x.canonicalize();
      }
    const Matrix a = Matrix::from_rationals(rows, Field::exact(p));
    const bool integral = charpoly_integral(rows, p);
    const PowerBound verdict = power_bounded_oracle(a);
    t.check((verdict == PowerBound::bounded) == integral,
            [&] { return "oracle disagrees with the cofactor charpoly on " + matrix_text(rows); });
    std::optional<std::int64_t> max200, max500;
    QMatrix power = oracle::identity(3);
    for (int k = 0; k <= 500; ++k) {
      const auto e = oracle::norm_exponent(power, p);
      if (e && (!max500 || *e > *max500)) max500 = e;
      if (k == 200) max200 = max500;
      power = oracle::multiply(power, rows);
    }
    if (verdict == PowerBound::bounded) {
      ++bounded;
      t.check(max200 == max500, [&] { return "bounded verdict but norms still grow: " + matrix_text(rows); });
    } else {
      ++unbounded;
      t.check(max500 && *max500 > 20, [&] { return "unbounded verdict but norms stay <= p^20: " + matrix_text(rows); });
    }
  }
  t.check(bounded > 0 && unbounded > 0, [&] { return std::string("sample is not mixed"); });
}

// ---------------------------------------------------------------------------
// AC6

void ac6(Tally& t) {
  const auto& suite = identity_suite();
  for (std::size_t i = 0; i < suite.size(); i += 2) {
    const auto& [p, rows] = suite[i];
    const Field f = Field::exact(p);
    const Matrix a = Matrix::from_rationals(rows, f);
    const std::size_t d = rows.size();
    for (const mpq_class& lq : {mpq_class(p), mpq_class((1 + p) * p)}) {
      const Scalar l = Scalar::from_rational(lq, f);
      const QMatrix shifted = sub(oracle::identity(d), oracle::scale(lq, rows));
      for (std::uint32_t k = 0; k <= 10; ++k) {
        const QMatrix s = criterion_S(a, l, k).to_rationals();
        t.check(oracle::multiply(oracle::power(shifted, k + 1), s) == oracle::power(rows, k),
                [&] { return "reconstruction fails at k = " + std::to_string(k) + " for " + matrix_text(rows); });
        t.check(reconstruction_check(a, l, k).is_neg_inf(), [&] { return "library reconstruction residual nonzero"; });
      }
      for (std::uint32_t n = 0; n <= 4; ++n) {
        const std::int64_t kk = series_identity_truncation(a, l, n, kTolerance);
        const auto exact = series_identity_T(a, l, n, kk);
        t.check(exact.tail <= AbsExp{kTolerance} && exact.residual <= exact.tail && exact.resummed_residual.is_neg_inf(),
                [&] {
                  return "series identity n = " + std::to_string(n) + ": residual " + str(exact.residual) + ", tail " +
                         str(exact.tail) + ", resummed " + str(exact.resummed_residual) + " for " + matrix_text(rows);
                });
        const Field fc = Field::capped(p, kDigits);
        const auto capped = series_identity_T(a.convert(fc), Scalar::from_rational(lq, fc), n, kk);
        t.check(capped.residual <= max(capped.tail, AbsExp{kTolerance}),
                [&] { return "capped series residual " + str(capped.residual) + " for " + matrix_text(rows); });
      }
    }
  }
}

// ---------------------------------------------------------------------------
// AC7

void ac7(Tally& t) {
  std::uint64_t seed = 700;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const Field f = Field::exact(p);
    for (const mpq_class& omega : {mpq_class(p), mpq_class(1, p), mpq_class(1 + p)}) {
      const Scalar w = Scalar::from_rational(omega, f);
      for (int rep = 0; rep < 3; ++rep) {
        const Matrix a = Matrix::from_rationals(random_bounded(2 + rep % 2, p, seed++).matrix, f);
        const Matrix b = Matrix::from_rationals(oracle::scale(1 / omega, a.to_rationals()), f);
        for (const mpq_class& lq : {mpq_class(p * p), mpq_class((1 + p) * p * p)}) {
          const Scalar l = Scalar::from_rational(lq, f);
          const Scalar z = Scalar::from_rational(lq * omega, f);
          for (std::uint32_t n = 0; n <= 6; ++n) {
            t.check(criterion_S_scaled(a, l, n, w) == criterion_S(b, z, n), [&] {
              return "scaled S_" + std::to_string(n) + " differs, omega " + omega.get_str() + ", A " +
                     matrix_text(a.to_rationals());
            });
            if (n > 0)
              t.check(criterion_T_scaled(a, l, n, w) == criterion_T(b, z, n), [&] {
                return "scaled T_" + std::to_string(n) + " differs, omega " + omega.get_str();
              });
          }
        }
      }
    }
    // Quasi-equicontinuity: A = (1/p)·B with B power bounded and ω = 1/p.
    for (int rep = 0; rep < 3; ++rep) {
      SpecDocument doc = random_bounded(2 + rep % 2, p, seed++);
      doc.matrix = oracle::scale(mpq_class(1, p), doc.matrix);
      doc.omega = mpq_class(1, p);
      doc.declared_radius_exponent = -1;
      const BuiltSystem built = build_system(doc);
      const VerdictReport v = hyp_verdict(built.system, built.config);
      t.check(v.oracle == PowerBound::bounded && v.powers.status == EquiStatus::witnessed && v.agreement && v.all_pass(),
              [&] { return "quasi-equicontinuity not witnessed for\n" + serialize_spec(doc); });
    }
  }
  const Field f2 = Field::exact(2);
  const Scalar half = Scalar::from_rational(1, 2, f2);
  const Matrix s1 = criterion_S_scaled(Matrix::from_strings({{"1/2"}}, f2), Scalar::from_integer(4, f2), 1, half);
  t.check(s1.to_rationals() == QMatrix{{mpq_class(1)}}, [&] { return "diag(1/2), omega 1/2, lambda 4: S_1 != 1"; });
}

// ---------------------------------------------------------------------------
// AC8

void ac8(Tally& t) {
  const auto start = std::chrono::steady_clock::now();
  for (std::uint32_t p : {2u, 3u, 5u})
    for (std::uint64_t k = 0; k <= 200; ++k)
      for (std::uint64_t n = 0; n <= k; ++n) {
        const std::int64_t v = binom_valuation(k, n, p);
        t.check(v >= 0 && v == oracle::binom_valuation_legendre(k, n, p), [&] {
          return "v_" + std::to_string(p) + "(C(" + std::to_string(k) + "," + std::to_string(n) + ")) wrong";
        });
      }

  std::mt19937_64 rng(88);
  auto rational = [&](long max_num, unsigned long max_den) {
    mpq_class q(static_cast<long>(rng() % (2 * max_num + 1)) - max_num, rng() % max_den + 1);
    q.canonicalize();
    return q;
  };
  auto rational_rows = [&](std::size_t d, long max_num, unsigned long max_den) {
    QMatrix m(d, std::vector<mpq_class>(d));
    for (auto& row : m)
      for (auto& x : row) x = rational(max_num, max_den);
    return m;
  };

  // Seminorm axioms: homogeneity and the ultrametric inequality.
  for (int i = 0; i < 600; ++i) {
    const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5}[i % 3];
    const Field f = Field::exact(p);
    const std::size_t d = 1 + rng() % 4;
    SeminormWeights w;
    for (std::size_t j = 0; j < d; ++j)
      w.push_back(rng() % 4 == 0 ? AbsExp::neg_inf() : AbsExp{static_cast<std::int64_t>(rng() % 7) - 3});
    Vector x, y, sum, scaled;
    const Scalar lambda = Scalar::from_rational(rational(50, 50), f);
    for (std::size_t j = 0; j < d; ++j) {
      x.push_back(Scalar::from_rational(rational(60, 60), f));
      y.push_back(Scalar::from_rational(rational(60, 60), f));
      sum.push_back(x[j] + y[j]);
      scaled.push_back(lambda * x[j]);
    }
    t.check(seminorm_eval(w, scaled) == lambda.abs_exponent() + seminorm_eval(w, x),
            [&] { return std::string("seminorm homogeneity fails"); });
    t.check(seminorm_eval(w, sum) <= max(seminorm_eval(w, x), seminorm_eval(w, y)),
            [&] { return std::string("seminorm ultrametric inequality fails"); });
  }

  // Operator norm: submultiplicative and ultrametric, checked on oracle norms.
  for (int i = 0; i < 400; ++i) {
    const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5}[i % 3];
    const std::size_t d = 1 + rng() % 4;
    const QMatrix qa = rational_rows(d, 30, 30), qb = rational_rows(d, 30, 30);
    const Matrix a = Matrix::from_rationals(qa, Field::exact(p)), b = Matrix::from_rationals(qb, Field::exact(p));
    auto as_exp = [](const std::optional<std::int64_t>& e) { return e ? AbsExp{*e} : AbsExp::neg_inf(); };
    t.check(a.norm_exponent() == as_exp(oracle::norm_exponent(qa, p)), [&] { return "norm differs from oracle"; });
    t.check((a * b).norm_exponent() <= a.norm_exponent() + b.norm_exponent(),
            [&] { return "submultiplicativity fails for " + matrix_text(qa); });
    t.check((a + b).norm_exponent() <= max(a.norm_exponent(), b.norm_exponent()),
            [&] { return "ultrametric norm inequality fails"; });
  }

  // Taylor recentering agrees with the direct resolvent within its tail.
  for (int i = 0; i < 30; ++i) {
    const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5}[i % 3];
    const Field f = Field::exact(p);
    const Matrix a = Matrix::from_rationals(random_bounded(1 + i % 3, p, 8000 + i).matrix, f);
    const Scalar mu = Scalar::from_integer(p, f);
    const Scalar lambda = mu + Scalar::prime_power(2, f) * Scalar::from_integer(1 + i % 4, f);
    const ResolventValue v = taylor_recenter(a, mu, lambda, -30);
    const AbsExp diff = residual_exponent(v.value - exact_resolvent(a, lambda));
    t.check(v.tail_exponent <= AbsExp{-30} && diff <= v.tail_exponent,
            [&] { return "Taylor recentering off by p^" + str(diff) + ", tail p^" + str(v.tail_exponent); });
  }

  // λ → 0 probes settle at ‖A^k‖ once |λ|·‖A‖ < 1.
  for (int i = 0; i < 40; ++i) {
    const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5}[i % 3];
    const Field f = Field::exact(p);
    const QMatrix qa = rational_rows(1 + i % 3, 9, 9);
    const Matrix a = Matrix::from_rationals(qa, f);
    const auto r = domain_radius_estimate(a, 60);
    const AbsExp na = a.norm_exponent();
    const std::int64_t lo = std::max<std::int64_t>(1, 1 - r.value_or(0));
    const std::int64_t hi = std::max(lo, na.is_finite() ? na.value() : 0) + 3;
    std::vector<std::int64_t> ms;
    for (std::int64_t m = lo; m <= hi; ++m) ms.push_back(m);
    for (std::uint32_t k = 0; k <= 3; ++k) {
      const LambdaProbe probe = lambda_to_zero_probe(a, k, ms);
      const auto ak = oracle::norm_exponent(oracle::power(qa, k), p);
      t.check(probe.target == (ak ? AbsExp{*ak} : AbsExp::neg_inf()), [&] { return "probe target is not ||A^k||"; });
      t.check(probe.stabilized && probe.bounds.back().second == probe.target,
              [&] { return "probe does not settle for " + matrix_text(qa) + ", k " + std::to_string(k); });
    }
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.check(t.assertions() >= 10000, [&] { return "only " + std::to_string(t.assertions()) + " assertions"; });
  t.check(secs <= 120.0, [&] { return "runtime " + std::to_string(secs) + " s exceeds 120 s"; });
}

// ---------------------------------------------------------------------------
// AC9

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  o << text;
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  std::vector<std::string> full{"padicres"};
  full.insert(full.end(), args.begin(), args.end());
  return run_cli(full, out, err);
}

void ac9(Tally& t) {
  const fs::path golden = PADICRES_GOLDEN_DIR;
  const fs::path tmp = fs::temp_directory_path() / ("padicres-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(tmp);

  struct Golden {
    std::string name;
    int exit_code;
  };
  for (const Golden& g : {Golden{"jordan", 0}, Golden{"staircase", 0}, Golden{"scaled_diagonal", 0},
                          Golden{"finding", 1}, Golden{"rejected", 2}}) {
    const fs::path spec = golden / (g.name + ".spec.json");
    const fs::path expected = golden / (g.name + ".report.json");
    if (!fs::exists(spec) || !fs::exists(expected)) {
      t.check(false, [&] { return "missing golden files for " + g.name; });
      continue;
    }
    const fs::path first = tmp / (g.name + ".1.json"), second = tmp / (g.name + ".2.json");
    const int c1 = cli({"check", "--spec", spec.string(), "--report", first.string()});
    const int c2 = cli({"check", "--spec", spec.string(), "--report", second.string()});
    t.check(c1 == g.exit_code && c2 == g.exit_code,
            [&] { return g.name + ": exit " + std::to_string(c1) + ", expected " + std::to_string(g.exit_code); });
    const std::string report = slurp(first);
    t.check(report == slurp(second), [&] { return g.name + ": repeated runs differ"; });
    t.check(report == slurp(expected), [&] { return g.name + ": report differs from " + expected.string(); });
  }

  // Spot checks on the content of the worked goldens.
  {
    const std::string jordan = slurp(golden / "jordan.report.json");
    t.check(jordan.find("\"agreement\": true") != std::string::npos, [&] { return "jordan: agreement not true"; });
    t.check(jordan.find("\"constant_exponent\": 0") != std::string::npos, [&] { return "jordan: C != 1"; });
    const std::string rejected = slurp(golden / "rejected.report.json");
    t.check(rejected.find("U_A = D(0,1)") != std::string::npos,
            [&] { return "rejection does not name the violated hypothesis"; });
  }

  // Exit-code contract on malformed input and usage errors.
  const fs::path bad_json = tmp / "bad.json", zero_den = tmp / "zero_den.json", report = tmp / "r.json";
  spit(bad_json, "{\"prime\": 2,\n \"matrix\": [[\"1\"]\n");
  spit(zero_den, "{\"prime\": 2, \"matrix\": [[\"1/0\"]], \"declared_radius_exponent\": 0}\n");
  t.check(cli({"check", "--spec", bad_json.string(), "--report", report.string()}) == kExitInvalid,
          [&] { return "malformed JSON is not exit 2"; });
  t.check(slurp(report).find("line 3") != std::string::npos, [&] { return "syntax error is not located"; });
  t.check(cli({"check", "--spec", zero_den.string(), "--report", report.string()}) == kExitInvalid,
          [&] { return "zero denominator is not exit 2"; });
  t.check(slurp(report).find("matrix[0][0]") != std::string::npos, [&] { return "field error is not located"; });
  t.check(cli({"check", "--spec", (tmp / "missing.json").string(), "--report", report.string()}) == kExitInvalid,
          [&] { return "missing spec file is not exit 2"; });
  t.check(cli({"check", "--report", report.string()}) == kExitInvalid, [&] { return "missing --spec is not exit 2"; });
  t.check(cli({"frobnicate"}) == kExitInvalid, [&] { return "unknown command is not exit 2"; });

  // generate → check round trip.
  const fs::path generated = tmp / "generated.json";
  t.check(cli({"generate", "--kind", "jordan", "--params", "d=2,p=2,eigen=1", "--out", generated.string()}) == kExitPass,
          [&] { return "generate failed"; });
  t.check(slurp(generated) == slurp(golden / "jordan.spec.json"), [&] { return "generated Jordan spec differs"; });
  t.check(cli({"generate", "--kind", "jordan", "--params", "d=0,p=2,eigen=1", "--out", generated.string()}) ==
              kExitInvalid,
          [&] { return "invalid dimension is not exit 2"; });

  std::error_code ec;
  fs::remove_all(tmp, ec);
}

// ---------------------------------------------------------------------------

struct Criterion {
  const char* id;
  const char* title;
  std::function<void(Tally&, std::ostream&)> run;
};

}  // namespace

std::vector<CriterionResult> run_all(std::ostream& out) {
  const std::vector<Criterion> criteria{
      {"AC1", "derivative identity on 50 bounded matrices, exact and capped", [](Tally& t, std::ostream&) { ac1(t); }},
      {"AC2", "dual-route exactness of S_n and T_n, n <= 6", [](Tally& t, std::ostream&) { ac2(t); }},
      {"AC3", "forward criterion bound with C stable through k = 500", [](Tally& t, std::ostream&) { ac3(t); }},
      {"AC4", "verdict agreement on a 100-instance mixed suite", ac4},
      {"AC5", "power-boundedness oracle on 100 seeded 3x3 matrices", [](Tally& t, std::ostream&) { ac5(t); }},
      {"AC6", "reconstruction (k <= 10) and binomial series identities", [](Tally& t, std::ostream&) { ac6(t); }},
      {"AC7", "omega-scaling coherence and quasi-equicontinuity", [](Tally& t, std::ostream&) { ac7(t); }},
      {"AC8", "ultrametric property suites", [](Tally& t, std::ostream&) { ac8(t); }},
      {"AC9", "CLI goldens and exit codes", [](Tally& t, std::ostream&) { ac9(t); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& c : criteria) {
    Tally tally;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(tally, out);
    } catch (const std::exception& e) {
      tally.check(false, [&] { return std::string("aborted: ") + e.what(); });
    }
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.assertions = tally.assertions();
    r.failures = tally.failures();
    r.pass = r.failures == 0;
    r.notes = std::move(tally.notes());
    out << (r.pass ? "PASS " : "FAIL ") << r.id << "  " << r.title << "  (" << r.assertions << " assertions, "
        << std::fixed << std::setprecision(2) << r.seconds << " s)\n";
    for (const auto& n : r.notes) out << "    " << n << "\n";
    out.flush();
    results.push_back(std::move(r));
  }
  return results;
}

int run_suite(std::ostream& out) {
  const auto results = run_all(out);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  out << passed << "/" << results.size() << " acceptance criteria pass\n";
  return passed == results.size() ? 0 : 1;
}

}  // namespace padicres::acceptance
