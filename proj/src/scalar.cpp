#include "padicres/scalar.hpp"

#include <algorithm>
#include <utility>

#include "padicres/errors.hpp"

namespace padicres {

const char* to_string(Backend b) { return b == Backend::exact ? "exact" : "capped"; }

void PrecisionBudget::validate() const {
  if (digits <= 0) throw InvalidInput("precision digits must be positive");
  if (slack < 0 || slack >= digits) throw InvalidInput("precision slack must satisfy 0 <= slack < digits");
}

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void Field::validate() const {
  if (!is_prime(prime)) throw InvalidInput("p = " + std::to_string(prime) + " is not a prime");
  if (digits <= 0) throw InvalidInput("capped precision must be positive");
}

mpz_class prime_power_z(std::uint32_t p, std::uint64_t k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, k);
  return r;
}

std::int64_t valuation_z(const mpz_class& n, std::uint32_t p) {
  if (n == 0) throw InvalidInput("valuation of zero integer");
  mpz_class tmp;
  mpz_class pz = p;
  return static_cast<std::int64_t>(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

std::int64_t valuation_q(const mpq_class& q, std::uint32_t p) {
  return valuation_z(q.get_num(), p) - valuation_z(q.get_den(), p);
}

std::int64_t binom_valuation(std::uint64_t k, std::uint64_t n, std::uint32_t p) {
  if (n > k) throw InvalidInput("binom_valuation requires n <= k");
  if (p < 2) throw InvalidInput("binom_valuation requires p >= 2");
  std::uint64_t a = n, b = k - n, carry = 0;
  std::int64_t carries = 0;
  while (a > 0 || b > 0 || carry > 0) {
    const std::uint64_t s = a % p + b % p + carry;
    carry = s >= p ? 1 : 0;
    carries += static_cast<std::int64_t>(carry);
    a /= p;
    b /= p;
  }
  return carries;
}

Scalar::Scalar() : field_(Field::exact(2)), q_(0) {}

Scalar Scalar::make_capped(const Field& f, std::int64_t v, mpz_class residue, std::int64_t relprec) {
  // residue is defined modulo p^relprec and is nonzero there; normalize so the
  // stored unit has p ∤ unit.
  Scalar s;
  s.field_ = f;
  const mpz_class mod = prime_power_z(f.prime, static_cast<std::uint64_t>(relprec));
  mpz_class r = residue % mod;
  if (r < 0) r += mod;
  if (r == 0) {
    s.kind_ = Kind::approx_zero;
    s.val_ = v + relprec;
    return s;
  }
  const std::int64_t t = valuation_z(r, f.prime);
  if (t > 0) mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), prime_power_z(f.prime, t).get_mpz_t());
  s.kind_ = Kind::nonzero;
  s.val_ = v + t;
  s.relprec_ = relprec - t;
  s.unit_ = std::move(r);
  return s;
}

Scalar Scalar::from_rational(const mpq_class& q_in, const Field& field) {
  field.validate();
  mpq_class q = q_in;
  q.canonicalize();
  Scalar s;
  s.field_ = field;
  if (q == 0) {
    s.kind_ = Kind::exact_zero;
    s.q_ = 0;
    return s;
  }
  if (field.backend == Backend::exact) {
    s.kind_ = Kind::nonzero;
    s.q_ = q;
    return s;
  }
  const std::uint32_t p = field.prime;
  mpz_class num = q.get_num(), den = q.get_den(), pz = p;
  const auto vn = static_cast<std::int64_t>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t()));
  const auto vd = static_cast<std::int64_t>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()));
  const mpz_class mod = prime_power_z(p, static_cast<std::uint64_t>(field.digits));
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  return make_capped(field, vn - vd, num * inv, field.digits);
}

Scalar Scalar::from_rational(const mpz_class& num, const mpz_class& den, const Field& field) {
  if (den == 0) throw InvalidInput("zero denominator");
  return from_rational(mpq_class(num, den), field);
}

Scalar Scalar::from_integer(long v, const Field& field) { return from_rational(mpq_class(v), field); }

Scalar Scalar::parse(const std::string& text, const Field& field) {
  const auto slash = text.find('/');
  mpz_class num, den = 1;
  auto parse_int = [&](const std::string& t) {
    mpz_class z;
    if (t.empty() || z.set_str(t, 10) != 0) throw InvalidInput("malformed rational '" + text + "'");
    return z;
  };
  if (text.find_first_of(" \t\n") != std::string::npos) throw InvalidInput("malformed rational '" + text + "'");
  if (slash == std::string::npos) {
    num = parse_int(text);
  } else {
    num = parse_int(text.substr(0, slash));
    const std::string d = text.substr(slash + 1);
    if (!d.empty() && (d[0] == '-' || d[0] == '+')) throw InvalidInput("malformed rational '" + text + "'");
    den = parse_int(d);
  }
  if (den == 0) throw InvalidInput("zero denominator in '" + text + "'");
  return from_rational(num, den, field);
}

Scalar Scalar::zero(const Field& field) { return from_rational(mpq_class(0), field); }
Scalar Scalar::one(const Field& field) { return from_rational(mpq_class(1), field); }

Scalar Scalar::prime_power(std::int64_t e, const Field& field) {
  const mpz_class pk = prime_power_z(field.prime, static_cast<std::uint64_t>(e < 0 ? -e : e));
  return e >= 0 ? from_rational(mpq_class(pk), field) : from_rational(mpq_class(1, pk), field);
}

Scalar Scalar::approx_zero(std::int64_t absolute_precision, const Field& field) {
  if (field.backend != Backend::capped) throw InvalidInput("approximate zero requires the capped backend");
  Scalar s;
  s.field_ = field;
  s.kind_ = Kind::approx_zero;
  s.val_ = absolute_precision;
  return s;
}

std::optional<std::int64_t> Scalar::valuation() const {
  if (kind_ != Kind::nonzero) return std::nullopt;
  if (field_.backend == Backend::exact) return valuation_q(q_, field_.prime);
  return val_;
}

AbsExp Scalar::abs_exponent() const {
  const auto v = valuation();
  return v ? AbsExp{-*v} : AbsExp::neg_inf();
}

AbsExp Scalar::abs_bound_exponent() const {
  if (kind_ == Kind::approx_zero) return AbsExp{-val_};
  return abs_exponent();
}

bool Scalar::is_zero() const { return kind_ != Kind::nonzero; }
bool Scalar::is_exact_zero() const { return kind_ == Kind::exact_zero; }
bool Scalar::is_approx_zero() const { return kind_ == Kind::approx_zero; }

std::optional<std::int64_t> Scalar::relative_precision() const {
  if (field_.backend != Backend::capped) return std::nullopt;
  if (kind_ == Kind::nonzero) return relprec_;
  if (kind_ == Kind::approx_zero) return 0;
  return std::nullopt;
}

std::optional<std::int64_t> Scalar::absolute_precision() const {
  if (field_.backend != Backend::capped) return std::nullopt;
  if (kind_ == Kind::nonzero) return val_ + relprec_;
  if (kind_ == Kind::approx_zero) return val_;
  return std::nullopt;
}

const mpq_class& Scalar::rational() const {
  if (field_.backend != Backend::exact) throw InvalidInput("rational() requires the exact backend");
  return q_;
}

mpq_class Scalar::lift() const {
  if (field_.backend == Backend::exact) return q_;
  if (kind_ != Kind::nonzero) return mpq_class(0);
  const mpz_class pk = prime_power_z(field_.prime, static_cast<std::uint64_t>(val_ < 0 ? -val_ : val_));
  mpq_class r = val_ >= 0 ? mpq_class(unit_ * pk) : mpq_class(unit_, pk);
  r.canonicalize();
  return r;
}

std::vector<std::uint32_t> Scalar::unit_digits() const {
  if (field_.backend != Backend::capped || kind_ != Kind::nonzero)
    throw InvalidInput("unit_digits() requires a nonzero capped value");
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(relprec_));
  mpz_class u = unit_;
  for (std::int64_t i = 0; i < relprec_; ++i) {
    out.push_back(static_cast<std::uint32_t>(mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), field_.prime)));
  }
  return out;
}

Scalar Scalar::convert(const Field& target) const {
  if (target.prime != field_.prime) throw InvalidInput("cannot convert between different primes");
  if (target.backend == Backend::exact) {
    if (kind_ == Kind::exact_zero) return zero(target);
    return from_rational(lift(), target);
  }
  if (field_.backend == Backend::exact) return from_rational(q_, target);
  // capped → capped: precision can only shrink.
  Scalar s = *this;
  s.field_ = target;
  if (kind_ == Kind::nonzero && relprec_ > target.digits) {
    s = make_capped(target, val_, unit_, target.digits);
  }
  return s;
}

void Scalar::require_compatible(const Scalar& other) const {
  if (field_.prime != other.field_.prime) throw InvalidInput("prime mismatch between operands");
  if (field_.backend != other.field_.backend) throw InvalidInput("backend mismatch between operands");
}

namespace {
Field merged(const Field& a, const Field& b) { return {a.prime, a.backend, std::min(a.digits, b.digits)}; }
}  // namespace

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (kind_ != Kind::nonzero) return s;
  if (field_.backend == Backend::exact) {
    s.q_ = -q_;
  } else {
    const mpz_class mod = prime_power_z(field_.prime, static_cast<std::uint64_t>(relprec_));
    s.unit_ = mod - unit_;
  }
  return s;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  a.require_compatible(b);
  const Field f = merged(a.field_, b.field_);
  using Kind = Scalar::Kind;
  if (f.backend == Backend::exact) {
    return Scalar::from_rational(mpq_class(a.q_ + b.q_), f);
  }
  if (a.kind_ == Kind::exact_zero) return b.convert(f);
  if (b.kind_ == Kind::exact_zero) return a.convert(f);
  const std::int64_t abs_a = *a.absolute_precision();
  const std::int64_t abs_b = *b.absolute_precision();
  const std::int64_t abs_prec = std::min(abs_a, abs_b);
  if (a.kind_ == Kind::approx_zero && b.kind_ == Kind::approx_zero) return Scalar::approx_zero(abs_prec, f);
  if (a.kind_ == Kind::approx_zero || b.kind_ == Kind::approx_zero) {
    const Scalar& x = a.kind_ == Kind::nonzero ? a : b;
    if (x.val_ >= abs_prec) return Scalar::approx_zero(abs_prec, f);
    return Scalar::make_capped(f, x.val_, x.unit_, abs_prec - x.val_);
  }
  const std::int64_t vmin = std::min(a.val_, b.val_);
  if (abs_prec <= vmin) return Scalar::approx_zero(abs_prec, f);
  const mpz_class sum = a.unit_ * prime_power_z(f.prime, static_cast<std::uint64_t>(a.val_ - vmin)) +
                        b.unit_ * prime_power_z(f.prime, static_cast<std::uint64_t>(b.val_ - vmin));
  return Scalar::make_capped(f, vmin, sum, abs_prec - vmin);
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  a.require_compatible(b);
  const Field f = merged(a.field_, b.field_);
  using Kind = Scalar::Kind;
  if (f.backend == Backend::exact) return Scalar::from_rational(mpq_class(a.q_ * b.q_), f);
  if (a.kind_ == Kind::exact_zero || b.kind_ == Kind::exact_zero) return Scalar::zero(f);
  if (a.kind_ == Kind::approx_zero && b.kind_ == Kind::approx_zero) return Scalar::approx_zero(a.val_ + b.val_, f);
  if (a.kind_ == Kind::approx_zero) return Scalar::approx_zero(a.val_ + b.val_, f);
  if (b.kind_ == Kind::approx_zero) return Scalar::approx_zero(a.val_ + b.val_, f);
  const std::int64_t n = std::min(a.relprec_, b.relprec_);
  return Scalar::make_capped(f, a.val_ + b.val_, a.unit_ * b.unit_, n);
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

Scalar Scalar::inverse() const {
  if (kind_ == Kind::exact_zero) throw SingularError("inverse of zero");
  if (kind_ == Kind::approx_zero) throw SingularError("inverse of an element that is zero to precision");
  if (field_.backend == Backend::exact) {
    Scalar s = *this;
    s.q_ = 1 / q_;
    s.q_.canonicalize();
    return s;
  }
  const mpz_class mod = prime_power_z(field_.prime, static_cast<std::uint64_t>(relprec_));
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t());
  return make_capped(field_, -val_, inv, relprec_);
}

Scalar Scalar::pow(std::int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  Scalar result = one(field_);
  Scalar base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.field_.prime != b.field_.prime || a.field_.backend != b.field_.backend) return false;
  if (a.kind_ != b.kind_) return false;
  using Kind = Scalar::Kind;
  if (a.field_.backend == Backend::exact) return a.q_ == b.q_;
  switch (a.kind_) {
    case Kind::exact_zero: return true;
    case Kind::approx_zero: return a.val_ == b.val_;
    case Kind::nonzero: return a.val_ == b.val_ && a.relprec_ == b.relprec_ && a.unit_ == b.unit_;
  }
  return false;
}

bool Scalar::agrees_with(const Scalar& other) const { return (*this - other).is_zero(); }

std::string Scalar::to_string() const {
  if (field_.backend == Backend::exact) return q_.get_str();
  const std::string p = std::to_string(field_.prime);
  switch (kind_) {
    case Kind::exact_zero: return "0";
    case Kind::approx_zero: return "O(" + p + "^" + std::to_string(val_) + ")";
    case Kind::nonzero: return lift().get_str() + " + O(" + p + "^" + std::to_string(val_ + relprec_) + ")";
  }
  return {};
}

}  // namespace padicres
