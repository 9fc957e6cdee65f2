#include "padicres/oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace padicres::oracle {

std::int64_t factorial_valuation(std::uint64_t n, std::uint32_t p) {
  std::int64_t v = 0;
  for (std::uint64_t pk = p; pk <= n; pk *= p) {
    v += static_cast<std::int64_t>(n / pk);
    if (pk > n / p) break;
  }
  return v;
}

std::int64_t binom_valuation_legendre(std::uint64_t k, std::uint64_t n, std::uint32_t p) {
  return factorial_valuation(k, p) - factorial_valuation(n, p) - factorial_valuation(k - n, p);
}

std::int64_t valuation(const mpq_class& q, std::uint32_t p) {
  if (q == 0) throw std::invalid_argument("valuation of zero");
  std::int64_t v = 0;
  mpz_class num = q.get_num(), den = q.get_den();
  while (num % p == 0) {
    num /= p;
    ++v;
  }
  while (den % p == 0) {
    den /= p;
    --v;
  }
  return v;
}

std::vector<std::uint32_t> unit_digits(const mpq_class& q, std::uint32_t p, std::size_t n) {
  mpz_class num = q.get_num(), den = q.get_den();
  while (num % p == 0) num /= p;
  while (den % p == 0) den /= p;
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t digit = 0;
    for (; digit < p; ++digit) {
      mpz_class r = num - digit * den;
      if (r % p == 0) break;
    }
    out.push_back(digit);
    num = (num - digit * den) / p;
  }
  return out;
}

QMatrix identity(std::size_t d) {
  QMatrix m(d, std::vector<mpq_class>(d, mpq_class(0)));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

QMatrix multiply(const QMatrix& a, const QMatrix& b) {
  const std::size_t d = a.size();
  QMatrix r(d, std::vector<mpq_class>(d, mpq_class(0)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < d; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

QMatrix add(const QMatrix& a, const QMatrix& b) {
  QMatrix r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) r[i][j] += b[i][j];
  return r;
}

QMatrix scale(const mpq_class& s, const QMatrix& a) {
  QMatrix r = a;
  for (auto& row : r)
    for (auto& x : row) x *= s;
  return r;
}

QMatrix power(const QMatrix& a, std::uint64_t n) {
  QMatrix r = identity(a.size());
  for (std::uint64_t i = 0; i < n; ++i) r = multiply(r, a);
  return r;
}

std::optional<QMatrix> inverse(const QMatrix& a_in) {
  const std::size_t d = a_in.size();
  QMatrix a = a_in, inv = identity(d);
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    while (piv < d && a[piv][c] == 0) ++piv;
    if (piv == d) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    const mpq_class s = 1 / a[c][c];
    for (std::size_t j = 0; j < d; ++j) {
      a[c][j] *= s;
      inv[c][j] *= s;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const mpq_class f = a[r][c];
      for (std::size_t j = 0; j < d; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

std::optional<std::int64_t> norm_exponent(const QMatrix& a, std::uint32_t p) {
  std::optional<std::int64_t> e;
  for (const auto& row : a)
    for (const auto& x : row)
      if (x != 0) e = std::max(e.value_or(-valuation(x, p)), -valuation(x, p));
  return e;
}

namespace {

using Poly = std::vector<mpq_class>;  // lowest degree first

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add(const Poly& a, const Poly& b, int sign) {
  Poly r(std::max(a.size(), b.size()), mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
  return r;
}

Poly det(const std::vector<std::vector<Poly>>& m) {
  const std::size_t d = m.size();
  if (d == 1) return m[0][0];
  Poly acc{mpq_class(0)};
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<std::vector<Poly>> minor;
    for (std::size_t i = 1; i < d; ++i) {
      std::vector<Poly> row;
      for (std::size_t k = 0; k < d; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    acc = poly_add(acc, poly_mul(m[0][j], det(minor)), j % 2 == 0 ? 1 : -1);
  }
  return acc;
}

}  // namespace

std::vector<mpq_class> charpoly_by_minors(const QMatrix& a) {
  const std::size_t d = a.size();
  if (d > 5) throw std::invalid_argument("cofactor expansion limited to d <= 5");
  std::vector<std::vector<Poly>> m(d, std::vector<Poly>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m[i][j] = i == j ? Poly{mpq_class(-a[i][j]), mpq_class(1)} : Poly{mpq_class(-a[i][j])};
  Poly r = det(m);
  r.resize(d + 1, mpq_class(0));
  return r;
}

std::optional<mpq_class> max_root_abs_exponent(const std::vector<mpq_class>& c, std::uint32_t p) {
  const std::size_t d = c.size() - 1;
  std::optional<mpq_class> best;
  for (std::size_t i = 0; i < d; ++i) {
    if (c[i] == 0) continue;
    mpq_class slope(-valuation(c[i], p), static_cast<long>(d - i));
    slope.canonicalize();
    if (!best || slope > *best) best = slope;
  }
  return best;
}

std::vector<mpq_class> newton_polygon_root_valuations(const std::vector<mpq_class>& c, std::uint32_t p) {
  std::vector<std::pair<long, long>> pts;  // (i, v(c_i))
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) pts.emplace_back(static_cast<long>(i), valuation(c[i], p));
  // Lower convex hull by monotone chain.
  std::vector<std::pair<long, long>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const long cross = (a.first - o.first) * (pt.second - o.second) - (a.second - o.second) * (pt.first - o.first);
      if (cross <= 0) hull.pop_back();
      else break;
    }
    hull.push_back(pt);
  }
  std::vector<mpq_class> vals;
  for (std::size_t s = 1; s < hull.size(); ++s) {
    const long width = hull[s].first - hull[s - 1].first;
    mpq_class slope(hull[s].second - hull[s - 1].second, width);
    slope.canonicalize();
    for (long k = 0; k < width; ++k) vals.push_back(-slope);
  }
  return vals;
}

std::optional<std::int64_t> neumann_radius_from_spectrum(const QMatrix& a, std::uint32_t p) {
  const auto sigma = max_root_abs_exponent(charpoly_by_minors(a), p);
  if (!sigma) return std::nullopt;
  // largest integer r with r < 1 − σ
  const mpq_class bound = 1 - *sigma;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  if (mpq_class(fl) == bound) fl -= 1;
  return fl.get_si();
}

}  // namespace padicres::oracle
