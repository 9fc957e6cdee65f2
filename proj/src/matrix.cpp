#include "padicres/matrix.hpp"

#include <algorithm>
#include <utility>

#include "padicres/errors.hpp"

namespace padicres {

Matrix::Matrix(std::size_t dim, const Field& field)
    : dim_(dim), field_(field), entries_(dim * dim, Scalar::zero(field)) {
  if (dim == 0) throw InvalidInput("matrix dimension must be positive");
}

Matrix Matrix::identity(std::size_t dim, const Field& field) {
  Matrix m(dim, field);
  const Scalar one = Scalar::one(field);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = one;
  return m;
}

Matrix Matrix::diagonal(std::span<const Scalar> diag) {
  if (diag.empty()) throw InvalidInput("empty diagonal");
  Matrix m(diag.size(), diag.front().field());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_strings(const std::vector<std::vector<std::string>>& rows, const Field& field) {
  const std::size_t d = rows.size();
  Matrix m(d, field);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) throw InvalidInput("matrix row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < d; ++j) m(i, j) = Scalar::parse(rows[i][j], field);
  }
  return m;
}

Matrix Matrix::from_rationals(const std::vector<std::vector<mpq_class>>& rows, const Field& field) {
  const std::size_t d = rows.size();
  Matrix m(d, field);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) throw InvalidInput("matrix row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < d; ++j) m(i, j) = Scalar::from_rational(rows[i][j], field);
  }
  return m;
}

void Matrix::require_same_shape(const Matrix& other) const {
  if (dim_ != other.dim_) throw InvalidInput("matrix dimension mismatch");
  if (field_.prime != other.field_.prime || field_.backend != other.field_.backend)
    throw InvalidInput("matrix field mismatch");
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  a.require_same_shape(b);
  Matrix r = a;
  for (std::size_t k = 0; k < r.entries_.size(); ++k) r.entries_[k] += b.entries_[k];
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  a.require_same_shape(b);
  Matrix r = a;
  for (std::size_t k = 0; k < r.entries_.size(); ++k) r.entries_[k] -= b.entries_[k];
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& e : r.entries_) e = -e;
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  a.require_same_shape(b);
  const std::size_t d = a.dim_;
  Matrix r(d, a.field_);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Scalar acc = Scalar::zero(a.field_);
      for (std::size_t k = 0; k < d; ++k) {
        const Scalar& x = a(i, k);
        const Scalar& y = b(k, j);
        if (x.is_exact_zero() || y.is_exact_zero()) continue;
        acc += x * y;
      }
      r(i, j) = std::move(acc);
    }
  }
  return r;
}

Matrix operator*(const Scalar& s, const Matrix& a) {
  Matrix r = a;
  for (auto& e : r.entries_) e = s * e;
  return r;
}

Vector operator*(const Matrix& a, std::span<const Scalar> x) {
  if (x.size() != a.dim_) throw InvalidInput("vector dimension mismatch");
  Vector out(a.dim_, Scalar::zero(a.field_));
  for (std::size_t i = 0; i < a.dim_; ++i)
    for (std::size_t k = 0; k < a.dim_; ++k) out[i] += a(i, k) * x[k];
  return out;
}

Matrix Matrix::pow(std::uint64_t n) const {
  Matrix result = identity(dim_, field_);
  Matrix base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

AbsExp Matrix::norm_exponent() const {
  AbsExp e;
  for (const auto& x : entries_) e = max(e, x.abs_exponent());
  return e;
}

AbsExp Matrix::norm_bound_exponent() const {
  AbsExp e;
  for (const auto& x : entries_) e = max(e, x.abs_bound_exponent());
  return e;
}

AbsExp Matrix::column_norm_exponent(std::size_t j) const {
  AbsExp e;
  for (std::size_t i = 0; i < dim_; ++i) e = max(e, (*this)(i, j).abs_exponent());
  return e;
}

bool Matrix::is_exact_zero() const {
  for (const auto& x : entries_)
    if (!x.is_exact_zero()) return false;
  return true;
}

bool Matrix::is_zero() const {
  for (const auto& x : entries_)
    if (!x.is_zero()) return false;
  return true;
}

Matrix Matrix::convert(const Field& target) const {
  Matrix r(dim_, target);
  for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k].convert(target);
  return r;
}

std::vector<std::vector<mpq_class>> Matrix::to_rationals() const {
  std::vector<std::vector<mpq_class>> rows(dim_, std::vector<mpq_class>(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) rows[i][j] = (*this)(i, j).lift();
  return rows;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.dim_ == b.dim_ && a.entries_ == b.entries_;
}

bool Matrix::agrees_with(const Matrix& other) const {
  require_same_shape(other);
  for (std::size_t k = 0; k < entries_.size(); ++k)
    if (!entries_[k].agrees_with(other.entries_[k])) return false;
  return true;
}

std::vector<std::vector<std::string>> Matrix::to_strings() const {
  std::vector<std::vector<std::string>> rows(dim_, std::vector<std::string>(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) rows[i][j] = (*this)(i, j).to_string();
  return rows;
}

AbsExp vector_norm_exponent(std::span<const Scalar> x) {
  AbsExp e;
  for (const auto& v : x) e = max(e, v.abs_exponent());
  return e;
}

Vector basis_vector(std::size_t dim, std::size_t j, const Field& field) {
  Vector v(dim, Scalar::zero(field));
  v.at(j) = Scalar::one(field);
  return v;
}

std::vector<mpq_class> char_poly(const Matrix& a) {
  const auto m = a.to_rationals();
  const std::size_t d = a.dim();
  // Berkowitz: grow the characteristic polynomial of the leading r×r block,
  // highest degree first, by a Toeplitz product.
  std::vector<mpq_class> c = {mpq_class(1), mpq_class(-m[0][0])};
  for (std::size_t r = 1; r < d; ++r) {
    // t = [1, −a_rr, −R S, −R M S, ..., −R M^(r−1) S]
    std::vector<mpq_class> t(r + 2);
    t[0] = 1;
    t[1] = -m[r][r];
    std::vector<mpq_class> v(r);  // M^k S
    for (std::size_t i = 0; i < r; ++i) v[i] = m[i][r];
    for (std::size_t k = 0; k < r; ++k) {
      mpq_class dot = 0;
      for (std::size_t i = 0; i < r; ++i) dot += m[r][i] * v[i];
      t[k + 2] = -dot;
      if (k + 1 < r) {
        std::vector<mpq_class> nv(r, mpq_class(0));
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) nv[i] += m[i][j] * v[j];
        v = std::move(nv);
      }
    }
    std::vector<mpq_class> nc(r + 2, mpq_class(0));
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) nc[i] += t[i - j] * c[j];
    c = std::move(nc);
  }
  // Return lowest degree first.
  std::vector<mpq_class> out(c.rbegin(), c.rend());
  for (auto& x : out) x.canonicalize();
  return out;
}

const char* to_string(PowerBound b) { return b == PowerBound::bounded ? "bounded" : "unbounded"; }

PowerBound power_bounded_oracle(const Matrix& a) {
  for (const auto& c : char_poly(a)) {
    if (c != 0 && valuation_q(c, a.field().prime) < 0) return PowerBound::unbounded;
  }
  return PowerBound::bounded;
}

Matrix inverse(const Matrix& a) {
  const std::size_t d = a.dim();
  const Field& f = a.field();
  Matrix work = a;
  Matrix inv = Matrix::identity(d, f);
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = d;
    AbsExp best;
    for (std::size_t r = col; r < d; ++r) {
      const Scalar& x = work(r, col);
      if (x.is_zero()) continue;
      if (pivot == d || x.abs_exponent() > best) {
        pivot = r;
        best = x.abs_exponent();
      }
    }
    if (pivot == d) throw SingularError("matrix is singular (no pivot in column " + std::to_string(col) + ")");
    if (pivot != col) {
      for (std::size_t j = 0; j < d; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Scalar pinv = work(col, col).inverse();
    for (std::size_t j = 0; j < d; ++j) {
      work(col, j) = work(col, j) * pinv;
      inv(col, j) = inv(col, j) * pinv;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || work(r, col).is_exact_zero()) continue;
      const Scalar factor = work(r, col);
      for (std::size_t j = 0; j < d; ++j) {
        work(r, j) -= factor * work(col, j);
        inv(r, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace padicres
