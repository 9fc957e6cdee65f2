#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "padicres/exponent.hpp"
#include "padicres/scalar.hpp"

namespace padicres {

using Vector = std::vector<Scalar>;

/// Dense square matrix over Q_p. Entries share one field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t dim, const Field& field);  // zero matrix

  static Matrix identity(std::size_t dim, const Field& field);
  static Matrix zero(std::size_t dim, const Field& field) { return Matrix(dim, field); }
  static Matrix diagonal(std::span<const Scalar> diag);
  /// Row-major rationals, e.g. {{"1","1"},{"0","1"}}.
  static Matrix from_strings(const std::vector<std::vector<std::string>>& rows, const Field& field);
  static Matrix from_rationals(const std::vector<std::vector<mpq_class>>& rows, const Field& field);

  std::size_t dim() const { return dim_; }
  const Field& field() const { return field_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, const Matrix& a);
  friend Vector operator*(const Matrix& a, std::span<const Scalar> x);
  Matrix operator-() const;

  /// A^n for n ≥ 0, A^0 = I.
  Matrix pow(std::uint64_t n) const;

  /// e with ‖A‖ = p^e for the sup norm on Q_p^d: the max entry absolute value.
  AbsExp norm_exponent() const;
  /// Same, but O(p^a) entries count as p^−a (a guaranteed upper bound).
  AbsExp norm_bound_exponent() const;
  /// ‖A e_j‖_sup.
  AbsExp column_norm_exponent(std::size_t j) const;

  bool is_exact_zero() const;
  /// Every entry is zero, exactly or to precision.
  bool is_zero() const;

  Matrix convert(const Field& target) const;
  /// Exact-rational image (capped entries lifted).
  std::vector<std::vector<mpq_class>> to_rationals() const;

  friend bool operator==(const Matrix& a, const Matrix& b);
  /// Entrywise Scalar::agrees_with.
  bool agrees_with(const Matrix& other) const;

  std::vector<std::vector<std::string>> to_strings() const;

 private:
  std::size_t dim_ = 0;
  Field field_{};
  std::vector<Scalar> entries_;

  void require_same_shape(const Matrix& other) const;
};

/// Sup norm exponent of a vector.
AbsExp vector_norm_exponent(std::span<const Scalar> x);

/// Basis vector e_j.
Vector basis_vector(std::size_t dim, std::size_t j, const Field& field);

/// Coefficients c_0..c_d (c_d = 1) of det(xI − A), computed division-free
/// (Berkowitz) over the exact rationals; capped inputs are lifted first.
std::vector<mpq_class> char_poly(const Matrix& a);

enum class PowerBound { bounded, unbounded };
const char* to_string(PowerBound b);

/// bounded ⇔ every coefficient of the characteristic polynomial is p-integral,
/// i.e. every eigenvalue lies in the closed unit disk, which over a p-adic field
/// is equivalent to sup_n ‖A^n‖ < ∞.
PowerBound power_bounded_oracle(const Matrix& a);

/// Inverse by Gaussian elimination, pivoting on the entry of largest absolute
/// value in each column. Throws SingularError.
Matrix inverse(const Matrix& a);

}  // namespace padicres
