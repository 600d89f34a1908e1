#pragma once

// Exact integer/rational linear algebra: square and rectangular integer
// matrices, Hermite normal forms, residue systems Z^d / M Z^d and rational
// lattices (1/q) M Z^d.

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace matradix {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

IntVector make_int_vector(std::initializer_list<long> values);
RatVector to_rational(const IntVector& v);
// Requires every entry to be integral.
IntVector to_integer(const RatVector& v);
bool is_integral(const RatVector& v);
bool is_zero(const IntVector& v);
bool is_zero(const RatVector& v);

IntVector operator+(const IntVector& a, const IntVector& b);
IntVector operator-(const IntVector& a, const IntVector& b);
IntVector operator-(const IntVector& a);
RatVector operator+(const RatVector& a, const RatVector& b);
RatVector operator-(const RatVector& a, const RatVector& b);
RatVector operator-(const RatVector& a);
RatVector operator*(const Rational& s, const RatVector& v);

// Componentwise reduction into [0,1).
RatVector frac(const RatVector& v);
Rational dot(const RatVector& a, const RatVector& b);
double norm2(const RatVector& v);
double norm2(const IntVector& v);
std::vector<double> to_double(const RatVector& v);
std::vector<double> to_double(const IntVector& v);

std::string to_string(const IntVector& v);
std::string to_string(const RatVector& v);

struct IntVectorHash {
  std::size_t operator()(const IntVector& v) const noexcept;
};

/// Dense integer matrix with arbitrary precision entries, stored row-major.
/// Radix matrices are square; rectangular instances appear as generator
/// matrices (one generator per column) in lattice computations.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t dim);
  static IntMatrix from_rows(const std::vector<IntVector>& rows);
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t dim() const { return rows_; }
  bool is_square() const { return rows_ == cols_; }

  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  IntVector column(std::size_t c) const;
  IntVector row(std::size_t r) const;

  IntMatrix transpose() const;
  IntMatrix power(unsigned exponent) const;

  IntMatrix operator*(const IntMatrix& other) const;
  IntMatrix operator+(const IntMatrix& other) const;
  IntMatrix operator-(const IntMatrix& other) const;
  IntVector operator*(const IntVector& v) const;
  RatVector operator*(const RatVector& v) const;

  bool operator==(const IntMatrix& other) const = default;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
Integer det(const IntMatrix& m);

/// Adjugate matrix, adj(m) * m = det(m) * I.
IntMatrix adjugate(const IntMatrix& m);

/// Solves m x = b exactly over the rationals; m must be square and invertible.
RatVector solve(const IntMatrix& m, const RatVector& b);

/// Precomputed exact inverse action x -> m^{-1} x for an invertible matrix.
class InverseAction {
 public:
  InverseAction() = default;
  explicit InverseAction(const IntMatrix& m);

  RatVector apply(const RatVector& v) const;
  // Returns true and writes m^{-1} v when the result is integral.
  bool apply_integral(const IntVector& v, IntVector& out) const;

  const Integer& determinant() const { return det_; }
  const IntMatrix& adjugate() const { return adj_; }

 private:
  IntMatrix adj_;
  Integer det_;
};

/// Characteristic polynomial det(xI - m), coefficients from the constant term
/// upward (the last coefficient is 1).
std::vector<Integer> characteristic_polynomial(const IntMatrix& m);

/// Integer roots of the characteristic polynomial; these are exactly the
/// rational eigenvalues because the polynomial is monic with integer
/// coefficients.
std::vector<Integer> rational_eigenvalues(const IntMatrix& m);

std::vector<std::complex<double>> eigenvalues(const IntMatrix& m);
double spectral_radius(const IntMatrix& m);

/// Absolute tolerance around the unit circle inside which spectra are refused.
inline constexpr double kEigenTolerance = 1e-9;

/// True iff every eigenvalue has modulus > 1. Throws BorderlineSpectrum when
/// some modulus lies within kEigenTolerance of 1.
bool is_expansive(const IntMatrix& m);

/// Column echelon (Hermite) form of the lattice spanned by the columns of
/// `generators`. The basis has one column per pivot; pivot entries are
/// positive and entries of earlier columns in a pivot row are reduced into
/// [0, pivot).
struct EchelonForm {
  IntMatrix basis;
  std::vector<std::size_t> pivot_rows;
  // Unimodular column transform: generators * transform = [basis | 0].
  // Only filled when requested.
  IntMatrix transform;

  std::size_t rank() const { return pivot_rows.size(); }
};

EchelonForm column_echelon(const IntMatrix& generators, bool track_transform = false);

/// Basis (as columns) of the integer kernel {y in Z^n : m y = 0}.
std::vector<IntVector> integer_kernel(const IntMatrix& m);

/// Canonical residues modulo m Z^d, read off the Hermite normal form of m.
class ResidueSystem {
 public:
  ResidueSystem() = default;
  explicit ResidueSystem(const IntMatrix& m);

  /// Canonical representative in the box prod [0, h_ii).
  IntVector canonical(const IntVector& v) const;
  bool contains(const IntVector& v) const { return is_zero(canonical(v)); }
  std::vector<IntVector> enumerate() const;
  const IntMatrix& hnf() const { return hnf_; }

 private:
  IntMatrix hnf_;
};

IntVector residue_canon(const IntMatrix& m, const IntVector& v);
std::vector<IntVector> residues_enumerate(const IntMatrix& m);

/// Full-rank lattice (1/q) M Z^d with M in lower-triangular column Hermite
/// normal form and gcd(q, entries of M) = 1.
class Lattice {
 public:
  Lattice() = default;
  Lattice(Integer denom, IntMatrix basis);

  static Lattice integer_lattice(std::size_t dim);
  /// Lattice generated by the given rational vectors; throws
  /// DimensionMismatch when they do not span R^dim.
  static Lattice from_generators(std::size_t dim, const std::vector<RatVector>& generators);
  static Lattice diagonal(const std::vector<Rational>& steps);

  std::size_t dim() const { return basis_.rows(); }
  const Integer& denom() const { return denom_; }
  const IntMatrix& basis() const { return basis_; }
  std::vector<RatVector> generators() const;
  Rational covolume() const;

  bool contains(const RatVector& v) const;

  /// Visits every lattice point inside the closed box [lo, hi].
  void for_each_point_in_box(const std::vector<double>& lo, const std::vector<double>& hi,
                             const std::function<void(const RatVector&)>& visit) const;

  bool operator==(const Lattice& other) const = default;

  std::string to_string() const;

 private:
  Integer denom_ = 1;
  IntMatrix basis_;
};

Lattice lattice_dual(const Lattice& lattice);
Lattice lattice_join(const Lattice& a, const Lattice& b);
bool lattice_contains(const Lattice& lattice, const RatVector& v);
bool lattice_equal(const Lattice& a, const Lattice& b);

/// Subgroup of Q^d generated by rational vectors, possibly of lower rank,
/// kept in canonical form (denominator plus integer echelon basis).
class RationalSpan {
 public:
  RationalSpan() = default;
  RationalSpan(std::size_t dim, const std::vector<RatVector>& generators);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return echelon_.cols(); }
  std::vector<RatVector> generators() const;
  RationalSpan join(const RationalSpan& other) const;
  RationalSpan image(const IntMatrix& m) const;
  Lattice to_lattice() const;

  bool operator==(const RationalSpan& other) const = default;

 private:
  std::size_t dim_ = 0;
  Integer denom_ = 1;
  IntMatrix echelon_;
};

}  // namespace matradix
