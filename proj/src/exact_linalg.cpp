#include "matradix/exact_linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "matradix/errors.hpp"

namespace matradix {

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer rational_floor(const Rational& r) {
  return floor_div(r.get_num(), r.get_den());
}

Integer lcm_of_denominators(const std::vector<RatVector>& vectors) {
  Integer q = 1;
  for (const auto& v : vectors) {
    for (const auto& x : v) {
      mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), x.get_den_mpz_t());
    }
  }
  return q;
}

void check_square(const IntMatrix& m, const char* what) {
  if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, std::string(what) + " needs a square matrix");
}

// Gauss-Jordan inverse over the rationals; returns false if singular.
bool rational_inverse(const IntMatrix& m, std::vector<std::vector<Rational>>& inv) {
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
    a[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return false;
    std::swap(a[pivot], a[col]);
    const Rational p = a[col][col];
    for (auto& x : a[col]) x /= p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t c = 0; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  inv.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return true;
}

Eigen::MatrixXd to_eigen(const IntMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

void column_axpy(IntMatrix& m, std::size_t target, const Integer& factor, std::size_t source) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, target) += factor * m(r, source);
}

void swap_columns(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, a), m(r, b));
}

void negate_column(IntMatrix& m, std::size_t c) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = -m(r, c);
}

// (col_a, col_b) <- (s col_a + t col_b, u col_b - v col_a)
void combine_columns(IntMatrix& m, std::size_t a, std::size_t b, const Integer& s, const Integer& t,
                     const Integer& u, const Integer& v) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Integer x = m(r, a);
    Integer y = m(r, b);
    m(r, a) = s * x + t * y;
    m(r, b) = u * y - v * x;
  }
}

}  // namespace

// ---------------------------------------------------------------- vectors

IntVector make_int_vector(std::initializer_list<long> values) {
  IntVector out;
  out.reserve(values.size());
  for (long v : values) out.emplace_back(v);
  return out;
}

RatVector to_rational(const IntVector& v) {
  RatVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

IntVector to_integer(const RatVector& v) {
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw std::logic_error("to_integer: non-integral entry " + v[i].get_str());
    out[i] = v[i].get_num();
  }
  return out;
}

bool is_integral(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.get_den() == 1; });
}

bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

bool is_zero(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

IntVector operator+(const IntVector& a, const IntVector& b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

IntVector operator-(const IntVector& a, const IntVector& b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

IntVector operator-(const IntVector& a) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

RatVector operator+(const RatVector& a, const RatVector& b) {
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RatVector operator-(const RatVector& a, const RatVector& b) {
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RatVector operator-(const RatVector& a) {
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

RatVector operator*(const Rational& s, const RatVector& v) {
  RatVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

RatVector frac(const RatVector& v) {
  RatVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - Rational(rational_floor(v[i]));
  return out;
}

Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const RatVector& v) {
  double s = 0;
  for (const auto& x : v) s += x.get_d() * x.get_d();
  return std::sqrt(s);
}

double norm2(const IntVector& v) {
  double s = 0;
  for (const auto& x : v) s += x.get_d() * x.get_d();
  return std::sqrt(s);
}

std::vector<double> to_double(const RatVector& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

std::vector<double> to_double(const IntVector& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ')';
  return os.str();
}

std::string to_string(const RatVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ')';
  return os.str();
}

std::size_t IntVectorHash::operator()(const IntVector& v) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (const auto& x : v) {
    std::size_t e = static_cast<std::size_t>(mpz_get_si(x.get_mpz_t())) ^ (mpz_size(x.get_mpz_t()) << 48);
    h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------- matrices

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t dim) {
  IntMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows) {
  const std::size_t nc = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), nc);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nc) throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<IntVector>& cols) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error(ErrorKind::DimensionMismatch, "generator has wrong dimension");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::power(unsigned exponent) const {
  check_square(*this, "power");
  IntMatrix result = identity(rows_);
  IntMatrix base = *this;
  while (exponent) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  if (cols_ != other.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  IntMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& other) const {
  IntMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& other) const {
  IntMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
  return out;
}

IntVector IntMatrix::operator*(const IntVector& v) const {
  if (v.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

RatVector IntMatrix::operator*(const RatVector& v) const {
  if (v.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  RatVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += Rational((*this)(i, j)) * v[j];
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "," : "") << '[';
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

Integer det(const IntMatrix& m) {
  check_square(m, "det");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(swap_row, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix adjugate(const IntMatrix& m) {
  check_square(m, "adjugate");
  const std::size_t n = m.rows();
  const Integer d = det(m);
  IntMatrix adj(n, n);
  if (d != 0) {
    std::vector<std::vector<Rational>> inv;
    rational_inverse(m, inv);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational v = inv[i][j] * Rational(d);
        adj(i, j) = v.get_num();
      }
    return adj;
  }
  // Singular: cofactor expansion.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      adj(i, j) = ((i + j) % 2 ? -1 : 1) * det(minor);
    }
  return adj;
}

RatVector solve(const IntMatrix& m, const RatVector& b) {
  check_square(m, "solve");
  std::vector<std::vector<Rational>> inv;
  if (!rational_inverse(m, inv)) throw Error(ErrorKind::SingularComposition, "singular system");
  const std::size_t n = m.rows();
  RatVector x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x[i] += inv[i][j] * b[j];
  return x;
}

InverseAction::InverseAction(const IntMatrix& m) : adj_(matradix::adjugate(m)), det_(det(m)) {
  if (det_ == 0) throw Error(ErrorKind::SingularComposition, "matrix is singular");
}

RatVector InverseAction::apply(const RatVector& v) const {
  RatVector out = adj_ * v;
  const Rational inv_det = Rational(1) / Rational(det_);
  for (auto& x : out) x *= inv_det;
  return out;
}

bool InverseAction::apply_integral(const IntVector& v, IntVector& out) const {
  out = adj_ * v;
  for (auto& x : out) {
    if (!mpz_divisible_p(x.get_mpz_t(), det_.get_mpz_t())) return false;
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), det_.get_mpz_t());
  }
  return true;
}

std::vector<Integer> characteristic_polynomial(const IntMatrix& m) {
  check_square(m, "characteristic_polynomial");
  // Faddeev-LeVerrier: every intermediate quantity stays integral.
  const std::size_t n = m.rows();
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  IntMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    IntMatrix am = m * mk;
    Integer trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    Integer q;
    mpz_divexact_ui(q.get_mpz_t(), trace.get_mpz_t(), k);
    c[n - k] = -q;
  }
  return c;
}

std::vector<Integer> rational_eigenvalues(const IntMatrix& m) {
  const auto poly = characteristic_polynomial(m);
  auto eval = [&](const Integer& x) {
    Integer acc = 0;
    for (std::size_t i = poly.size(); i-- > 0;) acc = acc * x + poly[i];
    return acc;
  };
  std::vector<Integer> roots;
  if (poly.empty()) return roots;
  if (poly[0] == 0) roots.emplace_back(0);
  Integer c0 = abs(poly[0]);
  if (c0 == 0) {
    // Strip the zero roots and look at the remaining constant term.
    std::size_t k = 0;
    while (k < poly.size() && poly[k] == 0) ++k;
    c0 = abs(poly[k]);
  }
  std::vector<Integer> divisors;
  for (Integer d = 1; d * d <= c0; ++d) {
    if (mpz_divisible_p(c0.get_mpz_t(), d.get_mpz_t())) {
      divisors.push_back(d);
      divisors.push_back(c0 / d);
    }
  }
  std::sort(divisors.begin(), divisors.end());
  divisors.erase(std::unique(divisors.begin(), divisors.end()), divisors.end());
  for (const auto& d : divisors) {
    if (eval(d) == 0) roots.push_back(d);
    if (eval(-d) == 0) roots.push_back(-d);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<std::complex<double>> eigenvalues(const IntMatrix& m) {
  check_square(m, "eigenvalues");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m), false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()[i]);
  return out;
}

double spectral_radius(const IntMatrix& m) {
  double r = 0;
  for (const auto& l : eigenvalues(m)) r = std::max(r, std::abs(l));
  return r;
}

bool is_expansive(const IntMatrix& m) {
  check_square(m, "is_expansive");
  if (det(m) == 0) return false;
  bool expansive = true;
  for (const auto& l : eigenvalues(m)) {
    const double modulus = std::abs(l);
    if (std::abs(modulus - 1.0) < kEigenTolerance) {
      throw Error(ErrorKind::BorderlineSpectrum,
                  "eigenvalue modulus " + std::to_string(modulus) + " is within tolerance of 1");
    }
    if (modulus < 1.0) expansive = false;
  }
  return expansive;
}

// ---------------------------------------------------------------- echelon

EchelonForm column_echelon(const IntMatrix& generators, bool track_transform) {
  IntMatrix w = generators;
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  IntMatrix u = track_transform ? IntMatrix::identity(n) : IntMatrix();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  Integer g, s, t, ua, vb;
  for (std::size_t i = 0; i < m && r < n; ++i) {
    for (std::size_t c = r + 1; c < n; ++c) {
      if (w(i, c) == 0) continue;
      if (w(i, r) == 0) {
        swap_columns(w, r, c);
        if (track_transform) swap_columns(u, r, c);
        continue;
      }
      const Integer a = w(i, r);
      const Integer b = w(i, c);
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      ua = a / g;
      vb = b / g;
      combine_columns(w, r, c, s, t, ua, vb);
      if (track_transform) combine_columns(u, r, c, s, t, ua, vb);
    }
    if (w(i, r) == 0) continue;
    if (w(i, r) < 0) {
      negate_column(w, r);
      if (track_transform) negate_column(u, r);
    }
    for (std::size_t c = 0; c < r; ++c) {
      const Integer f = floor_div(w(i, c), w(i, r));
      if (f == 0) continue;
      column_axpy(w, c, -f, r);
      if (track_transform) column_axpy(u, c, -f, r);
    }
    pivots.push_back(i);
    ++r;
  }
  EchelonForm out;
  out.basis = IntMatrix(m, r);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < r; ++j) out.basis(i, j) = w(i, j);
  out.pivot_rows = std::move(pivots);
  if (track_transform) out.transform = std::move(u);
  return out;
}

std::vector<IntVector> integer_kernel(const IntMatrix& m) {
  const EchelonForm e = column_echelon(m, true);
  std::vector<IntVector> kernel;
  for (std::size_t c = e.rank(); c < m.cols(); ++c) kernel.push_back(e.transform.column(c));
  return kernel;
}

// ---------------------------------------------------------------- residues

ResidueSystem::ResidueSystem(const IntMatrix& m) {
  check_square(m, "residue system");
  EchelonForm e = column_echelon(m);
  if (e.rank() != m.rows()) throw Error(ErrorKind::SingularComposition, "residues modulo a singular matrix");
  hnf_ = std::move(e.basis);
}

IntVector ResidueSystem::canonical(const IntVector& v) const {
  const std::size_t d = hnf_.rows();
  if (v.size() != d) throw Error(ErrorKind::DimensionMismatch, "residue of vector with wrong dimension");
  IntVector w = v;
  for (std::size_t i = 0; i < d; ++i) {
    const Integer f = floor_div(w[i], hnf_(i, i));
    if (f == 0) continue;
    for (std::size_t r = i; r < d; ++r) w[r] -= f * hnf_(r, i);
  }
  return w;
}

std::vector<IntVector> ResidueSystem::enumerate() const {
  const std::size_t d = hnf_.rows();
  std::vector<IntVector> out;
  IntVector current(d);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d) {
      out.push_back(current);
      return;
    }
    for (Integer k = 0; k < hnf_(i, i); ++k) {
      current[i] = k;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

IntVector residue_canon(const IntMatrix& m, const IntVector& v) { return ResidueSystem(m).canonical(v); }

std::vector<IntVector> residues_enumerate(const IntMatrix& m) { return ResidueSystem(m).enumerate(); }

// ---------------------------------------------------------------- lattices

Lattice::Lattice(Integer denom, IntMatrix basis) {
  if (denom <= 0) throw Error(ErrorKind::DimensionMismatch, "lattice denominator must be positive");
  EchelonForm e = column_echelon(basis);
  if (e.rank() != basis.rows()) throw Error(ErrorKind::DimensionMismatch, "lattice basis is not full rank");
  Integer g = denom;
  const IntMatrix& h = e.basis;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), h(i, j).get_mpz_t());
  basis_ = h;
  denom_ = denom / g;
  if (g != 1) {
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) mpz_divexact(basis_(i, j).get_mpz_t(), h(i, j).get_mpz_t(), g.get_mpz_t());
  }
}

Lattice Lattice::integer_lattice(std::size_t dim) { return Lattice(1, IntMatrix::identity(dim)); }

Lattice Lattice::from_generators(std::size_t dim, const std::vector<RatVector>& generators) {
  const Integer q = lcm_of_denominators(generators);
  std::vector<IntVector> cols;
  cols.reserve(generators.size());
  for (const auto& g : generators) {
    if (g.size() != dim) throw Error(ErrorKind::DimensionMismatch, "generator has wrong dimension");
    IntVector c(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      Rational scaled = g[i] * Rational(q);
      c[i] = scaled.get_num();
    }
    cols.push_back(std::move(c));
  }
  EchelonForm e = column_echelon(IntMatrix::from_columns(dim, cols));
  if (e.rank() != dim) {
    throw Error(ErrorKind::DimensionMismatch,
                "generators span rank " + std::to_string(e.rank()) + " < " + std::to_string(dim));
  }
  return Lattice(q, e.basis);
}

Lattice Lattice::diagonal(const std::vector<Rational>& steps) {
  std::vector<RatVector> gens;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    RatVector g(steps.size());
    g[i] = steps[i];
    gens.push_back(std::move(g));
  }
  return from_generators(steps.size(), gens);
}

std::vector<RatVector> Lattice::generators() const {
  std::vector<RatVector> out;
  for (std::size_t j = 0; j < basis_.cols(); ++j) {
    RatVector c(basis_.rows());
    for (std::size_t i = 0; i < basis_.rows(); ++i) c[i] = Rational(basis_(i, j), denom_);
    for (auto& x : c) x.canonicalize();
    out.push_back(std::move(c));
  }
  return out;
}

Rational Lattice::covolume() const {
  Integer qd = 1;
  for (std::size_t i = 0; i < dim(); ++i) qd *= denom_;
  Rational v(abs(det(basis_)), qd);
  v.canonicalize();
  return v;
}

bool Lattice::contains(const RatVector& v) const {
  if (v.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "membership test dimension");
  IntVector w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational s = v[i] * Rational(denom_);
    if (s.get_den() != 1) return false;
    w[i] = s.get_num();
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), w[i].get_mpz_t(), basis_(i, i).get_mpz_t());
    if (f == 0) continue;
    for (std::size_t r = i; r < w.size(); ++r) w[r] -= f * basis_(r, i);
  }
  return is_zero(w);
}

void Lattice::for_each_point_in_box(const std::vector<double>& lo, const std::vector<double>& hi,
                                    const std::function<void(const RatVector&)>& visit) const {
  const std::size_t d = dim();
  const double q = denom_.get_d();
  IntVector z(d);
  RatVector point(d);
  // The basis is lower triangular, so coordinate i only depends on z_0..z_i.
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d) {
      visit(point);
      return;
    }
    Integer partial = 0;
    for (std::size_t j = 0; j < i; ++j) partial += basis_(i, j) * z[j];
    const double pivot = basis_(i, i).get_d();
    const double zmin = std::ceil((q * lo[i] - partial.get_d()) / pivot - 1e-9);
    const double zmax = std::floor((q * hi[i] - partial.get_d()) / pivot + 1e-9);
    for (double zi = zmin; zi <= zmax; zi += 1.0) {
      z[i] = static_cast<long>(zi);
      point[i] = Rational(partial + basis_(i, i) * z[i], denom_);
      point[i].canonicalize();
      rec(i + 1);
    }
  };
  rec(0);
}

std::string Lattice::to_string() const {
  std::ostringstream os;
  os << "(1/" << denom_.get_str() << ")*" << basis_.to_string();
  return os.str();
}

Lattice lattice_dual(const Lattice& lattice) {
  // Dual of (1/q) M Z^d is q (M^T)^{-1} Z^d.
  const std::size_t d = lattice.dim();
  const IntMatrix mt = lattice.basis().transpose();
  const IntMatrix adj = adjugate(mt);
  const Integer dt = det(mt);
  std::vector<RatVector> gens;
  for (std::size_t j = 0; j < d; ++j) {
    RatVector c(d);
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = Rational(lattice.denom() * adj(i, j), dt);
      c[i].canonicalize();
    }
    gens.push_back(std::move(c));
  }
  return Lattice::from_generators(d, gens);
}

Lattice lattice_join(const Lattice& a, const Lattice& b) {
  auto gens = a.generators();
  auto more = b.generators();
  gens.insert(gens.end(), more.begin(), more.end());
  return Lattice::from_generators(a.dim(), gens);
}

bool lattice_contains(const Lattice& lattice, const RatVector& v) { return lattice.contains(v); }

bool lattice_equal(const Lattice& a, const Lattice& b) { return a == b; }

// ---------------------------------------------------------------- spans

RationalSpan::RationalSpan(std::size_t dim, const std::vector<RatVector>& generators) : dim_(dim) {
  const Integer q = lcm_of_denominators(generators);
  std::vector<IntVector> cols;
  for (const auto& g : generators) {
    if (g.size() != dim) throw Error(ErrorKind::DimensionMismatch, "generator has wrong dimension");
    IntVector c(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      Rational s = g[i] * Rational(q);
      c[i] = s.get_num();
    }
    cols.push_back(std::move(c));
  }
  echelon_ = column_echelon(IntMatrix::from_columns(dim, cols)).basis;
  Integer g = q;
  for (std::size_t i = 0; i < echelon_.rows(); ++i)
    for (std::size_t j = 0; j < echelon_.cols(); ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), echelon_(i, j).get_mpz_t());
  denom_ = q / g;
  for (std::size_t i = 0; i < echelon_.rows(); ++i)
    for (std::size_t j = 0; j < echelon_.cols(); ++j)
      mpz_divexact(echelon_(i, j).get_mpz_t(), echelon_(i, j).get_mpz_t(), g.get_mpz_t());
}

std::vector<RatVector> RationalSpan::generators() const {
  std::vector<RatVector> out;
  for (std::size_t j = 0; j < echelon_.cols(); ++j) {
    RatVector c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      c[i] = Rational(echelon_(i, j), denom_);
      c[i].canonicalize();
    }
    out.push_back(std::move(c));
  }
  return out;
}

RationalSpan RationalSpan::join(const RationalSpan& other) const {
  auto gens = generators();
  auto more = other.generators();
  gens.insert(gens.end(), more.begin(), more.end());
  return RationalSpan(dim_, gens);
}

RationalSpan RationalSpan::image(const IntMatrix& m) const {
  std::vector<RatVector> gens;
  for (const auto& g : generators()) gens.push_back(m * g);
  return RationalSpan(dim_, gens);
}

Lattice RationalSpan::to_lattice() const { return Lattice::from_generators(dim_, generators()); }

// ---------------------------------------------------------------- errors

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotExpansive: return "NotExpansive";
    case ErrorKind::BorderlineSpectrum: return "BorderlineSpectrum";
    case ErrorKind::WrongDigitCount: return "WrongDigitCount";
    case ErrorKind::IncompleteDigitSet: return "IncompleteDigitSet";
    case ErrorKind::NotFinitelyRepresentable: return "NotFinitelyRepresentable";
    case ErrorKind::SingularComposition: return "SingularComposition";
    case ErrorKind::CycleNotSimple: return "CycleNotSimple";
    case ErrorKind::PeriodNotCompanion: return "PeriodNotCompanion";
    case ErrorKind::NoSlotMatch: return "NoSlotMatch";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::NotHadamard: return "NotHadamard";
    case ErrorKind::DegenerateDigitSpan: return "DegenerateDigitSpan";
    case ErrorKind::InvariantSubspacePresent: return "InvariantSubspacePresent";
    case ErrorKind::WordTooShort: return "WordTooShort";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MembershipUndecided: return "MembershipUndecided";
    case ErrorKind::OutsideAttractor: return "OutsideAttractor";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::ParseError:
      return 2;
    case ErrorKind::MembershipUndecided:
      return 4;
    default:
      return 3;
  }
}

}  // namespace matradix
