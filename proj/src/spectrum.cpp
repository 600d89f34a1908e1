#include "matradix/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "matradix/errors.hpp"
#include "matradix/radix_system.hpp"

namespace matradix {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<RatVector> differences(const std::vector<IntVector>& digits) {
  std::vector<RatVector> out;
  for (std::size_t i = 1; i < digits.size(); ++i) out.push_back(to_rational(digits[i] - digits[0]));
  return out;
}

// x . (d - d_0) integral for every digit d.
bool modulus_one(const std::vector<IntVector>& digits, const RatVector& x) {
  for (std::size_t i = 1; i < digits.size(); ++i) {
    if (dot(to_rational(digits[i] - digits[0]), x).get_den() != 1) return false;
  }
  return true;
}

struct RatVectorLess {
  bool operator()(const RatVector& a, const RatVector& b) const { return a < b; }
};

}  // namespace

HadamardReport check_hadamard(const IntMatrix& a, const std::vector<IntVector>& digits,
                              const std::vector<IntVector>& dual_digits) {
  const Integer n_det = abs(det(a));
  const std::size_t n = digits.size();
  if (Integer(static_cast<unsigned long>(n)) != n_det || dual_digits.size() != n) {
    throw Error(ErrorKind::CountMismatch, "|D| = " + std::to_string(n) + ", |L| = " +
                                              std::to_string(dual_digits.size()) + ", |det A| = " + n_det.get_str());
  }
  const InverseAction inv(a);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  HadamardReport report;
  report.matrix.assign(n, std::vector<std::complex<double>>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const RatVector dr = to_rational(digits[r]);
    for (std::size_t c = 0; c < n; ++c) {
      // exact phase reduced mod 1 before going to floating point
      const Rational phase = frac(RatVector{dot(dr, inv.apply(to_rational(dual_digits[c])))})[0];
      report.matrix[r][c] = std::polar(scale, kTwoPi * phase.get_d());
    }
  }
  double defect = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::complex<double> g = 0;
      for (std::size_t r = 0; r < n; ++r) g += std::conj(report.matrix[r][i]) * report.matrix[r][j];
      defect = std::max(defect, std::abs(g - std::complex<double>(i == j ? 1.0 : 0.0, 0.0)));
    }
  }
  report.defect = defect;
  report.unitary = defect < kHadamardTolerance;
  return report;
}

double fourier_permutation_distance(const HadamardReport& report) {
  const std::size_t n = report.matrix.size();
  if (n == 0) return 0.0;
  if (n > 8) throw Error(ErrorKind::CountMismatch, "permutation search limited to order 8");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<std::vector<std::complex<double>>> u(n, std::vector<std::complex<double>>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      u[j][k] = std::polar(scale, kTwoPi * static_cast<double>((j * k) % n) / static_cast<double>(n));

  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    // Columns are matched greedily: each Fourier column takes the closest
    // unused column of the row-permuted matrix.
    std::vector<bool> used(n, false);
    double worst = 0;
    for (std::size_t k = 0; k < n && worst < best; ++k) {
      double best_col = std::numeric_limits<double>::infinity();
      std::size_t pick = n;
      for (std::size_t c = 0; c < n; ++c) {
        if (used[c]) continue;
        double dist = 0;
        for (std::size_t j = 0; j < n; ++j) dist = std::max(dist, std::abs(report.matrix[rows[j]][c] - u[j][k]));
        if (dist < best_col) {
          best_col = dist;
          pick = c;
        }
      }
      used[pick] = true;
      worst = std::max(worst, best_col);
    }
    best = std::min(best, worst);
  } while (std::next_permutation(rows.begin(), rows.end()));
  return best;
}

Lattice m_D_modulus_one_lattice(const std::vector<IntVector>& digits) {
  if (digits.size() < 2) throw Error(ErrorKind::DegenerateDigitSpan, "need at least two digits");
  const std::size_t d = digits[0].size();
  const RationalSpan span(d, differences(digits));
  if (span.rank() < d) {
    throw Error(ErrorKind::DegenerateDigitSpan,
                "D - D spans rank " + std::to_string(span.rank()) + " < " + std::to_string(d) +
                    "; |m_D| = 1 on a union of affine cylinders, not a lattice");
  }
  return lattice_dual(span.to_lattice());
}

void require_no_invariant_subspace(const IntMatrix& a) {
  if (a.rows() < 2) return;
  const auto roots = rational_eigenvalues(a);
  if (!roots.empty()) {
    throw Error(ErrorKind::InvariantSubspacePresent,
                "A has the rational eigenvalue " + roots.front().get_str() + ", hence a proper invariant subspace");
  }
}

Lattice extreme_candidate_lattice(const IntMatrix& a, const std::vector<IntVector>& digits) {
  if (digits.size() < 2) throw Error(ErrorKind::DegenerateDigitSpan, "need at least two digits");
  const std::size_t d = a.rows();
  // Delta = Z-span of D - D; extreme cycle points pair integrally with Delta.
  // Since x_i = A^k x_{i+k} - n with n integral, xi . x_i is integral for
  // every integer xi with (A^T)^k xi in Delta.
  const RationalSpan delta(d, differences(digits));
  std::vector<IntVector> delta_basis;
  for (const auto& g : delta.generators()) delta_basis.push_back(to_integer(g));
  RationalSpan sum = delta;
  const IntMatrix at = a.transpose();
  IntMatrix power = IntMatrix::identity(d);
  for (std::size_t k = 1; sum.rank() < d; ++k) {
    if (k > d + 1) {
      throw Error(ErrorKind::InvariantSubspacePresent, "preimages of D - D do not span R^d");
    }
    power = at * power;
    // kernel of [ (A^T)^k | -P ], projected to the first d coordinates
    IntMatrix stacked(d, d + delta_basis.size());
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) stacked(i, j) = power(i, j);
      for (std::size_t j = 0; j < delta_basis.size(); ++j) stacked(i, d + j) = -delta_basis[j][i];
    }
    std::vector<RatVector> preimages;
    for (const auto& v : integer_kernel(stacked)) {
      preimages.push_back(to_rational(IntVector(v.begin(), v.begin() + static_cast<long>(d))));
    }
    sum = sum.join(RationalSpan(d, preimages));
  }
  return lattice_dual(sum.to_lattice());
}

std::vector<ExtremeCycle> extreme_cycles(const IntMatrix& a, const std::vector<IntVector>& digits,
                                         const std::vector<IntVector>& dual_digits) {
  require_no_invariant_subspace(a);
  const HadamardReport h = check_hadamard(a, digits, dual_digits);
  if (!h.unitary) throw Error(ErrorKind::NotHadamard, "unitarity defect " + std::to_string(h.defect));
  const std::size_t d = a.rows();
  const Lattice candidates_lattice = extreme_candidate_lattice(a, digits);
  const double radius = escape_bound(a, dual_digits).radius;
  const std::vector<double> lo(d, -radius);
  const std::vector<double> hi(d, radius);

  std::vector<RatVector> nodes;
  candidates_lattice.for_each_point_in_box(lo, hi, [&](const RatVector& x) {
    if (norm2(x) <= radius * (1 + 1e-12) && modulus_one(digits, x)) nodes.push_back(x);
  });
  std::map<RatVector, std::size_t, RatVectorLess> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

  // Hadamard orthogonality makes the modulus-one successor unique.
  const InverseAction inv(a);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> next(nodes.size(), kNone);
  std::vector<std::size_t> label(nodes.size(), kNone);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t l = 0; l < dual_digits.size(); ++l) {
      const RatVector y = inv.apply(nodes[i] + to_rational(dual_digits[l]));
      if (!modulus_one(digits, y)) continue;
      if (label[i] != kNone) throw std::logic_error("extreme_cycles: two modulus-one successors");
      label[i] = l;
      auto it = index.find(y);
      if (it != index.end()) next[i] = it->second;
    }
  }

  std::vector<ExtremeCycle> out;
  std::vector<int> state(nodes.size(), 0);
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    if (state[s]) continue;
    std::vector<std::size_t> path;
    std::size_t x = s;
    while (x != kNone && state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = next[x];
    }
    if (x != kNone && state[x] == 1) {
      ExtremeCycle c;
      const auto from = std::find(path.begin(), path.end(), x);
      for (auto it = from; it != path.end(); ++it) {
        c.points.push_back(nodes[*it]);
        c.labels.push_back(label[*it]);
      }
      const auto first = std::min_element(c.points.begin(), c.points.end()) - c.points.begin();
      std::rotate(c.points.begin(), c.points.begin() + first, c.points.end());
      std::rotate(c.labels.begin(), c.labels.begin() + first, c.labels.end());
      out.push_back(std::move(c));
    }
    for (auto p : path) state[p] = 2;
  }
  std::sort(out.begin(), out.end(), [](const ExtremeCycle& x, const ExtremeCycle& y) {
    if (x.points.size() != y.points.size()) return x.points.size() < y.points.size();
    return x.points.front() < y.points.front();
  });
  return out;
}

Lattice spectrum_lattice(const IntMatrix& a, const std::vector<IntVector>& dual_digits,
                         const std::vector<ExtremeCycle>& cycles) {
  const std::size_t d = a.rows();
  std::vector<RatVector> seeds;
  for (const auto& c : cycles)
    for (const auto& p : c.points) seeds.push_back(-p);
  for (const auto& l : dual_digits) seeds.push_back(to_rational(l));
  RationalSpan lambda(d, seeds);
  while (true) {
    RationalSpan grown = lambda.join(lambda.image(a));
    if (grown == lambda) break;
    lambda = std::move(grown);
  }
  if (lambda.rank() < d) {
    throw Error(ErrorKind::DegenerateDigitSpan, "the invariant closure is not a full-rank lattice");
  }
  return lambda.to_lattice();
}

Lattice tiling_lattice(const IntMatrix& a, const std::vector<IntVector>& digits,
                       const std::vector<IntVector>& dual_digits) {
  return lattice_dual(spectrum_lattice(a, dual_digits, extreme_cycles(a, digits, dual_digits)));
}

}  // namespace matradix
