#pragma once

// Hadamard triples (A, D, L), extreme cycles of the dual maps
// sigma_l(x) = A^{-1}(x + l), the spectrum lattice and its dual tiling
// lattice.

#include <complex>
#include <vector>

#include "matradix/exact_linalg.hpp"

namespace matradix {

inline constexpr double kHadamardTolerance = 1e-12;

struct HadamardReport {
  // (1/sqrt N) exp(2 pi i d . A^{-1} l), rows indexed by D, columns by L
  std::vector<std::vector<std::complex<double>>> matrix;
  // max |H* H - I|
  double defect = 0;
  bool unitary = false;
};

/// Throws CountMismatch unless |D| = |L| = |det A|.
HadamardReport check_hadamard(const IntMatrix& a, const std::vector<IntVector>& digits,
                              const std::vector<IntVector>& dual_digits);

/// Entrywise distance between the Hadamard matrix and the order-N Fourier
/// matrix, minimised over row and column permutations. Rows are searched
/// exhaustively, so N is limited to 8.
double fourier_permutation_distance(const HadamardReport& report);

/// Dual of the lattice generated by D - D: the set where |m_D| = 1. Throws
/// DegenerateDigitSpan when D - D does not span R^d.
Lattice m_D_modulus_one_lattice(const std::vector<IntVector>& digits);

/// x_{i+1} = A^{-1}(x_i + L[labels[i]]), |m_D(x_i)| = 1 for every i.
struct ExtremeCycle {
  std::vector<RatVector> points;
  std::vector<std::size_t> labels;
};

/// Throws InvariantSubspacePresent when A (d >= 2) has a rational
/// eigenvalue.
void require_no_invariant_subspace(const IntMatrix& a);

/// Lattice containing every point of every extreme cycle. When D - D is
/// degenerate the lattice directions missing from D - D are recovered from
/// the preimages (A^T)^{-k}(D - D).
Lattice extreme_candidate_lattice(const IntMatrix& a, const std::vector<IntVector>& digits);

std::vector<ExtremeCycle> extreme_cycles(const IntMatrix& a, const std::vector<IntVector>& digits,
                                         const std::vector<IntVector>& dual_digits);

/// Smallest lattice containing -C for each cycle and L, invariant under A.
Lattice spectrum_lattice(const IntMatrix& a, const std::vector<IntVector>& dual_digits,
                         const std::vector<ExtremeCycle>& cycles);

Lattice tiling_lattice(const IntMatrix& a, const std::vector<IntVector>& digits,
                       const std::vector<IntVector>& dual_digits);

}  // namespace matradix
