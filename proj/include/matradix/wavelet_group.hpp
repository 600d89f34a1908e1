#pragma once

// Exact arithmetic in Z^d[A^{-1}] and in the semidirect product
// G_A = Z^d[A^{-1}] x| Z with (j,b)(k,c) = (j+k, A^j c + b).

#include <cstdint>
#include <string>

#include "matradix/exact_linalg.hpp"

namespace matradix {

/// The element A^{-exponent} vec. Canonical when exponent == 0 or vec is not
/// in A Z^d.
struct DyadicElement {
  std::uint64_t exponent = 0;
  IntVector vec;

  bool operator==(const DyadicElement&) const = default;
};

struct GroupElement {
  std::int64_t j = 0;
  DyadicElement b;

  bool operator==(const GroupElement&) const = default;
};

class WaveletGroup {
 public:
  /// `a` must be square and nonsingular.
  explicit WaveletGroup(IntMatrix a);

  const IntMatrix& matrix() const { return a_; }
  std::size_t dim() const { return a_.rows(); }

  DyadicElement element(const IntVector& k, std::uint64_t exponent = 0) const;
  DyadicElement zero() const;
  DyadicElement add(const DyadicElement& x, const DyadicElement& y) const;
  DyadicElement negate(const DyadicElement& x) const;
  /// A^power x for any integer power.
  DyadicElement scale_by_A(const DyadicElement& x, std::int64_t power) const;
  RatVector to_rational(const DyadicElement& x) const;

  GroupElement identity() const;
  GroupElement u() const;
  GroupElement t(const IntVector& k) const;
  GroupElement t(const DyadicElement& b) const;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const;
  GroupElement inv(const GroupElement& g) const;
  GroupElement pow(const GroupElement& g, std::int64_t n) const;

  std::string to_string(const DyadicElement& x) const;
  std::string to_string(const GroupElement& g) const;

 private:
  DyadicElement canonical(IntVector vec, std::uint64_t exponent) const;

  IntMatrix a_;
  InverseAction inverse_;
};

}  // namespace matradix
