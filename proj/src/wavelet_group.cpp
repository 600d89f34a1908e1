#include "matradix/wavelet_group.hpp"

#include <utility>

#include "matradix/errors.hpp"

namespace matradix {

WaveletGroup::WaveletGroup(IntMatrix a) : a_(std::move(a)) {
  if (!a_.is_square()) throw Error(ErrorKind::DimensionMismatch, "group matrix must be square");
  inverse_ = InverseAction(a_);
}

DyadicElement WaveletGroup::canonical(IntVector vec, std::uint64_t exponent) const {
  IntVector reduced;
  while (exponent > 0 && inverse_.apply_integral(vec, reduced)) {
    vec = std::move(reduced);
    --exponent;
  }
  if (is_zero(vec)) exponent = 0;
  return DyadicElement{exponent, std::move(vec)};
}

DyadicElement WaveletGroup::element(const IntVector& k, std::uint64_t exponent) const {
  if (k.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "vector dimension");
  return canonical(k, exponent);
}

DyadicElement WaveletGroup::zero() const { return DyadicElement{0, IntVector(dim())}; }

DyadicElement WaveletGroup::add(const DyadicElement& x, const DyadicElement& y) const {
  const std::uint64_t n = std::max(x.exponent, y.exponent);
  const IntVector xs = a_.power(static_cast<unsigned>(n - x.exponent)) * x.vec;
  const IntVector ys = a_.power(static_cast<unsigned>(n - y.exponent)) * y.vec;
  return canonical(xs + ys, n);
}

DyadicElement WaveletGroup::negate(const DyadicElement& x) const { return DyadicElement{x.exponent, -x.vec}; }

DyadicElement WaveletGroup::scale_by_A(const DyadicElement& x, std::int64_t power) const {
  if (power < 0) return canonical(x.vec, x.exponent + static_cast<std::uint64_t>(-power));
  const auto p = static_cast<std::uint64_t>(power);
  if (p <= x.exponent) return canonical(x.vec, x.exponent - p);
  return canonical(a_.power(static_cast<unsigned>(p - x.exponent)) * x.vec, 0);
}

RatVector WaveletGroup::to_rational(const DyadicElement& x) const {
  RatVector v = matradix::to_rational(x.vec);
  for (std::uint64_t i = 0; i < x.exponent; ++i) v = inverse_.apply(v);
  return v;
}

GroupElement WaveletGroup::identity() const { return GroupElement{0, zero()}; }

GroupElement WaveletGroup::u() const { return GroupElement{1, zero()}; }

GroupElement WaveletGroup::t(const IntVector& k) const { return GroupElement{0, element(k)}; }

GroupElement WaveletGroup::t(const DyadicElement& b) const { return GroupElement{0, canonical(b.vec, b.exponent)}; }

GroupElement WaveletGroup::mul(const GroupElement& g, const GroupElement& h) const {
  return GroupElement{g.j + h.j, add(scale_by_A(h.b, g.j), g.b)};
}

GroupElement WaveletGroup::inv(const GroupElement& g) const {
  return GroupElement{-g.j, negate(scale_by_A(g.b, -g.j))};
}

GroupElement WaveletGroup::pow(const GroupElement& g, std::int64_t n) const {
  GroupElement base = n < 0 ? inv(g) : g;
  std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
  GroupElement result = identity();
  while (e) {
    if (e & 1u) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

std::string WaveletGroup::to_string(const DyadicElement& x) const {
  if (x.exponent == 0) return matradix::to_string(x.vec);
  return "A^-" + std::to_string(x.exponent) + matradix::to_string(x.vec);
}

std::string WaveletGroup::to_string(const GroupElement& g) const {
  return "(" + std::to_string(g.j) + ", " + to_string(g.b) + ")";
}

}  // namespace matradix
