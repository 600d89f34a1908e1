#pragma once

// Cycles of the maps tau_d(x) = B^{-1}(x + d), the division map R_C on
// Z^d - C, companion cycles, and the encoder/decoder pair built on them.

#include <vector>

#include "matradix/exact_linalg.hpp"
#include "matradix/radix_system.hpp"

namespace matradix {

/// theta_{j+1} = tau_{labels[j]}(theta_j), indices mod period().
struct Cycle {
  std::vector<RatVector> points;
  std::vector<DigitIndex> labels;
  // no two points congruent modulo Z^d
  bool simple = true;

  std::size_t period() const { return points.size(); }
  bool operator==(const Cycle&) const = default;
};

/// The point base - theta_slot of Z^d - C.
struct RelativePoint {
  IntVector base;
  std::size_t slot = 0;

  bool operator==(const RelativePoint&) const = default;
};

struct RcStep {
  RelativePoint next;
  DigitIndex digit;
};

struct DecodedPoint {
  IntVector k;
  std::size_t slot = 0;

  bool operator==(const DecodedPoint&) const = default;
};

/// Cycle whose theta_0 is the fixed point of tau_{l_{p-1}} o ... o tau_{l_0}.
Cycle cycle_from_word(const RadixSystem& s, const std::vector<DigitIndex>& labels);

/// The one-point cycle {0} labelled by the zero digit; throws InvalidConfig
/// when the digit set has no zero.
Cycle trivial_cycle(const RadixSystem& s);

/// Unique (b, d) with a - theta_j = B (b - theta_{j+1}) + d.
RcStep r_c_step(const RadixSystem& s, const Cycle& c, const RelativePoint& pt);

/// Cycles lying in (C - Z^d) intersected with X(B, D), sorted by period.
std::vector<Cycle> companion_cycles(const RadixSystem& s, const Cycle& c);

EventuallyPeriodicWord encode_e_C(const RadixSystem& s, const Cycle& c, const IntVector& k, std::size_t slot);

/// Inverse of encode_e_C. Throws PeriodNotCompanion or NoSlotMatch when the
/// word does not come from the encoder.
DecodedPoint decode_d_C(const RadixSystem& s, const Cycle& c, const EventuallyPeriodicWord& w);

/// Equality of cycles as cyclic sequences of (point, label).
bool same_cycle_up_to_rotation(const Cycle& a, const Cycle& b);

/// Equality of periodic digit words up to rotation.
bool same_period_up_to_rotation(const std::vector<DigitIndex>& a, const std::vector<DigitIndex>& b);

}  // namespace matradix
