#pragma once

// Radix systems (B, D): B an expansive integer matrix, D a complete set of
// representatives of Z^d / B Z^d. Every x in Z^d splits uniquely as
// x = d + B q with d in D.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "matradix/exact_linalg.hpp"

namespace matradix {

using DigitIndex = std::size_t;

/// prefix followed by period repeated forever. Canonical words have a
/// primitive period and a prefix that cannot be shortened by rotating the
/// period.
struct EventuallyPeriodicWord {
  std::vector<DigitIndex> prefix;
  std::vector<DigitIndex> period;

  /// Digit at position i of the infinite word.
  DigitIndex at(std::size_t i) const;

  bool operator==(const EventuallyPeriodicWord&) const = default;
};

EventuallyPeriodicWord canonical_word(std::vector<DigitIndex> prefix, std::vector<DigitIndex> period);

/// Ball bound for the attractor X(B, D) and every integer cycle.
struct EscapeBound {
  double radius = 0;
  // smallest m with ||B^{-m}||^{1/m} < 1
  unsigned step_power = 1;
  // per-step contraction rate c used in the bound
  double contraction = 0;
};

EscapeBound escape_bound(const IntMatrix& base, const std::vector<IntVector>& digits);

struct DivisionResult {
  DigitIndex digit;
  IntVector quotient;
};

class RadixSystem {
 public:
  RadixSystem() = default;
  /// Throws NotExpansive, WrongDigitCount or IncompleteDigitSet.
  RadixSystem(IntMatrix base, std::vector<IntVector> digits);

  const IntMatrix& base() const { return base_; }
  const std::vector<IntVector>& digits() const { return digits_; }
  const IntVector& digit(DigitIndex i) const { return digits_.at(i); }
  std::size_t dim() const { return base_.rows(); }
  std::size_t digit_count() const { return digits_.size(); }
  const Integer& det_abs() const { return det_abs_; }
  double escape_radius() const { return bound_.radius; }
  unsigned step_power() const { return bound_.step_power; }
  const EscapeBound& bound() const { return bound_; }
  const InverseAction& inverse() const { return inverse_; }
  const ResidueSystem& residues() const { return residues_; }
  std::optional<DigitIndex> zero_digit() const { return zero_digit_; }
  std::optional<DigitIndex> find_digit(const IntVector& d) const;

  DivisionResult divide_step(const IntVector& x) const;

  /// tau_d(x) = B^{-1}(x + d).
  RatVector tau(DigitIndex d, const RatVector& x) const;

  std::string format_digit(DigitIndex i) const;
  std::string format_word(const EventuallyPeriodicWord& w) const;
  /// Parses the `;`/`,`/`|` word grammar; throws ParseError.
  EventuallyPeriodicWord parse_word(const std::string& text) const;
  /// Parses a `;`-separated digit list (no `|`).
  std::vector<DigitIndex> parse_digits(const std::string& text) const;

 private:
  IntMatrix base_;
  std::vector<IntVector> digits_;
  Integer det_abs_;
  EscapeBound bound_;
  InverseAction inverse_;
  ResidueSystem residues_;
  std::unordered_map<IntVector, DigitIndex, IntVectorHash> by_residue_;
  std::optional<DigitIndex> zero_digit_;
};

RadixSystem new_system(const IntMatrix& base, const std::vector<IntVector>& digits);

/// True when the digits are pairwise incongruent modulo B Z^d and their
/// number equals |det B|.
bool is_complete_digit_set(const IntMatrix& base, const std::vector<IntVector>& digits);

DivisionResult divide_step(const RadixSystem& s, const IntVector& x);

EventuallyPeriodicWord encode_integer(const RadixSystem& s, const IntVector& x);

/// Finite radix sum of a word ending in the zero digit; throws
/// NotFinitelyRepresentable otherwise.
IntVector eval_finite(const RadixSystem& s, const EventuallyPeriodicWord& w);

struct IntegerCycle {
  // Quotient orbit x_0 -> x_1 -> ... -> x_0 under x -> (x - d) / B.
  std::vector<IntVector> points;
  EventuallyPeriodicWord word;
};

std::vector<IntegerCycle> integer_cycles(const RadixSystem& s);

/// Integer points of the closed ball of the given radius around `center`.
std::vector<IntVector> ball_points(const RatVector& center, double radius);

}  // namespace matradix
