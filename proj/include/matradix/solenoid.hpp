#pragma once

// Truncated solenoid points (z_0, ..., z_{N-1}) with z_n in [0,1)^d and
// B z_{n+1} = z_n mod Z^d, the embeddings i_hat and i_C, the shift sigma,
// the decode map and the symbolic dynamics rho on X(B, D) x Omega.

#include <cstdint>
#include <string>
#include <vector>

#include "matradix/attractor.hpp"
#include "matradix/cycle_codec.hpp"
#include "matradix/exact_linalg.hpp"
#include "matradix/radix_system.hpp"

namespace matradix {

inline constexpr double kSolenoidTolerance = 1e-9;

struct SolenoidPoint {
  std::vector<RatVector> coords;

  std::size_t depth() const { return coords.size(); }
  bool operator==(const SolenoidPoint&) const = default;
};

struct FloatSolenoidPoint {
  std::vector<std::vector<double>> coords;

  std::size_t depth() const { return coords.size(); }
};

/// (x, omega) with omega an infinite eventually periodic digit word.
struct SymbolState {
  RatVector x;
  EventuallyPeriodicWord word;
};

/// Level n is B^{-n} x mod Z^d.
SolenoidPoint embed_i_hat(const RadixSystem& s, const RatVector& x, std::size_t depth);
FloatSolenoidPoint embed_i_hat(const RadixSystem& s, const std::vector<double>& x, std::size_t depth);

/// Prepends B z_0 and drops the last level, so the depth is preserved.
SolenoidPoint shift_sigma(const RadixSystem& s, const SolenoidPoint& p);
FloatSolenoidPoint shift_sigma(const RadixSystem& s, const FloatSolenoidPoint& p);

/// Drops z_0; the depth decreases by one.
SolenoidPoint shift_sigma_inverse(const SolenoidPoint& p);
FloatSolenoidPoint shift_sigma_inverse(const FloatSolenoidPoint& p);

/// Level n is tau_{w_{n-1}} o ... o tau_{w_0}(x) mod Z^d.
SolenoidPoint decode_map_d(const RadixSystem& s, const SymbolState& st, std::size_t depth);
FloatSolenoidPoint decode_map_d(const RadixSystem& s, const std::vector<double>& x,
                                const EventuallyPeriodicWord& word, std::size_t depth);

/// (x, w_0 w_1 ...) -> (tau_{w_0} x, w_1 w_2 ...).
SymbolState rho(const RadixSystem& s, const SymbolState& st);

/// (x, w) -> (B x - d, d w) for the digit d with B x - d in X. When several
/// digits qualify (x on a branch overlap) the lowest index is taken. Throws
/// MembershipUndecided when no digit can be certified within the budget.
SymbolState rho_inverse(const RadixSystem& s, const SymbolState& st, std::size_t node_budget = 1u << 18);

/// Digits d with B x - d in X(B, D), certified exactly.
std::vector<DigitIndex> admissible_digits(const RadixSystem& s, const RatVector& x,
                                          std::size_t node_budget = 1u << 18);

/// Level n is B^{-n} x + theta_{n+j} mod Z^d.
SolenoidPoint embed_i_C(const RadixSystem& s, const Cycle& c, const RatVector& x, std::size_t slot,
                        std::size_t depth);
FloatSolenoidPoint embed_i_C(const RadixSystem& s, const Cycle& c, const std::vector<double>& x, std::size_t slot,
                             std::size_t depth);

/// alpha(x, j) = (B x, j - 1 mod p).
std::pair<RatVector, std::size_t> alpha(const RadixSystem& s, const Cycle& c, const RatVector& x, std::size_t slot);

/// Max over levels of the torus distance between two truncated points
/// (compared on the common depth).
double solenoid_distance(const SolenoidPoint& a, const SolenoidPoint& b);
double solenoid_distance(const FloatSolenoidPoint& a, const FloatSolenoidPoint& b);
double solenoid_distance(const FloatSolenoidPoint& a, const SolenoidPoint& b);

/// Max compatibility defect |B z_{n+1} - z_n| mod Z^d over levels.
double compatibility_defect(const RadixSystem& s, const SolenoidPoint& p);
double compatibility_defect(const RadixSystem& s, const FloatSolenoidPoint& p);

struct CorsumReport {
  std::size_t samples = 0;
  std::size_t skipped_ambiguous = 0;
  // max deviations per identity, exact path / float path
  double shift_conjugacy_exact = 0;    // i_hat(B x) = sigma(i_hat(x))
  double shift_conjugacy_float = 0;
  double rho_conjugacy_exact = 0;      // d(rho(x, w)) = sigma^{-1}(d(x, w))
  double rho_conjugacy_float = 0;
  double rho_inverse_exact = 0;        // d(rho^{-1}(x, w)) = sigma(d(x, w))
  double rho_inverse_float = 0;
  double cycle_embedding_exact = 0;    // i_C(alpha(x, j)) = sigma(i_C(x, j))
  double cycle_embedding_float = 0;
  double decode_agreement_exact = 0;   // d(x, w) = i_C(x - theta_j + k, j)
  double decode_agreement_float = 0;
  double compatibility_exact = 0;
  double compatibility_float = 0;
  // rho^{-1}(rho(x, w)) = (x, w)
  std::size_t rho_roundtrip_failures = 0;

  double max_exact() const;
  double max_float() const;
  bool passed() const { return max_exact() == 0.0 && max_float() < kSolenoidTolerance && rho_roundtrip_failures == 0; }
  std::string to_json() const;
};

/// Checks the commuting diagram on random states: x is a random point of
/// X(B, D) (a finite digit sum plus a scaled cycle point), w a random prefix
/// followed by a rotated companion period of C.
CorsumReport verify_corsum(const RadixSystem& s, const Cycle& c, std::size_t samples, std::size_t depth,
                           std::uint64_t seed = kDefaultSeed);

}  // namespace matradix
