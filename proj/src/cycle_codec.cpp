#include "matradix/cycle_codec.hpp"

#include <algorithm>
#include <unordered_map>

#include "matradix/errors.hpp"

namespace matradix {

namespace {

struct RelativePointHash {
  std::size_t operator()(const RelativePoint& p) const noexcept {
    return IntVectorHash{}(p.base) * 31 + p.slot;
  }
};

void require_simple(const Cycle& c) {
  if (c.points.empty()) throw Error(ErrorKind::CycleNotSimple, "empty cycle");
  if (!c.simple) throw Error(ErrorKind::CycleNotSimple, "two cycle points are congruent modulo Z^d");
}

bool compute_simple(const std::vector<RatVector>& points) {
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (is_integral(points[i] - points[j])) return false;
  return true;
}

}  // namespace

Cycle cycle_from_word(const RadixSystem& s, const std::vector<DigitIndex>& labels) {
  if (labels.empty()) throw Error(ErrorKind::CycleNotSimple, "empty cycle word");
  const std::size_t d = s.dim();
  const std::size_t p = labels.size();
  // (B^p - I) theta_0 = sum_i B^i l_i
  IntVector rhs(d);
  IntMatrix power = IntMatrix::identity(d);
  for (std::size_t i = 0; i < p; ++i) {
    rhs = rhs + power * s.digit(labels[i]);
    power = power * s.base();
  }
  Cycle c;
  try {
    c.points.push_back(solve(power - IntMatrix::identity(d), to_rational(rhs)));
  } catch (const Error&) {
    throw Error(ErrorKind::SingularComposition, "B^p - I is singular");
  }
  for (std::size_t i = 0; i + 1 < p; ++i) c.points.push_back(s.tau(labels[i], c.points.back()));
  c.labels = labels;
  c.simple = compute_simple(c.points);
  return c;
}

Cycle trivial_cycle(const RadixSystem& s) {
  const auto zero = s.zero_digit();
  if (!zero) throw Error(ErrorKind::InvalidConfig, "no zero digit; pass an explicit cycle word");
  return cycle_from_word(s, {*zero});
}

RcStep r_c_step(const RadixSystem& s, const Cycle& c, const RelativePoint& pt) {
  // B theta_{j+1} = theta_j + l_j, so the defining identity reduces to the
  // integer division a + l_j = d + B b.
  const DivisionResult r = s.divide_step(pt.base + s.digit(c.labels[pt.slot]));
  return RcStep{RelativePoint{r.quotient, (pt.slot + 1) % c.period()}, r.digit};
}

std::vector<Cycle> companion_cycles(const RadixSystem& s, const Cycle& c) {
  require_simple(c);
  std::unordered_map<RelativePoint, int, RelativePointHash> state;
  std::vector<Cycle> out;
  for (std::size_t j = 0; j < c.period(); ++j) {
    for (auto& a : ball_points(c.points[j], s.escape_radius())) {
      RelativePoint start{std::move(a), j};
      if (state.count(start)) continue;
      std::vector<RelativePoint> path;
      std::vector<DigitIndex> digits;
      std::unordered_map<RelativePoint, std::size_t, RelativePointHash> position;
      RelativePoint x = start;
      while (!state.count(x)) {
        state[x] = 1;
        position[x] = path.size();
        path.push_back(x);
        RcStep step = r_c_step(s, c, x);
        digits.push_back(step.digit);
        x = std::move(step.next);
      }
      if (state[x] == 1) {
        const std::size_t from = position.at(x);
        Cycle comp;
        for (std::size_t i = from; i < path.size(); ++i) {
          comp.points.push_back(c.points[path[i].slot] - to_rational(path[i].base));
          comp.labels.push_back(digits[i]);
        }
        const auto first = std::min_element(comp.points.begin(), comp.points.end()) - comp.points.begin();
        std::rotate(comp.points.begin(), comp.points.begin() + first, comp.points.end());
        std::rotate(comp.labels.begin(), comp.labels.begin() + first, comp.labels.end());
        comp.simple = compute_simple(comp.points);
        out.push_back(std::move(comp));
      }
      for (const auto& p : path) state[p] = 2;
    }
  }
  std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
    if (a.period() != b.period()) return a.period() < b.period();
    return a.points.front() < b.points.front();
  });
  return out;
}

EventuallyPeriodicWord encode_e_C(const RadixSystem& s, const Cycle& c, const IntVector& k, std::size_t slot) {
  require_simple(c);
  if (slot >= c.period()) throw Error(ErrorKind::DimensionMismatch, "slot out of range");
  if (k.size() != s.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension");
  std::unordered_map<RelativePoint, std::size_t, RelativePointHash> first_seen;
  std::vector<DigitIndex> digits;
  RelativePoint x{k, slot};
  while (true) {
    auto [it, fresh] = first_seen.emplace(x, digits.size());
    if (!fresh) {
      const auto start = static_cast<long>(it->second);
      return canonical_word(std::vector<DigitIndex>(digits.begin(), digits.begin() + start),
                            std::vector<DigitIndex>(digits.begin() + start, digits.end()));
    }
    RcStep step = r_c_step(s, c, x);
    digits.push_back(step.digit);
    x = std::move(step.next);
  }
}

DecodedPoint decode_d_C(const RadixSystem& s, const Cycle& c, const EventuallyPeriodicWord& w) {
  require_simple(c);
  if (w.period.empty()) throw Error(ErrorKind::ParseError, "word has an empty period");
  const std::size_t p = c.period();
  std::vector<DigitIndex> prefix = w.prefix;
  std::vector<DigitIndex> period = w.period;
  // Move period digits into the prefix one at a time until its length is a
  // multiple of p; the infinite word is unchanged.
  while (prefix.size() % p != 0) {
    prefix.push_back(period.front());
    std::rotate(period.begin(), period.begin() + 1, period.end());
  }
  const std::size_t q = period.size();
  if (q % p != 0) {
    throw Error(ErrorKind::PeriodNotCompanion,
                "period length " + std::to_string(q) + " is not a multiple of the cycle length " + std::to_string(p));
  }
  const RatVector eta = cycle_from_word(s, period).points.front();
  std::size_t slot = p;
  IntVector a;
  for (std::size_t j = 0; j < p; ++j) {
    const RatVector diff = c.points[j] - eta;
    if (is_integral(diff)) {
      slot = j;
      a = to_integer(diff);
      break;
    }
  }
  if (slot == p) throw Error(ErrorKind::NoSlotMatch, "periodic tail matches no cycle point modulo Z^d");

  // The tail point a - theta_slot must reproduce the period under R_C.
  RelativePoint x{a, slot};
  for (std::size_t i = 0; i < q; ++i) {
    RcStep step = r_c_step(s, c, x);
    if (step.digit != period[i]) {
      throw Error(ErrorKind::PeriodNotCompanion, "period is not the digit word of a companion cycle");
    }
    x = std::move(step.next);
  }
  if (!(x == RelativePoint{a, slot})) {
    throw Error(ErrorKind::PeriodNotCompanion, "period does not close up under R_C");
  }

  // k = sum_{i<n} B^i w_i + theta_slot - B^n eta, with eta = theta_slot - a.
  const std::size_t n = prefix.size();
  IntVector acc = a;
  for (std::size_t i = n; i-- > 0;) acc = s.base() * acc + s.digit(prefix[i]);
  RatVector bn_theta = c.points[slot];
  for (std::size_t i = 0; i < n; ++i) bn_theta = s.base() * bn_theta;
  const RatVector k = to_rational(acc) + (c.points[slot] - bn_theta);
  if (!is_integral(k)) throw std::logic_error("decode_d_C: non-integral result");
  return DecodedPoint{to_integer(k), slot};
}

bool same_period_up_to_rotation(const std::vector<DigitIndex>& a, const std::vector<DigitIndex>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    bool match = true;
    for (std::size_t i = 0; i < a.size() && match; ++i) match = a[(i + r) % a.size()] == b[i];
    if (match) return true;
  }
  return a.empty();
}

bool same_cycle_up_to_rotation(const Cycle& a, const Cycle& b) {
  if (a.period() != b.period()) return false;
  const std::size_t p = a.period();
  for (std::size_t r = 0; r < p; ++r) {
    bool match = true;
    for (std::size_t i = 0; i < p && match; ++i) {
      match = a.points[(i + r) % p] == b.points[i] && a.labels[(i + r) % p] == b.labels[i];
    }
    if (match) return true;
  }
  return p == 0;
}

}  // namespace matradix
