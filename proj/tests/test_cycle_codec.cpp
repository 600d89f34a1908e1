#include <doctest.h>

#include <random>

#include "matradix/cycle_codec.hpp"
#include "matradix/errors.hpp"
#include "test_util.hpp"

using namespace matradix;

namespace {

struct Case {
  std::string system_name;
  RadixSystem s;
  Cycle c;
};

std::vector<Case> configured_cycles() {
  std::vector<Case> out;
  for (const auto& name : testutil::shipped_systems()) {
    const auto cfg = testutil::config(name);
    const RadixSystem s = cfg.system();
    for (const auto& w : cfg.cycles) out.push_back({name + " C=" + w, s, cycle_from_word(s, s.parse_digits(w))});
  }
  return out;
}

oracle::RcOracle rc_oracle(const RadixSystem& s, const Cycle& c) {
  oracle::RcOracle o;
  o.base = testutil::to_oracle(s.base());
  o.inv = oracle::inverse(o.base);
  o.digits = testutil::to_oracle(s.digits());
  for (const auto& p : c.points) o.theta.emplace_back(p.begin(), p.end());
  return o;
}

// Drops the first letter of the infinite word.
EventuallyPeriodicWord tail(const EventuallyPeriodicWord& w) {
  if (!w.prefix.empty()) return canonical_word({w.prefix.begin() + 1, w.prefix.end()}, w.period);
  std::vector<DigitIndex> p = w.period;
  std::rotate(p.begin(), p.begin() + 1, p.end());
  return canonical_word({}, p);
}

}  // namespace

TEST_CASE("cycle_from_word matches the affine fixed-point oracle") {
  for (const auto& cs : configured_cycles()) {
    const auto pts = oracle::cycle_points(testutil::to_oracle(cs.s.base()), testutil::to_oracle(cs.s.digits()),
                                          cs.c.labels);
    REQUIRE(pts.size() == cs.c.period());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(oracle::QVec(cs.c.points[i].begin(), cs.c.points[i].end()) == pts[i]);
    CHECK(cs.c.simple);
  }
  const RadixSystem b01(IntMatrix{{2}}, {make_int_vector({0}), make_int_vector({1})});
  const Cycle c = cycle_from_word(b01, b01.parse_digits("1;0"));
  CHECK(c.points == std::vector<RatVector>{RatVector{Rational(1, 3)}, RatVector{Rational(2, 3)}});
  const RadixSystem b03(IntMatrix{{2}}, {make_int_vector({0}), make_int_vector({3})});
  CHECK_FALSE(cycle_from_word(b03, b03.parse_digits("0;3")).simple);
}

TEST_CASE("omega(15, 0) for C = {1/3, 2/3}") {
  const RadixSystem s(IntMatrix{{2}}, {make_int_vector({0}), make_int_vector({1})});
  const Cycle c = cycle_from_word(s, s.parse_digits("1;0"));
  const auto w = encode_e_C(s, c, make_int_vector({15}), 0);
  CHECK(s.format_word(w) == "0;0;1;0;0;1|1;0");
  CHECK(decode_d_C(s, c, w) == DecodedPoint{make_int_vector({15}), 0});
}

TEST_CASE("r_c_step agrees with the digit-search oracle") {
  std::mt19937_64 rng(43);
  for (const auto& cs : configured_cycles()) {
    const auto o = rc_oracle(cs.s, cs.c);
    for (int trial = 0; trial < 100; ++trial) {
      const IntVector a = testutil::random_vector(rng, cs.s.dim(), 40);
      const std::size_t j = rng() % cs.c.period();
      const RcStep st = r_c_step(cs.s, cs.c, {a, j});
      const auto [next, d] = o.step(testutil::to_oracle(a), j);
      CHECK(testutil::to_oracle(st.next.base) == next.first);
      CHECK(st.next.slot == next.second);
      CHECK(st.digit == d);
    }
  }
}

TEST_CASE("encode_e_C agrees with the oracle and decode inverts it") {
  std::mt19937_64 rng(47);
  for (const auto& cs : configured_cycles()) {
    const auto o = rc_oracle(cs.s, cs.c);
    const auto digits = testutil::to_oracle(cs.s.digits());
    for (int trial = 0; trial < 200; ++trial) {
      const IntVector k = testutil::random_vector(rng, cs.s.dim(), 50);
      const std::size_t j = rng() % cs.c.period();
      const auto w = encode_e_C(cs.s, cs.c, k, j);
      const auto [pre, per] = oracle::canonical(o.encode(testutil::to_oracle(k), j));
      CHECK_MESSAGE(cs.s.format_word(w) == oracle::word_text(pre, per, digits), cs.system_name);
      CHECK(decode_d_C(cs.s, cs.c, w) == DecodedPoint{k, j});
    }
  }
}

TEST_CASE("encode after decode reproduces companion words") {
  std::mt19937_64 rng(53);
  for (const auto& cs : configured_cycles()) {
    const auto companions = companion_cycles(cs.s, cs.c);
    REQUIRE_FALSE(companions.empty());
    std::size_t decoded = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const Cycle& comp = companions[rng() % companions.size()];
      std::vector<DigitIndex> period = comp.labels;
      std::rotate(period.begin(), period.begin() + static_cast<long>(rng() % period.size()), period.end());
      std::vector<DigitIndex> prefix(rng() % 7);
      for (auto& d : prefix) d = rng() % cs.s.digit_count();
      const auto w = canonical_word(prefix, period);
      try {
        const auto kj = decode_d_C(cs.s, cs.c, w);
        CHECK(encode_e_C(cs.s, cs.c, kj.k, kj.slot) == w);
        ++decoded;
      } catch (const Error& e) {
        CHECK((e.kind() == ErrorKind::PeriodNotCompanion || e.kind() == ErrorKind::NoSlotMatch));
      }
    }
    CHECK_MESSAGE(decoded > 0, cs.system_name);
  }
}

TEST_CASE("slot shift: dropping the first digit advances the slot by one R_C step") {
  std::mt19937_64 rng(59);
  for (const auto& cs : configured_cycles()) {
    for (int trial = 0; trial < 200; ++trial) {
      const IntVector k = testutil::random_vector(rng, cs.s.dim(), 50);
      const std::size_t j = rng() % cs.c.period();
      const auto w = encode_e_C(cs.s, cs.c, k, j);
      const RcStep st = r_c_step(cs.s, cs.c, {k, j});
      CHECK(w.at(0) == st.digit);
      const auto shifted = decode_d_C(cs.s, cs.c, tail(w));
      CHECK(shifted.slot == (j + 1) % cs.c.period());
      CHECK(shifted == DecodedPoint{st.next.base, st.next.slot});
    }
  }
}

TEST_CASE("encoding does not depend on the order of the digit list") {
  std::mt19937_64 rng(61);
  const auto cfg = testutil::config("cloud9");
  const RadixSystem s = cfg.system();
  auto shuffled_digits = cfg.digits;
  std::shuffle(shuffled_digits.begin(), shuffled_digits.end(), rng);
  const RadixSystem t(cfg.base(), shuffled_digits);
  for (const auto& word : cfg.cycles) {
    const Cycle cs = cycle_from_word(s, s.parse_digits(word));
    const Cycle ct = cycle_from_word(t, t.parse_digits(word));
    for (int trial = 0; trial < 100; ++trial) {
      const IntVector k = testutil::random_vector(rng, 2, 30);
      const std::size_t j = rng() % cs.period();
      CHECK(s.format_word(encode_e_C(s, cs, k, j)) == t.format_word(encode_e_C(t, ct, k, j)));
    }
  }
}

TEST_CASE("decode rejects words outside the encoder's image") {
  const RadixSystem s(IntMatrix{{2}}, {make_int_vector({0}), make_int_vector({1})});
  const Cycle c = cycle_from_word(s, s.parse_digits("1;0"));
  CHECK_THROWS_AS(decode_d_C(s, c, s.parse_word("|0")), Error);
  try {
    decode_d_C(s, c, s.parse_word("|1;1;0"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PeriodNotCompanion);
  }
}

TEST_CASE("trivial cycle and non-simple cycles") {
  const RadixSystem s(IntMatrix{{2}}, {make_int_vector({0}), make_int_vector({3})});
  const Cycle t = trivial_cycle(s);
  CHECK(t.period() == 1);
  CHECK(is_zero(t.points[0]));
  // the trivial cycle reproduces the integer encoding
  for (long k = -20; k <= 20; ++k) {
    CHECK(encode_e_C(s, t, make_int_vector({k}), 0) == encode_integer(s, make_int_vector({k})));
  }
  const Cycle bad = cycle_from_word(s, s.parse_digits("0;3"));
  CHECK_THROWS_AS(encode_e_C(s, bad, make_int_vector({1}), 0), Error);
  const RadixSystem no_zero(IntMatrix{{2}}, {make_int_vector({1}), make_int_vector({2})});
  CHECK_THROWS_AS(trivial_cycle(no_zero), Error);
}

TEST_CASE("Cloud Nine 6-cycle words for base A^T and base A") {
  const auto cfg = testutil::config("cloud9");
  const RadixSystem at = cfg.system();
  const RadixSystem a(cfg.a, cfg.digits);
  auto six = [](const RadixSystem& s) {
    for (const auto& c : integer_cycles(s))
      if (c.points.size() == 6) return c.word.period;
    return std::vector<DigitIndex>{};
  };
  CHECK(same_period_up_to_rotation(six(at), at.parse_digits("3,0;0,2;3,0;-3,0;0,-2;-3,0")));
  CHECK(same_period_up_to_rotation(six(a), a.parse_digits("3,0;0,-2;3,0;-3,0;0,2;-3,0")));
  CHECK_FALSE(same_period_up_to_rotation(six(at), six(a)));
}
