#include "matradix/solenoid.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "matradix/errors.hpp"

namespace matradix {

namespace {

using DoubleMatrix = std::vector<std::vector<double>>;

DoubleMatrix to_doubles(const IntMatrix& m) {
  DoubleMatrix out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).get_d();
  return out;
}

DoubleMatrix inverse_doubles(const RadixSystem& s) {
  const std::size_t d = s.dim();
  DoubleMatrix out(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i][j] = s.inverse().adjugate()(i, j).get_d() / s.inverse().determinant().get_d();
  return out;
}

std::vector<double> mat_vec(const DoubleMatrix& m, const std::vector<double>& x) {
  std::vector<double> y(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
  return y;
}

std::vector<double> frac(std::vector<double> x) {
  for (auto& v : x) v -= std::floor(v);
  return x;
}

double torus_gap(double delta) { return std::abs(delta - std::round(delta)); }

double torus_gap(const Rational& delta) {
  Rational f = delta - Rational(delta.get_num() / delta.get_den());
  if (f < 0) f += 1;
  const Rational rest = Rational(1) - f;
  return (f < rest ? f : rest).get_d();
}

std::vector<double> plus(std::vector<double> a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

EventuallyPeriodicWord tail(const EventuallyPeriodicWord& w) {
  EventuallyPeriodicWord out = w;
  if (!out.prefix.empty()) {
    out.prefix.erase(out.prefix.begin());
  } else {
    std::rotate(out.period.begin(), out.period.begin() + 1, out.period.end());
  }
  return out;
}

}  // namespace

SolenoidPoint embed_i_hat(const RadixSystem& s, const RatVector& x, std::size_t depth) {
  SolenoidPoint p;
  RatVector y = x;
  for (std::size_t n = 0; n < depth; ++n) {
    if (n) y = s.inverse().apply(y);
    p.coords.push_back(matradix::frac(y));
  }
  return p;
}

FloatSolenoidPoint embed_i_hat(const RadixSystem& s, const std::vector<double>& x, std::size_t depth) {
  const DoubleMatrix binv = inverse_doubles(s);
  FloatSolenoidPoint p;
  std::vector<double> y = x;
  for (std::size_t n = 0; n < depth; ++n) {
    if (n) y = mat_vec(binv, y);
    p.coords.push_back(frac(y));
  }
  return p;
}

SolenoidPoint shift_sigma(const RadixSystem& s, const SolenoidPoint& p) {
  SolenoidPoint out;
  if (p.coords.empty()) return out;
  out.coords.push_back(matradix::frac(s.base() * p.coords.front()));
  out.coords.insert(out.coords.end(), p.coords.begin(), p.coords.end() - 1);
  return out;
}

FloatSolenoidPoint shift_sigma(const RadixSystem& s, const FloatSolenoidPoint& p) {
  FloatSolenoidPoint out;
  if (p.coords.empty()) return out;
  out.coords.push_back(frac(mat_vec(to_doubles(s.base()), p.coords.front())));
  out.coords.insert(out.coords.end(), p.coords.begin(), p.coords.end() - 1);
  return out;
}

SolenoidPoint shift_sigma_inverse(const SolenoidPoint& p) {
  if (p.coords.size() < 2) throw Error(ErrorKind::WordTooShort, "inverse shift needs depth >= 2");
  return SolenoidPoint{std::vector<RatVector>(p.coords.begin() + 1, p.coords.end())};
}

FloatSolenoidPoint shift_sigma_inverse(const FloatSolenoidPoint& p) {
  if (p.coords.size() < 2) throw Error(ErrorKind::WordTooShort, "inverse shift needs depth >= 2");
  return FloatSolenoidPoint{std::vector<std::vector<double>>(p.coords.begin() + 1, p.coords.end())};
}

SolenoidPoint decode_map_d(const RadixSystem& s, const SymbolState& st, std::size_t depth) {
  if (st.word.period.empty()) throw Error(ErrorKind::WordTooShort, "word has no period");
  SolenoidPoint p;
  RatVector y = st.x;
  for (std::size_t n = 0; n < depth; ++n) {
    if (n) y = s.tau(st.word.at(n - 1), y);
    p.coords.push_back(matradix::frac(y));
  }
  return p;
}

FloatSolenoidPoint decode_map_d(const RadixSystem& s, const std::vector<double>& x,
                                const EventuallyPeriodicWord& word, std::size_t depth) {
  if (word.period.empty()) throw Error(ErrorKind::WordTooShort, "word has no period");
  const DoubleMatrix binv = inverse_doubles(s);
  FloatSolenoidPoint p;
  std::vector<double> y = x;
  for (std::size_t n = 0; n < depth; ++n) {
    if (n) y = mat_vec(binv, plus(y, to_double(s.digit(word.at(n - 1)))));
    p.coords.push_back(frac(y));
  }
  return p;
}

SymbolState rho(const RadixSystem& s, const SymbolState& st) {
  return SymbolState{s.tau(st.word.at(0), st.x), tail(st.word)};
}

std::vector<DigitIndex> admissible_digits(const RadixSystem& s, const RatVector& x, std::size_t node_budget) {
  const RatVector bx = s.base() * x;
  std::vector<DigitIndex> out;
  bool undecided = false;
  for (DigitIndex d = 0; d < s.digit_count(); ++d) {
    switch (membership(s, bx - to_rational(s.digit(d)), node_budget)) {
      case Membership::Inside: out.push_back(d); break;
      case Membership::Undecided: undecided = true; break;
      case Membership::Outside: break;
    }
  }
  if (out.empty() && undecided) {
    throw Error(ErrorKind::MembershipUndecided, "no digit certified for " + to_string(x));
  }
  return out;
}

SymbolState rho_inverse(const RadixSystem& s, const SymbolState& st, std::size_t node_budget) {
  const auto digits = admissible_digits(s, st.x, node_budget);
  if (digits.empty()) throw Error(ErrorKind::OutsideAttractor, to_string(st.x) + " is not in X(B, D)");
  const DigitIndex d = digits.front();
  SymbolState out;
  out.x = s.base() * st.x - to_rational(s.digit(d));
  out.word = st.word;
  out.word.prefix.insert(out.word.prefix.begin(), d);
  return out;
}

SolenoidPoint embed_i_C(const RadixSystem& s, const Cycle& c, const RatVector& x, std::size_t slot,
                        std::size_t depth) {
  const std::size_t p = c.period();
  SolenoidPoint out;
  RatVector y = x;
  for (std::size_t n = 0; n < depth; ++n) {
    if (n) y = s.inverse().apply(y);
    out.coords.push_back(matradix::frac(y + c.points[(n + slot) % p]));
  }
  return out;
}

FloatSolenoidPoint embed_i_C(const RadixSystem& s, const Cycle& c, const std::vector<double>& x, std::size_t slot,
                             std::size_t depth) {
  const DoubleMatrix binv = inverse_doubles(s);
  const std::size_t p = c.period();
  FloatSolenoidPoint out;
  std::vector<double> y = x;
  for (std::size_t n = 0; n < depth; ++n) {
    if (n) y = mat_vec(binv, y);
    out.coords.push_back(frac(plus(y, to_double(c.points[(n + slot) % p]))));
  }
  return out;
}

std::pair<RatVector, std::size_t> alpha(const RadixSystem& s, const Cycle& c, const RatVector& x, std::size_t slot) {
  return {s.base() * x, (slot + c.period() - 1) % c.period()};
}

double solenoid_distance(const SolenoidPoint& a, const SolenoidPoint& b) {
  double out = 0;
  const std::size_t n = std::min(a.depth(), b.depth());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < a.coords[i].size(); ++k) out = std::max(out, torus_gap(a.coords[i][k] - b.coords[i][k]));
  return out;
}

double solenoid_distance(const FloatSolenoidPoint& a, const FloatSolenoidPoint& b) {
  double out = 0;
  const std::size_t n = std::min(a.depth(), b.depth());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < a.coords[i].size(); ++k) out = std::max(out, torus_gap(a.coords[i][k] - b.coords[i][k]));
  return out;
}

double solenoid_distance(const FloatSolenoidPoint& a, const SolenoidPoint& b) {
  double out = 0;
  const std::size_t n = std::min(a.depth(), b.depth());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < a.coords[i].size(); ++k)
      out = std::max(out, torus_gap(a.coords[i][k] - b.coords[i][k].get_d()));
  return out;
}

double compatibility_defect(const RadixSystem& s, const SolenoidPoint& p) {
  double out = 0;
  for (std::size_t n = 0; n + 1 < p.depth(); ++n) {
    const RatVector diff = s.base() * p.coords[n + 1] - p.coords[n];
    for (const auto& v : diff) out = std::max(out, torus_gap(v));
  }
  return out;
}

double compatibility_defect(const RadixSystem& s, const FloatSolenoidPoint& p) {
  const DoubleMatrix b = to_doubles(s.base());
  double out = 0;
  for (std::size_t n = 0; n + 1 < p.depth(); ++n) {
    const std::vector<double> bz = mat_vec(b, p.coords[n + 1]);
    for (std::size_t k = 0; k < bz.size(); ++k) out = std::max(out, torus_gap(bz[k] - p.coords[n][k]));
  }
  return out;
}

double CorsumReport::max_exact() const {
  return std::max({shift_conjugacy_exact, rho_conjugacy_exact, rho_inverse_exact, cycle_embedding_exact,
                   decode_agreement_exact, compatibility_exact});
}

double CorsumReport::max_float() const {
  return std::max({shift_conjugacy_float, rho_conjugacy_float, rho_inverse_float, cycle_embedding_float,
                   decode_agreement_float, compatibility_float});
}

std::string CorsumReport::to_json() const {
  nlohmann::json j;
  j["samples"] = samples;
  j["skipped_ambiguous"] = skipped_ambiguous;
  j["exact"] = {{"shift_conjugacy", shift_conjugacy_exact},   {"rho_conjugacy", rho_conjugacy_exact},
                {"rho_inverse", rho_inverse_exact},           {"cycle_embedding", cycle_embedding_exact},
                {"decode_agreement", decode_agreement_exact}, {"compatibility", compatibility_exact},
                {"max", max_exact()}};
  j["float"] = {{"shift_conjugacy", shift_conjugacy_float},   {"rho_conjugacy", rho_conjugacy_float},
                {"rho_inverse", rho_inverse_float},           {"cycle_embedding", cycle_embedding_float},
                {"decode_agreement", decode_agreement_float}, {"compatibility", compatibility_float},
                {"max", max_float()}};
  j["rho_roundtrip_failures"] = rho_roundtrip_failures;
  j["passed"] = passed();
  return j.dump(2);
}

CorsumReport verify_corsum(const RadixSystem& s, const Cycle& c, std::size_t samples, std::size_t depth,
                           std::uint64_t seed) {
  if (depth < 2) throw Error(ErrorKind::WordTooShort, "verification depth must be at least 2");
  const auto companions = companion_cycles(s, c);
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::size_t nd = s.digit_count();

  CorsumReport report;
  const std::size_t max_attempts = samples * 20 + 100;
  std::size_t attempts = 0;
  while (report.samples < samples && attempts++ < max_attempts) {
    // x = sum_{j<=n} B^{-j} d_j + B^{-n} theta with theta on a short random
    // tau-cycle, so x lies in X and avoids the lattice-aligned overlap points.
    std::vector<DigitIndex> cycle_word(2 + uniform(2));
    for (auto& l : cycle_word) l = uniform(nd);
    RatVector x = cycle_from_word(s, cycle_word).points.front();
    const std::size_t n = uniform(5);
    for (std::size_t j = 0; j < n; ++j) x = s.tau(uniform(nd), x);

    const Cycle& tail_cycle = companions[uniform(companions.size())];
    std::vector<DigitIndex> period = tail_cycle.labels;
    std::rotate(period.begin(), period.begin() + static_cast<long>(uniform(period.size())), period.end());
    std::vector<DigitIndex> prefix(uniform(7));
    for (auto& l : prefix) l = uniform(nd);
    const SymbolState st{x, EventuallyPeriodicWord{prefix, period}};

    // rho^{-1} is only single-valued off the branch overlaps.
    const auto here = admissible_digits(s, st.x);
    const SymbolState forward = rho(s, st);
    const auto there = admissible_digits(s, forward.x);
    if (here.size() != 1 || there.size() != 1) {
      ++report.skipped_ambiguous;
      continue;
    }
    ++report.samples;

    const std::vector<double> xf = to_double(x);
    const SolenoidPoint dx = decode_map_d(s, st, depth);
    const FloatSolenoidPoint dxf = decode_map_d(s, xf, st.word, depth);

    // i_hat(B x) = sigma(i_hat(x))
    {
      const RatVector bx = s.base() * x;
      const SolenoidPoint lhs = embed_i_hat(s, bx, depth);
      const SolenoidPoint rhs = shift_sigma(s, embed_i_hat(s, x, depth));
      report.shift_conjugacy_exact = std::max(report.shift_conjugacy_exact, solenoid_distance(lhs, rhs));
      const FloatSolenoidPoint lf = embed_i_hat(s, to_double(bx), depth);
      const FloatSolenoidPoint rf = shift_sigma(s, embed_i_hat(s, xf, depth));
      report.shift_conjugacy_float = std::max(report.shift_conjugacy_float, solenoid_distance(lf, rf));
      report.compatibility_exact = std::max(report.compatibility_exact, compatibility_defect(s, lhs));
      report.compatibility_float = std::max(report.compatibility_float, compatibility_defect(s, lf));
    }
    // d(rho(x, w)) = sigma^{-1}(d(x, w))
    {
      const SolenoidPoint lhs = decode_map_d(s, forward, depth - 1);
      const SolenoidPoint rhs = shift_sigma_inverse(dx);
      report.rho_conjugacy_exact = std::max(report.rho_conjugacy_exact, solenoid_distance(lhs, rhs));
      const FloatSolenoidPoint lf = decode_map_d(s, to_double(forward.x), forward.word, depth - 1);
      const FloatSolenoidPoint rf = shift_sigma_inverse(dxf);
      report.rho_conjugacy_float = std::max(report.rho_conjugacy_float, solenoid_distance(lf, rf));
    }
    // d(rho^{-1}(x, w)) = sigma(d(x, w))
    {
      const SymbolState back = rho_inverse(s, st);
      const SolenoidPoint lhs = decode_map_d(s, back, depth);
      const SolenoidPoint rhs = shift_sigma(s, dx);
      report.rho_inverse_exact = std::max(report.rho_inverse_exact, solenoid_distance(lhs, rhs));
      const FloatSolenoidPoint lf = decode_map_d(s, to_double(back.x), back.word, depth);
      const FloatSolenoidPoint rf = shift_sigma(s, dxf);
      report.rho_inverse_float = std::max(report.rho_inverse_float, solenoid_distance(lf, rf));
      report.compatibility_exact = std::max(report.compatibility_exact, compatibility_defect(s, lhs));
      report.compatibility_float = std::max(report.compatibility_float, compatibility_defect(s, lf));

      const SymbolState round = rho_inverse(s, forward);
      if (!(round.x == st.x) || !(canonical_word(round.word.prefix, round.word.period) ==
                                  canonical_word(st.word.prefix, st.word.period))) {
        ++report.rho_roundtrip_failures;
      }
    }
    // i_C(alpha(x, j)) = sigma(i_C(x, j))
    {
      const std::size_t j = uniform(c.period());
      const auto [ax, aj] = alpha(s, c, x, j);
      const SolenoidPoint lhs = embed_i_C(s, c, ax, aj, depth);
      const SolenoidPoint rhs = shift_sigma(s, embed_i_C(s, c, x, j, depth));
      report.cycle_embedding_exact = std::max(report.cycle_embedding_exact, solenoid_distance(lhs, rhs));
      const FloatSolenoidPoint lf = embed_i_C(s, c, to_double(ax), aj, depth);
      const FloatSolenoidPoint rf = shift_sigma(s, embed_i_C(s, c, xf, j, depth));
      report.cycle_embedding_float = std::max(report.cycle_embedding_float, solenoid_distance(lf, rf));
    }
    // d(x, w) = i_C(x - theta_j + k, j) with (k, j) from the cycle decoder
    {
      const DecodedPoint kj = decode_d_C(s, c, st.word);
      const RatVector y = x - c.points[kj.slot] + to_rational(kj.k);
      const SolenoidPoint rhs = embed_i_C(s, c, y, kj.slot, depth);
      report.decode_agreement_exact = std::max(report.decode_agreement_exact, solenoid_distance(dx, rhs));
      const FloatSolenoidPoint rf = embed_i_C(s, c, to_double(y), kj.slot, depth);
      report.decode_agreement_float = std::max(report.decode_agreement_float, solenoid_distance(dxf, rf));
      report.compatibility_exact = std::max(report.compatibility_exact, compatibility_defect(s, dx));
      report.compatibility_float = std::max(report.compatibility_float, compatibility_defect(s, dxf));
    }
  }
  return report;
}

}  // namespace matradix
