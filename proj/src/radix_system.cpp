#include "matradix/radix_system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_set>

#include "matradix/errors.hpp"

namespace matradix {

namespace {

constexpr double kRadiusSafety = 1.001;
constexpr unsigned kMaxStepPower = 256;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

DigitIndex EventuallyPeriodicWord::at(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  return period[(i - prefix.size()) % period.size()];
}

EventuallyPeriodicWord canonical_word(std::vector<DigitIndex> prefix, std::vector<DigitIndex> period) {
  if (period.empty()) throw Error(ErrorKind::ParseError, "word needs a non-empty period");
  const std::size_t n = period.size();
  for (std::size_t q = 1; q < n; ++q) {
    if (n % q) continue;
    bool repeats = true;
    for (std::size_t i = q; i < n && repeats; ++i) repeats = period[i] == period[i - q];
    if (repeats) {
      period.resize(q);
      break;
    }
  }
  while (!prefix.empty() && prefix.back() == period.back()) {
    prefix.pop_back();
    std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
  }
  return EventuallyPeriodicWord{std::move(prefix), std::move(period)};
}

EscapeBound escape_bound(const IntMatrix& base, const std::vector<IntVector>& digits) {
  const std::size_t d = base.rows();
  const InverseAction inv(base);
  Eigen::MatrixXd binv(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) binv(i, j) = inv.adjugate()(i, j).get_d() / inv.determinant().get_d();

  auto spectral_norm = [](const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
  };

  std::vector<double> norms{1.0};  // ||B^{-i}|| for i = 0, 1, ...
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(d, d);
  EscapeBound out;
  for (unsigned m = 1; m <= kMaxStepPower; ++m) {
    power = power * binv;
    const double cm = spectral_norm(power);
    norms.push_back(cm);
    const double c = std::pow(cm, 1.0 / m) * kRadiusSafety;
    if (c < 1.0) {
      double k = 0;
      for (unsigned i = 0; i < m; ++i) k = std::max(k, norms[i] / std::pow(c, i));
      double max_digit = 0;
      for (const auto& dg : digits) max_digit = std::max(max_digit, norm2(dg));
      out.step_power = m;
      out.contraction = c;
      out.radius = max_digit * k * c / (1.0 - c);
      return out;
    }
  }
  throw Error(ErrorKind::NotExpansive, "no contracting power of B^{-1} found");
}

bool is_complete_digit_set(const IntMatrix& base, const std::vector<IntVector>& digits) {
  if (Integer(abs(det(base))) != Integer(static_cast<unsigned long>(digits.size()))) return false;
  const ResidueSystem res(base);
  std::unordered_set<IntVector, IntVectorHash> seen;
  for (const auto& dg : digits) {
    if (!seen.insert(res.canonical(dg)).second) return false;
  }
  return true;
}

RadixSystem::RadixSystem(IntMatrix base, std::vector<IntVector> digits)
    : base_(std::move(base)), digits_(std::move(digits)) {
  if (!base_.is_square() || base_.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "radix base must be square");
  for (const auto& dg : digits_) {
    if (dg.size() != base_.rows()) throw Error(ErrorKind::DimensionMismatch, "digit has wrong dimension");
  }
  const Integer dt = det(base_);
  if (dt == 0 || !is_expansive(base_)) throw Error(ErrorKind::NotExpansive, "B = " + base_.to_string());
  det_abs_ = abs(dt);
  if (det_abs_ != Integer(static_cast<unsigned long>(digits_.size()))) {
    throw Error(ErrorKind::WrongDigitCount, std::to_string(digits_.size()) + " digits but |det B| = " + det_abs_.get_str());
  }
  inverse_ = InverseAction(base_);
  residues_ = ResidueSystem(base_);
  for (DigitIndex i = 0; i < digits_.size(); ++i) {
    const IntVector r = residues_.canonical(digits_[i]);
    auto [it, fresh] = by_residue_.emplace(r, i);
    if (!fresh) {
      throw Error(ErrorKind::IncompleteDigitSet,
                  "digits " + to_string(digits_[it->second]) + " and " + to_string(digits_[i]) + " are congruent");
    }
    if (is_zero(digits_[i])) zero_digit_ = i;
  }
  bound_ = escape_bound(base_, digits_);
}

std::optional<DigitIndex> RadixSystem::find_digit(const IntVector& d) const {
  for (DigitIndex i = 0; i < digits_.size(); ++i)
    if (digits_[i] == d) return i;
  return std::nullopt;
}

DivisionResult RadixSystem::divide_step(const IntVector& x) const {
  const DigitIndex i = by_residue_.at(residues_.canonical(x));
  DivisionResult out{i, {}};
  if (!inverse_.apply_integral(x - digits_[i], out.quotient)) {
    throw std::logic_error("divide_step: residue table inconsistent");
  }
  return out;
}

RatVector RadixSystem::tau(DigitIndex d, const RatVector& x) const {
  return inverse_.apply(x + to_rational(digits_[d]));
}

std::string RadixSystem::format_digit(DigitIndex i) const {
  std::string out;
  const IntVector& dg = digits_.at(i);
  for (std::size_t k = 0; k < dg.size(); ++k) {
    if (k) out += ',';
    out += dg[k].get_str();
  }
  return out;
}

std::string RadixSystem::format_word(const EventuallyPeriodicWord& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.prefix.size(); ++i) out += (i ? ";" : "") + format_digit(w.prefix[i]);
  out += '|';
  for (std::size_t i = 0; i < w.period.size(); ++i) out += (i ? ";" : "") + format_digit(w.period[i]);
  return out;
}

std::vector<DigitIndex> RadixSystem::parse_digits(const std::string& text) const {
  std::vector<DigitIndex> out;
  const std::string body = trim(text);
  if (body.empty()) return out;
  for (const auto& item : split(body, ';')) {
    const auto comps = split(trim(item), ',');
    if (comps.size() != dim()) throw Error(ErrorKind::ParseError, "digit '" + item + "' has wrong dimension");
    IntVector v(dim());
    for (std::size_t k = 0; k < comps.size(); ++k) {
      if (v[k].set_str(trim(comps[k]), 10) != 0) throw Error(ErrorKind::ParseError, "bad integer '" + comps[k] + "'");
    }
    const auto idx = find_digit(v);
    if (!idx) throw Error(ErrorKind::ParseError, "'" + item + "' is not a digit of the system");
    out.push_back(*idx);
  }
  return out;
}

EventuallyPeriodicWord RadixSystem::parse_word(const std::string& text) const {
  const auto halves = split(text, '|');
  if (halves.size() != 2) throw Error(ErrorKind::ParseError, "word needs exactly one '|': " + text);
  EventuallyPeriodicWord w{parse_digits(halves[0]), parse_digits(halves[1])};
  if (w.period.empty()) throw Error(ErrorKind::ParseError, "word has an empty period: " + text);
  return w;
}

RadixSystem new_system(const IntMatrix& base, const std::vector<IntVector>& digits) { return RadixSystem(base, digits); }

DivisionResult divide_step(const RadixSystem& s, const IntVector& x) { return s.divide_step(x); }

EventuallyPeriodicWord encode_integer(const RadixSystem& s, const IntVector& x) {
  std::unordered_map<IntVector, std::size_t, IntVectorHash> first_seen;
  std::vector<DigitIndex> digits;
  IntVector current = x;
  while (true) {
    auto [it, fresh] = first_seen.emplace(current, digits.size());
    if (!fresh) {
      const std::size_t start = it->second;
      std::vector<DigitIndex> prefix(digits.begin(), digits.begin() + static_cast<long>(start));
      std::vector<DigitIndex> period(digits.begin() + static_cast<long>(start), digits.end());
      return canonical_word(std::move(prefix), std::move(period));
    }
    DivisionResult step = s.divide_step(current);
    digits.push_back(step.digit);
    current = std::move(step.quotient);
  }
}

IntVector eval_finite(const RadixSystem& s, const EventuallyPeriodicWord& w) {
  const auto zero = s.zero_digit();
  if (!zero) throw Error(ErrorKind::NotFinitelyRepresentable, "the digit set has no zero digit");
  const EventuallyPeriodicWord c = canonical_word(w.prefix, w.period);
  if (c.period.size() != 1 || c.period[0] != *zero) {
    throw Error(ErrorKind::NotFinitelyRepresentable, "word does not end in the zero digit: " + s.format_word(w));
  }
  IntVector acc(s.dim());
  for (std::size_t i = c.prefix.size(); i-- > 0;) acc = s.base() * acc + s.digit(c.prefix[i]);
  return acc;
}

std::vector<IntVector> ball_points(const RatVector& center, double radius) {
  const std::size_t d = center.size();
  const std::vector<double> c = to_double(center);
  const double r2 = radius * radius;
  std::vector<IntVector> out;
  IntVector current(d);
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double used) {
    if (i == d) {
      out.push_back(current);
      return;
    }
    const double rem = std::sqrt(std::max(0.0, r2 - used));
    const long lo = static_cast<long>(std::ceil(c[i] - rem - 1e-12));
    const long hi = static_cast<long>(std::floor(c[i] + rem + 1e-12));
    for (long v = lo; v <= hi; ++v) {
      const double dv = static_cast<double>(v) - c[i];
      if (used + dv * dv > r2 * (1 + 1e-12)) continue;
      current[i] = v;
      rec(i + 1, used + dv * dv);
    }
  };
  rec(0, 0.0);
  return out;
}

std::vector<IntegerCycle> integer_cycles(const RadixSystem& s) {
  std::unordered_map<IntVector, int, IntVectorHash> state;  // 1 on current path, 2 done
  std::vector<IntegerCycle> cycles;
  for (const auto& start : ball_points(RatVector(s.dim()), s.escape_radius())) {
    if (state.count(start)) continue;
    std::vector<IntVector> path;
    std::unordered_map<IntVector, std::size_t, IntVectorHash> position;
    IntVector x = start;
    while (!state.count(x)) {
      state[x] = 1;
      position[x] = path.size();
      path.push_back(x);
      x = s.divide_step(x).quotient;
    }
    if (state[x] == 1 && position.count(x)) {
      std::vector<IntVector> pts(path.begin() + static_cast<long>(position[x]), path.end());
      const auto first = std::min_element(pts.begin(), pts.end());
      std::rotate(pts.begin(), first, pts.end());
      std::vector<DigitIndex> word;
      for (const auto& p : pts) word.push_back(s.divide_step(p).digit);
      cycles.push_back(IntegerCycle{std::move(pts), EventuallyPeriodicWord{{}, std::move(word)}});
    }
    for (const auto& p : path) state[p] = 2;
  }
  std::sort(cycles.begin(), cycles.end(), [](const IntegerCycle& a, const IntegerCycle& b) {
    if (a.points.size() != b.points.size()) return a.points.size() < b.points.size();
    return a.points.front() < b.points.front();
  });
  return cycles;
}

}  // namespace matradix
