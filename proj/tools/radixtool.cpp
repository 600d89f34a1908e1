#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "matradix/attractor.hpp"
#include "matradix/config.hpp"
#include "matradix/cycle_codec.hpp"
#include "matradix/errors.hpp"
#include "matradix/radix_system.hpp"
#include "matradix/solenoid.hpp"
#include "matradix/spectrum.hpp"

using namespace matradix;
using nlohmann::json;

namespace {

struct Options {
  std::string system;
  std::string point;
  std::string cycle;
  std::size_t slot = 0;
  std::string word;
  unsigned depth = 0;
  std::string resolution = "1/256";
  std::string out;
  std::size_t samples = 100;
  std::uint64_t seed = kDefaultSeed;
  std::size_t budget = 1u << 20;
  bool json = false;
};

std::string fixed(double x, int digits) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << x;
  return o.str();
}

std::string general(double x) {
  std::ostringstream o;
  o << std::setprecision(3) << x;
  return o.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

RatVector parse_point(const std::string& text, std::size_t dim) {
  RatVector v;
  for (const auto& part : split(text, ',')) {
    Rational q;
    if (part.empty() || q.set_str(part, 10) != 0) throw Error(ErrorKind::ParseError, "bad coordinate '" + part + "'");
    q.canonicalize();
    v.push_back(q);
  }
  if (v.size() != dim) throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(v.size()) + " coordinates");
  return v;
}

IntVector parse_integer_point(const std::string& text, std::size_t dim) {
  IntVector k;
  for (const auto& q : parse_point(text, dim)) {
    if (q.get_den() != 1) throw Error(ErrorKind::ParseError, "point must be integral");
    k.push_back(q.get_num());
  }
  return k;
}

double parse_resolution(const std::string& text) {
  const auto slash = text.find('/');
  double h = 0;
  try {
    h = slash == std::string::npos ? std::stod(text) : std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "bad resolution '" + text + "'");
  }
  if (!(h > 0) || !std::isfinite(h)) throw Error(ErrorKind::ParseError, "resolution must be positive");
  return h;
}

template <class V>
std::string coords(const V& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s;
}

template <class V>
std::string point_text(const V& v) {
  return v.size() == 1 ? v[0].get_str() : "(" + coords(v) + ")";
}

template <class V>
json point_json(const V& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

std::string lattice_text(const Lattice& l) {
  const IntMatrix& b = l.basis();
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (i != j && b(i, j) != 0) return l.to_string();
  std::vector<std::string> factors;
  bool all_z = true;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    Rational step(b(i, i), l.denom());
    step.canonicalize();
    if (step == 1) {
      factors.push_back("Z");
      continue;
    }
    all_z = false;
    factors.push_back(step.get_den() == 1 ? step.get_str() + "Z" : "(" + step.get_str() + ")Z");
  }
  if (all_z) return "Z^" + std::to_string(b.rows());
  std::string s;
  for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? " x " : "") + factors[i];
  return s;
}

Cycle chosen_cycle(const RadixSystem& s, const Options& o) {
  return o.cycle.empty() ? trivial_cycle(s) : cycle_from_word(s, s.parse_digits(o.cycle));
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

// ---------------------------------------------------------------- commands

int cmd_validate(const Options& o) {
  const SystemConfig cfg = load_config(o.system);
  json j;
  std::ostringstream t;
  j["name"] = cfg.name;
  j["dim"] = cfg.a.rows();
  j["transpose"] = cfg.transpose;
  std::string problem;

  std::optional<bool> expansive;
  try {
    expansive = is_expansive(cfg.a);
  } catch (const Error& e) {
    problem = e.what();
  }
  const double radius = spectral_radius(cfg.a);
  j["spectral_radius"] = radius;
  j["expansive"] = expansive ? json(*expansive) : json(nullptr);
  t << "system: " << (cfg.name.empty() ? o.system : cfg.name) << "\n";
  t << "expansive: " << (expansive ? (*expansive ? "yes" : "no") : "borderline") << " (spectral radius "
    << fixed(radius, 4) << ")\n";
  if (expansive && !*expansive) problem = "NotExpansive: matrix is not expansive";

  const Integer d = abs(det(cfg.a));
  j["det"] = d.get_str();
  j["digit_count"] = cfg.digits.size();
  t << "digits: " << cfg.digits.size() << " (|det A| = " << d.get_str() << ")\n";

  auto complete = [&](const IntMatrix& base) {
    try {
      return is_complete_digit_set(base, cfg.digits);
    } catch (const Error&) {
      return false;
    }
  };
  const bool for_t = complete(cfg.a.transpose());
  const bool for_a = complete(cfg.a);
  j["complete_transpose"] = for_t;
  j["complete_plain"] = for_a;
  t << "complete for Aᵀ: " << (for_t ? "yes" : "no") << "; complete for A: " << (for_a ? "yes" : "no") << "\n";

  if (problem.empty()) {
    try {
      cfg.system();
    } catch (const Error& e) {
      problem = e.what();
    }
  }

  if (!cfg.dual_digits.empty() && problem.empty()) {
    const HadamardReport h = check_hadamard(cfg.a, cfg.digits, cfg.dual_digits);
    j["hadamard"] = {{"unitary", h.unitary}, {"defect", h.defect}};
    t << "hadamard: " << (h.unitary ? "unitary" : "not unitary") << " (defect " << general(h.defect) << ")\n";
  } else {
    j["hadamard"] = nullptr;
  }

  j["valid"] = problem.empty();
  j["error"] = problem.empty() ? json(nullptr) : json(problem);
  t << "valid: " << (problem.empty() ? "yes" : "no (" + problem + ")") << "\n";
  emit(o, j, t.str());
  return problem.empty() ? 0 : 2;
}

int cmd_encode(const Options& o) {
  const RadixSystem s = load_config(o.system).system();
  const IntVector k = parse_integer_point(o.point, s.dim());
  EventuallyPeriodicWord w;
  if (o.cycle.empty()) {
    w = encode_integer(s, k);
  } else {
    w = encode_e_C(s, cycle_from_word(s, s.parse_digits(o.cycle)), k, o.slot);
  }
  const std::string text = s.format_word(w);
  emit(o, {{"point", point_json(k)}, {"cycle", o.cycle.empty() ? json(nullptr) : json(o.cycle)}, {"slot", o.slot},
           {"word", text}},
       text + "\n");
  return 0;
}

int cmd_decode(const Options& o) {
  const RadixSystem s = load_config(o.system).system();
  const Cycle c = chosen_cycle(s, o);
  const DecodedPoint p = decode_d_C(s, c, s.parse_word(o.word));
  emit(o, {{"word", o.word}, {"k", point_json(p.k)}, {"slot", p.slot}},
       "k=" + coords(p.k) + " j=" + std::to_string(p.slot) + "\n");
  return 0;
}

int cmd_cycles(const Options& o) {
  const RadixSystem s = load_config(o.system).system();
  const auto cycles = integer_cycles(s);
  json list = json::array();
  std::ostringstream t;
  t << cycles.size() << " integer cycle" << (cycles.size() == 1 ? "" : "s") << "\n";
  for (const auto& c : cycles) {
    json pts = json::array();
    std::string orbit;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      pts.push_back(point_json(c.points[i]));
      orbit += (i ? " -> " : "") + point_text(c.points[i]);
    }
    const std::string word = s.format_word(c.word);
    list.push_back({{"period", c.points.size()}, {"points", pts}, {"word", word}});
    t << "period " << c.points.size() << ": " << orbit << "  word " << word << "\n";
  }
  emit(o, {{"escape_radius", s.escape_radius()}, {"cycles", list}}, t.str());
  return 0;
}

int cmd_attractor(const Options& o) {
  const RadixSystem s = load_config(o.system).system();
  if (!o.point.empty()) {
    const RatVector x = parse_point(o.point, s.dim());
    const Membership m = membership(s, x, o.budget);
    const char* name = m == Membership::Inside ? "inside" : m == Membership::Outside ? "outside" : "undecided";
    emit(o, {{"point", point_json(x)}, {"membership", name}}, point_text(x) + ": " + name + "\n");
    return m == Membership::Undecided ? exit_code(ErrorKind::MembershipUndecided) : 0;
  }
  const double h = parse_resolution(o.resolution);
  const unsigned depth = o.depth ? o.depth : default_depth(s, h);
  const Raster r = rasterize(s, h, depth, kDefaultCloudCap, o.seed);
  const double measure = measure_estimate(r);
  json meta = json::parse(raster_metadata_json(r));
  std::ostringstream t;
  t << "depth " << depth << ", h = " << general(h) << ", " << r.point_count() << " points\n";
  t << "measure estimate: " << fixed(measure, 4) << "\n";
  if (!o.out.empty()) {
    write_pgm(r, o.out);
    const std::string sidecar = std::filesystem::path(o.out).replace_extension(".json").string();
    std::ofstream(sidecar) << meta.dump(2) << "\n";
    t << "wrote " << o.out << " and " << sidecar << "\n";
  }
  emit(o, {{"depth", depth}, {"resolution", h}, {"measure", measure}, {"raster", meta},
           {"out", o.out.empty() ? json(nullptr) : json(o.out)}},
       t.str());
  return 0;
}

int cmd_spectrum(const Options& o) {
  const SystemConfig cfg = load_config(o.system);
  if (cfg.dual_digits.empty()) throw Error(ErrorKind::InvalidConfig, "spectrum needs dual_digits");
  const RadixSystem s = cfg.system();
  const HadamardReport h = check_hadamard(cfg.a, cfg.digits, cfg.dual_digits);
  if (!h.unitary) throw Error(ErrorKind::NotHadamard, "defect " + general(h.defect));
  const auto cycles = extreme_cycles(cfg.a, cfg.digits, cfg.dual_digits);
  const Lattice lambda = spectrum_lattice(cfg.a, cfg.dual_digits, cycles);
  const Lattice gamma = tiling_lattice(cfg.a, cfg.digits, cfg.dual_digits);
  const double res = parse_resolution(o.resolution);
  const unsigned depth = o.depth ? o.depth : default_depth(s, res);
  const TilingReport tr = tiling_check(rasterize(s, res, depth, kDefaultCloudCap, o.seed), gamma);
  const bool tiles = certifies_tiling(tr);
  const std::string verdict =
      std::string(tiles ? "tiles" : "not certified") + " (multiplicity " + fixed(tr.mean_multiplicity, 2) + ")";

  json cyc = json::array();
  std::ostringstream t;
  t << "hadamard: unitary (defect " << general(h.defect) << ")\n";
  t << "extreme cycles: " << cycles.size() << "\n";
  for (const auto& c : cycles) {
    json pts = json::array();
    std::string orbit;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      pts.push_back(point_json(c.points[i]));
      orbit += (i ? " -> " : "") + point_text(c.points[i]);
    }
    cyc.push_back(pts);
    t << "  " << orbit << "\n";
  }
  t << "Lambda = " << lattice_text(lambda) << "\n";
  t << "Gamma = " << lattice_text(gamma) << "\n";
  t << "tiling check (h = " << general(res) << ", depth " << depth << "): mean multiplicity "
    << fixed(tr.mean_multiplicity, 3) << ", fraction at 1 " << fixed(tr.fraction(1), 3) << ", mass uniformity "
    << fixed(tr.mass_uniformity, 3) << "\n";
  t << "verdict: " << verdict << "\n";
  emit(o,
       {{"hadamard_defect", h.defect},
        {"extreme_cycles", cyc},
        {"lambda", json::parse(lattice_to_json(lambda))},
        {"gamma", json::parse(lattice_to_json(gamma))},
        {"tiling",
         {{"resolution", res},
          {"depth", depth},
          {"mean_multiplicity", tr.mean_multiplicity},
          {"fraction_one", tr.fraction(1)},
          {"mass_uniformity", tr.mass_uniformity},
          {"certified", tiles}}},
        {"verdict", verdict}},
       t.str());
  return 0;
}

int cmd_verify(const Options& o) {
  const RadixSystem s = load_config(o.system).system();
  const Cycle c = chosen_cycle(s, o);
  const std::size_t depth = o.depth ? o.depth : 12;
  const CorsumReport r = verify_corsum(s, c, o.samples, depth, o.seed);
  json j = json::parse(r.to_json());
  j["passed"] = r.passed();
  std::ostringstream t;
  t << "samples " << r.samples << " (skipped ambiguous " << r.skipped_ambiguous << "), depth " << depth << "\n";
  t << "max deviation exact " << general(r.max_exact()) << ", float " << general(r.max_float()) << "\n";
  t << "rho roundtrip failures " << r.rho_roundtrip_failures << "\n";
  t << (r.passed() ? "passed" : "FAILED") << "\n";
  emit(o, j, t.str());
  return r.passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radixtool: matrix radix systems, cycles, attractors and spectra"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--system", o.system, "system config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_flag("--json", o.json, "machine-readable output");
  };

  auto* validate = app.add_subcommand("validate", "check expansivity, digit completeness and the Hadamard triple");
  add_common(validate);

  auto* encode = app.add_subcommand("encode", "radix expansion of an integer point");
  add_common(encode);
  encode->add_option("-p,--point", o.point, "integer point, comma separated")->required();
  encode->add_option("-c,--cycle", o.cycle, "cycle digit word, e.g. 1;0");
  encode->add_option("-j,--slot", o.slot, "cycle slot");

  auto* decode = app.add_subcommand("decode", "point and slot of an eventually periodic word");
  add_common(decode);
  decode->add_option("-w,--word", o.word, "word, e.g. 0;0;1|1;0")->required();
  decode->add_option("-c,--cycle", o.cycle, "cycle digit word");

  auto* cycles = app.add_subcommand("cycles", "integer cycles of the division map");
  add_common(cycles);

  auto* attractor = app.add_subcommand("attractor", "raster image and measure of the attractor");
  add_common(attractor);
  attractor->add_option("--depth", o.depth, "cloud depth (0: default rule)");
  attractor->add_option("--resolution", o.resolution, "cell size h, e.g. 1/256");
  attractor->add_option("--out", o.out, "PGM output path; metadata goes next to it");
  attractor->add_option("-p,--point", o.point, "decide membership of a rational point instead");
  attractor->add_option("--budget", o.budget, "membership search budget");
  attractor->add_option("--seed", o.seed, "sampling seed");

  auto* spectrum = app.add_subcommand("spectrum", "spectrum and tiling lattices with a raster tiling check");
  add_common(spectrum);
  spectrum->add_option("--depth", o.depth, "cloud depth (0: default rule)");
  spectrum->add_option("--resolution", o.resolution, "cell size h, e.g. 1/256");
  spectrum->add_option("--seed", o.seed, "sampling seed");

  auto* verify = app.add_subcommand("verify", "solenoid conjugacy checks on random samples");
  add_common(verify);
  verify->add_option("-c,--cycle", o.cycle, "cycle digit word (default: trivial cycle)");
  verify->add_option("--samples", o.samples, "number of samples");
  verify->add_option("--depth", o.depth, "inverse limit depth N (default 12)");
  verify->add_option("--seed", o.seed, "sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*encode) return cmd_encode(o);
    if (*decode) return cmd_decode(o);
    if (*cycles) return cmd_cycles(o);
    if (*attractor) return cmd_attractor(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*verify) return cmd_verify(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 2;
}
