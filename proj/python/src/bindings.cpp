#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "matradix/attractor.hpp"
#include "matradix/config.hpp"
#include "matradix/cycle_codec.hpp"
#include "matradix/errors.hpp"
#include "matradix/radix_system.hpp"
#include "matradix/solenoid.hpp"
#include "matradix/spectrum.hpp"
#include "matradix/wavelet_group.hpp"

namespace py = pybind11;
using namespace matradix;

namespace {

// Python ints and fractions cross the boundary as decimal strings.
Integer to_integer(const py::handle& x) { return Integer(py::str(x).cast<std::string>()); }

Rational to_rational(const py::handle& x) {
  Rational q(py::str(x).cast<std::string>());
  q.canonicalize();
  return q;
}

IntVector to_int_vector(const py::iterable& v) {
  IntVector out;
  for (const auto& x : v) out.push_back(to_integer(x));
  return out;
}

IntMatrix to_int_matrix(const py::iterable& rows) {
  std::vector<IntVector> r;
  for (const auto& row : rows) r.push_back(to_int_vector(py::reinterpret_borrow<py::iterable>(row)));
  if (r.empty()) throw Error(ErrorKind::InvalidConfig, "empty matrix");
  IntMatrix m(r.size(), r[0].size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].size() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "ragged matrix");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = r[i][j];
  }
  return m;
}

std::vector<IntVector> to_digits(const py::iterable& ds) {
  std::vector<IntVector> out;
  for (const auto& d : ds) {
    if (py::isinstance<py::int_>(d)) {
      out.push_back(IntVector{to_integer(d)});
    } else {
      out.push_back(to_int_vector(py::reinterpret_borrow<py::iterable>(d)));
    }
  }
  return out;
}

py::object py_int(const Integer& x) { return py::int_(py::str(x.get_str())); }

py::object py_fraction(const Rational& q) {
  static const py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(py::str(q.get_str()));
}

py::list py_int_vector(const IntVector& v) {
  py::list out;
  for (const auto& x : v) out.append(py_int(x));
  return out;
}

py::list py_rat_vector(const RatVector& v) {
  py::list out;
  for (const auto& x : v) out.append(py_fraction(x));
  return out;
}

py::list py_int_matrix(const IntMatrix& m) {
  py::list out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(py_int(m(i, j)));
    out.append(row);
  }
  return out;
}

py::object py_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

Cycle cycle_or_trivial(const RadixSystem& s, const std::string& word) {
  return word.empty() ? trivial_cycle(s) : cycle_from_word(s, s.parse_digits(word));
}

}  // namespace

PYBIND11_MODULE(_matradix, m) {
  m.doc() = "Matrix radix systems: expansions, cycles, attractors, spectra and solenoids";

  static py::exception<Error> error(m, "MatradixError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("kind") = to_string(e.kind());
      exc.attr("exit_code") = exit_code(e.kind());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<RadixSystem>(m, "RadixSystem")
      .def(py::init([](const py::iterable& base, const py::iterable& digits) {
             return RadixSystem(to_int_matrix(base), to_digits(digits));
           }),
           py::arg("base"), py::arg("digits"))
      .def_property_readonly("dim", &RadixSystem::dim)
      .def_property_readonly("base", [](const RadixSystem& s) { return py_int_matrix(s.base()); })
      .def_property_readonly("digits",
                             [](const RadixSystem& s) {
                               py::list out;
                               for (const auto& d : s.digits()) out.append(py_int_vector(d));
                               return out;
                             })
      .def_property_readonly("escape_radius", &RadixSystem::escape_radius)
      .def(
          "encode",
          [](const RadixSystem& s, const py::iterable& k, const std::string& cycle, std::size_t slot) {
            const IntVector v = to_int_vector(k);
            if (cycle.empty()) return s.format_word(encode_integer(s, v));
            return s.format_word(encode_e_C(s, cycle_from_word(s, s.parse_digits(cycle)), v, slot));
          },
          py::arg("k"), py::arg("cycle") = "", py::arg("slot") = 0)
      .def(
          "decode",
          [](const RadixSystem& s, const std::string& word, const std::string& cycle) {
            const DecodedPoint p = decode_d_C(s, cycle_or_trivial(s, cycle), s.parse_word(word));
            return py::make_tuple(py_int_vector(p.k), p.slot);
          },
          py::arg("word"), py::arg("cycle") = "")
      .def("cycle_points",
           [](const RadixSystem& s, const std::string& cycle) {
             const Cycle c = cycle_from_word(s, s.parse_digits(cycle));
             py::list out;
             for (const auto& p : c.points) out.append(py_rat_vector(p));
             return out;
           })
      .def("integer_cycles",
           [](const RadixSystem& s) {
             py::list out;
             for (const auto& c : integer_cycles(s)) {
               py::list pts;
               for (const auto& p : c.points) pts.append(py_int_vector(p));
               py::dict d;
               d["points"] = pts;
               d["word"] = s.format_word(c.word);
               out.append(d);
             }
             return out;
           })
      .def(
          "measure",
          [](const RadixSystem& s, double h, unsigned depth) { return measure_estimate(rasterize(s, h, depth)); },
          py::arg("h") = 1.0 / 256, py::arg("depth") = 0)
      .def(
          "membership",
          [](const RadixSystem& s, const py::iterable& x, std::size_t budget) {
            RatVector v;
            for (const auto& q : x) v.push_back(to_rational(q));
            switch (membership(s, v, budget)) {
              case Membership::Inside: return "inside";
              case Membership::Outside: return "outside";
              case Membership::Undecided: break;
            }
            return "undecided";
          },
          py::arg("x"), py::arg("budget") = std::size_t{1} << 20)
      .def(
          "verify_corsum",
          [](const RadixSystem& s, const std::string& cycle, std::size_t samples, std::size_t depth,
             std::uint64_t seed) {
            const CorsumReport r = verify_corsum(s, cycle_or_trivial(s, cycle), samples, depth, seed);
            py::dict d = py_json(r.to_json());
            d["passed"] = r.passed();
            return d;
          },
          py::arg("cycle") = "", py::arg("samples") = 100, py::arg("depth") = 12, py::arg("seed") = kDefaultSeed);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def_readonly("name", &SystemConfig::name)
      .def_readonly("transpose", &SystemConfig::transpose)
      .def_readonly("cycles", &SystemConfig::cycles)
      .def_property_readonly("a", [](const SystemConfig& c) { return py_int_matrix(c.a); })
      .def_property_readonly("digits",
                             [](const SystemConfig& c) {
                               py::list out;
                               for (const auto& d : c.digits) out.append(py_int_vector(d));
                               return out;
                             })
      .def_property_readonly("dual_digits",
                             [](const SystemConfig& c) {
                               py::list out;
                               for (const auto& d : c.dual_digits) out.append(py_int_vector(d));
                               return out;
                             })
      .def("system", &SystemConfig::system);

  m.def("load_config", &load_config, py::arg("path"));

  m.def(
      "hadamard",
      [](const py::iterable& a, const py::iterable& digits, const py::iterable& dual) {
        const HadamardReport h = check_hadamard(to_int_matrix(a), to_digits(digits), to_digits(dual));
        py::dict d;
        d["defect"] = h.defect;
        d["unitary"] = h.unitary;
        d["fourier_distance"] = fourier_permutation_distance(h);
        return d;
      },
      py::arg("a"), py::arg("digits"), py::arg("dual_digits"));

  m.def(
      "spectrum",
      [](const SystemConfig& cfg, double h) {
        const auto cycles = extreme_cycles(cfg.a, cfg.digits, cfg.dual_digits);
        const Lattice lambda = spectrum_lattice(cfg.a, cfg.dual_digits, cycles);
        const Lattice gamma = tiling_lattice(cfg.a, cfg.digits, cfg.dual_digits);
        const TilingReport t = tiling_check(rasterize(cfg.system(), h), gamma);
        py::dict d;
        d["lambda"] = py_json(lattice_to_json(lambda));
        d["gamma"] = py_json(lattice_to_json(gamma));
        d["mean_multiplicity"] = t.mean_multiplicity;
        d["mass_uniformity"] = t.mass_uniformity;
        d["certified"] = certifies_tiling(t);
        return d;
      },
      py::arg("config"), py::arg("h") = 1.0 / 256);

  m.def(
      "group_relation_holds",
      [](const py::iterable& a, const py::iterable& k) {
        const WaveletGroup g(to_int_matrix(a));
        const IntVector v = to_int_vector(k);
        return g.mul(g.mul(g.u(), g.t(v)), g.inv(g.u())) == g.t(g.matrix() * v);
      },
      py::arg("a"), py::arg("k"));
}
