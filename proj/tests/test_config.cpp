#include <doctest.h>
#include <json.hpp>

#include "matradix/config.hpp"
#include "matradix/errors.hpp"
#include "test_util.hpp"

using namespace matradix;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::NotExpansive;
}

}  // namespace

TEST_CASE("every shipped config parses and validates") {
  for (const auto& name : testutil::shipped_systems()) {
    const auto cfg = testutil::config(name);
    CHECK_NOTHROW(cfg.system());
    CHECK(cfg.dual_digits.size() == cfg.digits.size());
    CHECK_FALSE(cfg.cycles.empty());
  }
}

TEST_CASE("config fields") {
  const auto c = parse_config(R"({"name": "x", "A": [[1, 1], [-1, 1]], "digits": [[0, 0], [1, 0]],
                                  "transpose": false, "cycles": ["1,0;0,0"]})");
  CHECK(c.name == "x");
  CHECK_FALSE(c.transpose);
  CHECK(c.base() == c.a);
  CHECK(c.dual_digits.empty());
  CHECK(c.cycles == std::vector<std::string>{"1,0;0,0"});
  const auto one = parse_config(R"({"A": [[2]], "digits": [0, "3"]})");
  CHECK(one.digits[1] == make_int_vector({3}));
  CHECK(one.base() == IntMatrix{{2}});
}

TEST_CASE("config errors") {
  CHECK(kind_of("{") == ErrorKind::ParseError);
  CHECK(kind_of("[]") == ErrorKind::InvalidConfig);
  CHECK(kind_of(R"({"A": [[2]]})") == ErrorKind::InvalidConfig);
  CHECK(kind_of(R"({"A": [[2, 1]], "digits": [0, 1]})") == ErrorKind::InvalidConfig);
  CHECK(kind_of(R"({"A": [[2]], "digits": [[0, 0], [1, 0]]})") == ErrorKind::InvalidConfig);
  CHECK(kind_of(R"({"A": [[2]], "digits": [0, 1.5]})") == ErrorKind::InvalidConfig);
  CHECK(kind_of(R"({"A": [[2]], "digits": [0, 1], "cycles": [1]})") == ErrorKind::InvalidConfig);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("lattice JSON") {
  CHECK(lattice_to_json(Lattice::diagonal({Rational(1, 2), Rational(1)})) ==
        R"({"basis":[[1,0],[0,2]],"denom":2})");
  // entries are basis columns: each one, divided by denom, lies in the lattice
  const Lattice l = Lattice::from_generators(2, {RatVector{Rational(1, 2), Rational(1, 2)}, RatVector{Rational(0), Rational(3)}});
  const auto j = nlohmann::json::parse(lattice_to_json(l));
  const long q = j["denom"];
  std::vector<RatVector> cols;
  for (const auto& c : j["basis"]) {
    RatVector v;
    for (const long x : c) {
      Rational r(x, q);
      r.canonicalize();
      v.push_back(r);
    }
    CHECK(l.contains(v));
    cols.push_back(v);
  }
  CHECK(Lattice::from_generators(2, cols) == l);
}
