#include <doctest.h>

#include <random>
#include <set>

#include "matradix/errors.hpp"
#include "matradix/exact_linalg.hpp"
#include "test_util.hpp"

using namespace matradix;

TEST_CASE("det and solve agree with the cofactor oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 4;
    const IntMatrix m = testutil::random_matrix(rng, d, 6);
    const auto q = testutil::to_oracle(m);
    CHECK(Rational(det(m)) == oracle::det(q));
    if (det(m) == 0) continue;
    const IntVector b = testutil::random_vector(rng, d, 9);
    const RatVector x = solve(m, to_rational(b));
    CHECK(x == oracle::mat_apply(oracle::inverse(q), testutil::to_oracle(b)));
    const IntMatrix adj = adjugate(m);
    const IntMatrix prod = adj * m;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) CHECK(prod(i, j) == (i == j ? det(m) : Integer(0)));
  }
}

TEST_CASE("inverse action") {
  const IntMatrix a{{1, 2}, {-2, 1}};
  const InverseAction inv(a);
  CHECK(inv.determinant() == 5);
  IntVector out;
  CHECK(inv.apply_integral(make_int_vector({1, 0}), out) == false);
  CHECK(inv.apply_integral(a * make_int_vector({3, -4}), out));
  CHECK(out == make_int_vector({3, -4}));
}

TEST_CASE("characteristic polynomial and rational eigenvalues") {
  // det(xI - A) for A = [[1,-2],[2,1]] is x^2 - 2x + 5
  CHECK(characteristic_polynomial(IntMatrix{{1, -2}, {2, 1}}) == std::vector<Integer>{5, -2, 1});
  CHECK(rational_eigenvalues(IntMatrix{{1, -2}, {2, 1}}).empty());
  const auto roots = rational_eigenvalues(IntMatrix{{2, 1}, {0, 3}});
  CHECK(std::set<Integer>(roots.begin(), roots.end()) == std::set<Integer>{2, 3});
  CHECK(rational_eigenvalues(IntMatrix{{2}}) == std::vector<Integer>{2});
}

TEST_CASE("expansivity") {
  CHECK(is_expansive(IntMatrix{{2}}));
  CHECK(is_expansive(IntMatrix{{1, 1}, {-1, 1}}));
  CHECK(is_expansive(IntMatrix{{1, -2}, {2, 1}}));
  CHECK_FALSE(is_expansive(IntMatrix{{2, 0}, {0, 0}}));
  CHECK_THROWS_AS(is_expansive(IntMatrix{{1, 0}, {0, 2}}), Error);
  CHECK_NOTHROW(is_expansive(IntMatrix{{-2}}));
  CHECK(spectral_radius(IntMatrix{{1, 1}, {-1, 1}}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("residue systems") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 1 + trial % 3;
    IntMatrix m = testutil::random_matrix(rng, d, 4);
    if (det(m) == 0) continue;
    const ResidueSystem r(m);
    const auto all = r.enumerate();
    // cardinality |det m|, pairwise incongruent (oracle: m^{-1}(v - w) not integral)
    CHECK(Integer(static_cast<unsigned long>(all.size())) == abs(det(m)));
    const auto inv = oracle::inverse(testutil::to_oracle(m));
    for (std::size_t i = 0; i < all.size() && all.size() < 40; ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j)
        CHECK_FALSE(oracle::integral(oracle::mat_apply(inv, testutil::to_oracle(all[i] - all[j]))));
    for (int k = 0; k < 20; ++k) {
      const IntVector v = testutil::random_vector(rng, d, 30);
      const IntVector w = testutil::random_vector(rng, d, 30);
      const IntVector c = r.canonical(v);
      CHECK(c == r.canonical(v + m * w));
      CHECK(oracle::integral(oracle::mat_apply(inv, testutil::to_oracle(v - c))));
      for (std::size_t i = 0; i < d; ++i) {
        CHECK(c[i] >= 0);
        CHECK(c[i] < r.hnf()(i, i));
      }
    }
  }
}

TEST_CASE("residue examples") {
  CHECK(residues_enumerate(IntMatrix{{2}}).size() == 2);
  CHECK(residue_canon(IntMatrix{{2}}, make_int_vector({-3})) == make_int_vector({1}));
  CHECK(residues_enumerate(IntMatrix{{1, 2}, {-2, 1}}).size() == 5);
}

TEST_CASE("integer kernel") {
  const IntMatrix m{{1, 2, 3}, {2, 4, 6}};
  const auto ker = integer_kernel(m);
  CHECK(ker.size() == 2);
  for (const auto& v : ker) CHECK(is_zero(m * v));
}

TEST_CASE("lattices: canonical form is order independent and the dual is an involution") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + trial % 3;
    std::vector<RatVector> gens;
    for (std::size_t k = 0; k < d + 2; ++k) {
      RatVector g;
      for (auto& x : testutil::random_vector(rng, d, 7)) {
        g.emplace_back(x, 1 + static_cast<long>(rng() % 4));
        g.back().canonicalize();
      }
      gens.push_back(g);
    }
    Lattice a;
    try {
      a = Lattice::from_generators(d, gens);
    } catch (const Error&) {
      continue;
    }
    std::shuffle(gens.begin(), gens.end(), rng);
    CHECK(Lattice::from_generators(d, gens) == a);
    const Lattice dual = lattice_dual(a);
    CHECK(lattice_dual(dual) == a);
    CHECK(a.covolume() * dual.covolume() == 1);
    // oracle: every dual generator pairs integrally with every generator
    for (const auto& g : gens) {
      CHECK(a.contains(g));
      for (const auto& h : dual.generators()) CHECK(dot(g, h).get_den() == 1);
    }
  }
}

TEST_CASE("lattice examples") {
  const Lattice l = Lattice::diagonal({Rational(1, 2), Rational(1)});
  CHECK(lattice_dual(l) == Lattice::diagonal({Rational(2), Rational(1)}));
  CHECK(l.covolume() == Rational(1, 2));
  CHECK(l.contains(RatVector{Rational(3, 2), Rational(-4)}));
  CHECK_FALSE(l.contains(RatVector{Rational(1, 3), Rational(0)}));
  CHECK(lattice_join(Lattice::diagonal({Rational(2)}), Lattice::diagonal({Rational(3)})) == Lattice::integer_lattice(1));
  std::size_t count = 0;
  l.for_each_point_in_box({0.0, 0.0}, {1.0, 2.0}, [&](const RatVector&) { ++count; });
  CHECK(count == 9);
}

TEST_CASE("rational span of lower rank") {
  const RationalSpan s(2, {RatVector{Rational(1), Rational(0)}, RatVector{Rational(3), Rational(0)}});
  CHECK(s.rank() == 1);
  const RationalSpan t = s.join(s.image(IntMatrix{{1, -2}, {2, 1}}));
  CHECK(t.rank() == 2);
  CHECK(t.to_lattice() == Lattice::diagonal({Rational(1), Rational(2)}));
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(exit_code(ErrorKind::InvalidConfig) == 2);
  CHECK(exit_code(ErrorKind::ParseError) == 2);
  CHECK(exit_code(ErrorKind::MembershipUndecided) == 4);
  CHECK(exit_code(ErrorKind::NotExpansive) == 3);
  CHECK(exit_code(ErrorKind::NoSlotMatch) == 3);
}
