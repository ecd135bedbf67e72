#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace fanrot;
using fanrot::testing::linear;

namespace {

RotationNumber rn(long long p, long long q) { return RotationNumber::make(p, q); }

// sign(alpha + beta * sqrt(disc)) for disc > 0 not a square.
int surd_sign(const Int& alpha, const Int& beta, const Int& disc) {
  int sa = sign(alpha), sb = sign(beta);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
  // opposite signs: compare alpha^2 with beta^2 * disc
  Int lhs = alpha * alpha, rhs = beta * beta * disc;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

// Whether one of the four eigen-directions of the hyperbolic matrix m,
// v = (2b, t - 2a ± sqrt(D)) and its negative, lies in the closed sector.
bool sector_holds_eigenray(const UnimodularMatrix& m, const Sector& s) {
  Int t = m.trace();
  Int disc = t * t - 4;
  const IntVector& lo = s.lo.generator();
  const IntVector& hi = s.hi.generator();
  for (int root : {1, -1}) {
    for (int dir : {1, -1}) {
      // v = dir * (2b, (t - 2a) + root*sqrt(disc)); cross(u, v) = u.x*v.y - u.y*v.x
      auto cross_with = [&](const IntVector& u, bool u_first) {
        Int alpha = u.x * (t - 2 * m.a()) - u.y * 2 * m.b();
        Int beta = u.x * root;
        if (!u_first) {
          alpha = -alpha;
          beta = -beta;
        }
        return dir * surd_sign(alpha, beta, disc);
      };
      if (cross_with(lo, true) >= 0 && cross_with(hi, false) >= 0) return true;
    }
  }
  return false;
}

UnimodularMatrix random_hyperbolic(std::mt19937_64& rng) {
  std::vector<UnimodularMatrix> gens{UnimodularMatrix::from_entries(1, 1, 0, 1), UnimodularMatrix::from_entries(1, 0, 1, 1),
                                     UnimodularMatrix::from_entries(1, -1, 0, 1), UnimodularMatrix::from_entries(1, 0, -1, 1),
                                     UnimodularMatrix::from_entries(-1, 0, 0, -1)};
  while (true) {
    UnimodularMatrix m = UnimodularMatrix::identity();
    for (std::size_t k = 1 + rng() % 7; k > 0; --k) m = m * gens[rng() % gens.size()];
    if (abs_value(m.trace()) > 2) return m;
  }
}

}  // namespace

TEST(RotationNumber, Arithmetic) {
  EXPECT_EQ(rn(0, 1).str(), "0/1");
  EXPECT_EQ(rn(5, 4).str(), "1/4");
  EXPECT_EQ(rn(-1, 4).str(), "3/4");
  EXPECT_EQ(rn(2, 8), rn(1, 4));
  EXPECT_EQ(RotationNumber::parse("3/6"), rn(1, 2));
  EXPECT_EQ(RotationNumber::parse("7"), rn(0, 1));
  EXPECT_EQ(rn(1, 4) + rn(1, 3), rn(7, 12));
  EXPECT_EQ(-rn(1, 5), rn(4, 5));
  EXPECT_EQ(Int(3) * rn(1, 2), rn(1, 2));
  EXPECT_THROW(RotationNumber::make(1, 0), InvalidError);
  EXPECT_THROW(RotationNumber::parse("1/x"), ParseError);
}

TEST(WrapStep, Examples) {
  PLAutomorphism r = linear(0, -1, 1, 0);
  EXPECT_EQ(wrap_step(r, {1, 0}), 0);
  EXPECT_EQ(wrap_step(r, {0, -1}), 1);
  for (const auto& v : fanrot::testing::primitive_vectors(4)) EXPECT_EQ(wrap_step(PLAutomorphism::identity(), v), 0);
}

// Images of the fan rays, read in order, cross the cut at F(ref) exactly once.
TEST(WrapStep, ImagesWindOnce) {
  for (std::uint64_t s = 1; s <= 40; ++s) {
    PLAutomorphism f = random_element(1000 + s, 4);
    Fan fan = f.fan();
    int sum = 0;
    for (std::size_t j = 0; j < fan.size(); ++j) {
      IntVector a = f.apply(fan.ray(j).generator());
      IntVector b = f.apply(fan.ray(fan.next(j)).generator());
      IntVector ref = f.apply(positive_x_axis());
      if (ccw_compare(b, a, ref) <= 0) ++sum;
    }
    EXPECT_EQ(sum, 1);
  }
}

TEST(Rotation, Examples) {
  EXPECT_EQ(rotation_number(PLAutomorphism::identity()), rn(0, 1));
  EXPECT_EQ(rotation_number(construct_rotation(1, 4)), rn(1, 4));
  EXPECT_EQ(rotation_number(linear(0, -1, 1, 1)), rn(1, 6));
  RotationReport h = rotation_report(linear(2, 1, 1, 1));
  EXPECT_EQ(h.rho, rn(0, 1));
  EXPECT_EQ(h.kind, RotationReport::Case::sector_cycle);
  EXPECT_EQ(h.period, 1u);
  EXPECT_EQ(rotation_number(linear(-2, -1, -1, -1)), rn(1, 2));
  EXPECT_EQ(rotation_number(inverse(construct_rotation(1, 5))), rn(4, 5));
}

TEST(Rotation, AllConstructedRotations) {
  for (long long q = 3; q <= 16; ++q) {
    for (long long p = 0; p < q; ++p) EXPECT_EQ(rotation_number(construct_rotation(p, q)), rn(p, q)) << p << "/" << q;
  }
}

TEST(Rotation, IndependentOfReferenceAndStart) {
  std::vector<IntVector> refs{{1, 0}, {0, 1}, {-3, 2}, {5, -7}, {-1, -1}};
  for (std::uint64_t s = 1; s <= 60; ++s) {
    PLAutomorphism f = random_element(1100 + s, 1 + s % 6);
    if (s % 4 == 0) f = compose(f, linear(2, 1, 1, 1));
    DeterministicFan det = deterministic_refinement(f);
    RotationNumber base = rotation_report(det).rho;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      EXPECT_EQ(rotation_report(det, {refs[i], i}).rho, base) << s;
    }
  }
}

// Hyperbolic linear maps: rho is 0 for trace > 2 and 1/2 for trace < -2, and the
// sector cycle found by the library holds an eigen-ray (exact quadratic-surd test).
TEST(Rotation, HyperbolicEigenRayOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    UnimodularMatrix m = random_hyperbolic(rng);
    PLAutomorphism f = PLAutomorphism::linear(m);
    RotationReport rep = rotation_report(f);
    EXPECT_EQ(rep.rho, m.trace() > 2 ? rn(0, 1) : rn(1, 2)) << m;
    if (rep.kind == RotationReport::Case::sector_cycle) {
      bool found = false;
      for (std::size_t s : rep.cycle) found = found || sector_holds_eigenray(m, rep.fan.sector(s));
      EXPECT_TRUE(found) << m;
    }
  }
}

// Conjugating a hyperbolic map by a PL element keeps the eigen-ray answer.
TEST(Rotation, ConjugatedHyperbolicMaps) {
  std::mt19937_64 rng(13);
  for (std::uint64_t s = 1; s <= 30; ++s) {
    UnimodularMatrix m = random_hyperbolic(rng);
    PLAutomorphism g = random_element(1200 + s, 3);
    PLAutomorphism f = compose(g, compose(PLAutomorphism::linear(m), inverse(g)));
    EXPECT_EQ(rotation_number(f), m.trace() > 2 ? rn(0, 1) : rn(1, 2));
  }
}

TEST(Rotation, GroupInvariances) {
  for (std::uint64_t s = 1; s <= 40; ++s) {
    PLAutomorphism f = random_element(1300 + s, 1 + s % 6);
    PLAutomorphism g = random_element(1400 + s, 1 + (s * 5) % 6);
    RotationNumber rho = rotation_number(f);
    for (long long k = 1; k <= 5; ++k) EXPECT_EQ(rotation_number(power(f, k)), Int(k) * rho);
    EXPECT_EQ(rotation_number(compose(g, compose(f, inverse(g)))), rho);
    EXPECT_EQ(rotation_number(inverse(f)), -rho);
  }
}

TEST(FiniteOrder, Examples) {
  EXPECT_EQ(finite_order(construct_rotation(1, 4)), 4u);
  EXPECT_EQ(finite_order(PLAutomorphism::identity()), 1u);
  EXPECT_FALSE(finite_order(linear(1, 1, 0, 1)).has_value());
  EXPECT_FALSE(finite_order(linear(2, 1, 1, 1)).has_value());
  EXPECT_EQ(finite_order(linear(0, -1, 1, 1)), 6u);
  EXPECT_EQ(finite_order(construct_rotation(3, 9)), 3u);
}

// Brute-force order by powers, compared with finite_order on conjugates of rotations.
TEST(FiniteOrder, MatchesBruteForcePowers) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    long long q = 3 + static_cast<long long>(s % 6);
    long long p = 1 + static_cast<long long>(s % static_cast<std::uint64_t>(q - 1));
    PLAutomorphism g = random_element(1500 + s, 3);
    PLAutomorphism f = compose(g, compose(construct_rotation(p, q), inverse(g)));
    std::size_t brute = 0;
    PLAutomorphism acc = PLAutomorphism::identity();
    for (std::size_t k = 1; k <= 20; ++k) {
      acc = compose(f, acc);
      if (acc.is_identity()) {
        brute = k;
        break;
      }
    }
    EXPECT_EQ(finite_order(f), brute);
  }
}

TEST(Estimate, Examples) {
  EXPECT_NEAR(estimate_rotation(construct_rotation(1, 4), 1000), 0.25, 0.002);
  EXPECT_EQ(estimate_rotation(PLAutomorphism::identity(), 5000, 0.3), 0.0);
  EXPECT_NEAR(estimate_rotation(linear(0, -1, 1, 1), 100000), 1.0 / 6.0, 2e-5);
  EXPECT_THROW(estimate_rotation(PLAutomorphism::identity(), 0), InvalidError);
  EXPECT_NEAR(circle_distance(0.999, 0.001), 0.002, 1e-12);
}

TEST(Estimate, AgreesWithExactValue) {
  for (std::uint64_t s = 1; s <= 40; ++s) {
    PLAutomorphism f = random_element(1600 + s, 1 + s % 10);
    double exact = rotation_number(f).to_double();
    EXPECT_LE(circle_distance(exact, estimate_rotation(f, 100000, 0.37)), 2e-5 + 1e-12) << s;
  }
}
