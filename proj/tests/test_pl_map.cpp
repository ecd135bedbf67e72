#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace fanrot;
using fanrot::testing::fan_of;
using fanrot::testing::linear;

namespace {

std::vector<std::array<Int, 4>> four(std::array<Int, 4> m) { return std::vector<std::array<Int, 4>>(4, m); }

const std::vector<IntVector>& quadrant_rays() {
  static const std::vector<IntVector> r = fanrot::testing::vecs({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  return r;
}

}  // namespace

TEST(Validate, Examples) {
  EXPECT_TRUE(PLAutomorphism::validate(quadrant_rays(), four({1, 0, 0, 1})).is_identity());
  try {
    (void)PLAutomorphism::validate(quadrant_rays(), four({4, -3, 3, 4}));
    FAIL();
  } catch (const InvalidError& e) {
    EXPECT_NE(std::string(e.what()).find("determinant 25 ≠ 1"), std::string::npos);
  }
  std::vector<std::array<Int, 4>> mats{{1, 1, 0, 1}, {1, 0, 0, 1}, {1, 0, 0, 1}, {1, 0, 0, 1}};
  try {
    (void)PLAutomorphism::validate(quadrant_rays(), mats);
    FAIL();
  } catch (const InvalidError& e) {
    EXPECT_NE(std::string(e.what()).find("continuity fails on ray (0,1)"), std::string::npos);
  }
}

TEST(Validate, RejectsDoubleCover) {
  // Sector j of the 8-ray fan onto quadrant j mod 4: continuous, unimodular, winds twice.
  Fan eight = fan_of({{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}});
  std::vector<UnimodularMatrix> pieces;
  for (std::size_t j = 0; j < 8; ++j) pieces.push_back(UnimodularMatrix::mapping(eight.sector(j), Fan::quadrants().sector(j % 4)));
  try {
    (void)PLAutomorphism::assemble(eight, pieces);
    FAIL();
  } catch (const InvalidError& e) {
    EXPECT_NE(std::string(e.what()).find("image rays do not form a fan"), std::string::npos);
  }
  EXPECT_THROW(PLAutomorphism::validate(quadrant_rays(), std::vector<std::array<Int, 4>>(3, {1, 0, 0, 1})),
               InvalidError);
}

TEST(ApplyVector, Examples) {
  EXPECT_EQ(PLAutomorphism::identity().apply(IntVector{3, 5}), (IntVector{3, 5}));
  EXPECT_EQ(linear(0, -1, 1, 0).apply(IntVector{1, 0}), (IntVector{0, 1}));
  EXPECT_EQ(linear(1, 1, 0, 1).apply(IntVector{0, 1}), (IntVector{1, 1}));
}

TEST(ImageFan, Examples) {
  EXPECT_EQ(image_fan(PLAutomorphism::identity()), Fan::quadrants());
  EXPECT_EQ(image_fan(linear(1, 1, 0, 1)), fan_of({{1, 0}, {1, 1}, {-1, 0}, {-1, -1}}));
  EXPECT_EQ(image_fan(linear(0, -1, 1, 0)), Fan::quadrants());
}

TEST(Compose, Examples) {
  PLAutomorphism r = linear(0, -1, 1, 0);
  EXPECT_EQ(compose(r, r), linear(-1, 0, 0, -1));
  PLAutomorphism f = construct_rotation(2, 7);
  EXPECT_TRUE(compose(f, inverse(f)).is_identity());
  EXPECT_EQ(compose(linear(1, 1, 0, 1), r), linear(1, -1, 1, 0));
  EXPECT_EQ(compose(r, linear(1, 1, 0, 1)), linear(0, -1, 1, 1));
}

TEST(Inverse, Examples) {
  EXPECT_TRUE(inverse(PLAutomorphism::identity()).is_identity());
  EXPECT_EQ(inverse(linear(0, -1, 1, 0)), linear(0, 1, -1, 0));
}

TEST(ConstructRotation, Examples) {
  EXPECT_EQ(construct_rotation(1, 4), linear(0, -1, 1, 0));
  EXPECT_TRUE(construct_rotation(0, 4).is_identity());
  PLAutomorphism f = construct_rotation(1, 5);
  EXPECT_EQ(f.fan(), fan_of({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {0, -1}}));
  EXPECT_TRUE(power(f, 5).is_identity());
  for (int k = 1; k < 5; ++k) EXPECT_FALSE(power(f, k).is_identity());
  // (1,1) is not a break ray: both sectors beside it carry [[1,-1],[1,0]].
  EXPECT_EQ(f.canonical().fan(), Fan::quadrants());
  EXPECT_NE(f.canonical().matrices()[0], f.canonical().matrices()[1]);
  EXPECT_THROW(construct_rotation(1, 2), InvalidError);
  EXPECT_THROW(construct_rotation(5, 5), InvalidError);
}

TEST(ConstructRotation, FansAreRegularWithQSectors) {
  for (long long q = 3; q <= 20; ++q) {
    Fan fan = rotation_fan(static_cast<std::size_t>(q));
    EXPECT_EQ(fan.size(), static_cast<std::size_t>(q));
    EXPECT_TRUE(fan.is_regular());
    PLAutomorphism f = construct_rotation(1, q);
    EXPECT_TRUE(power(f, q).is_identity()) << q;
  }
}

TEST(RandomElement, DeterministicAndValid) {
  EXPECT_EQ(random_element(11, 5), random_element(11, 5));
  PLAutomorphism g = random_element(1, 1);
  bool is_generator = false;
  for (const auto& gen : random_generators()) is_generator = is_generator || gen == g;
  EXPECT_TRUE(is_generator);
  for (std::uint64_t s = 1; s <= 30; ++s) {
    PLAutomorphism f = random_element(s, 6);
    std::vector<std::array<Int, 4>> mats;
    for (const auto& m : f.matrices()) mats.push_back({m.a(), m.b(), m.c(), m.d()});
    EXPECT_EQ(PLAutomorphism::validate(f.fan().generators(), mats), f);
  }
  EXPECT_THROW(random_element(1, 0), InvalidError);
}

TEST(PLAutomorphism, BijectiveOnPrimitiveVectors) {
  auto all = fanrot::testing::primitive_vectors(30);
  for (std::uint64_t s = 1; s <= 4; ++s) {
    PLAutomorphism f = random_element(100 + s, 6);
    PLAutomorphism g = inverse(f);
    for (const auto& v : all) {
      IntVector w = f.apply(v);
      ASSERT_EQ(gcd(w.x, w.y), 1);
      ASSERT_EQ(g.apply(w), v);
    }
  }
}

TEST(PLAutomorphism, ComposeIsAssociative) {
  for (std::uint64_t s = 1; s <= 25; ++s) {
    PLAutomorphism a = random_element(200 + s, 3), b = random_element(300 + s, 4), c = random_element(400 + s, 2);
    EXPECT_EQ(compose(a, compose(b, c)), compose(compose(a, b), c));
  }
}

TEST(PLAutomorphism, RefiningTheFanKeepsTheFunction) {
  std::mt19937_64 rng(8);
  auto all = fanrot::testing::primitive_vectors(30);
  for (std::uint64_t s = 1; s <= 6; ++s) {
    PLAutomorphism f = random_element(500 + s, 5);
    Fan finer = regularize_fan(f.fan());
    for (int k = 0; k < 4; ++k) finer = simple_split(finer, rng() % finer.size());
    PLAutomorphism g = f.on_fan(finer);
    EXPECT_EQ(g, f);
    for (const auto& v : all) ASSERT_EQ(g.apply(v), f.apply(v));
  }
}

TEST(PLAutomorphism, ImageOfRegularFanIsRegular) {
  for (std::uint64_t s = 1; s <= 40; ++s) {
    PLAutomorphism f = random_element(600 + s, 5);
    Fan regular = regularize_fan(f.fan());
    EXPECT_TRUE(f.on_fan(regular).image_fan().is_regular());
  }
}

TEST(PLAutomorphism, CanonicalIsCoarsest) {
  PLAutomorphism r = linear(0, -1, 1, 0);
  PLAutomorphism fine = r.on_fan(simple_split(simple_split(Fan::quadrants(), 0), 3));
  EXPECT_EQ(fine.canonical().fan(), Fan::quadrants());
  EXPECT_THROW(construct_rotation(1, 6).on_fan(Fan::quadrants()), InvalidError);
}
