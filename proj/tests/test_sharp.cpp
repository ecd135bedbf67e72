#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "support.hpp"

using namespace fanrot;
using fanrot::testing::fan_of;
using fanrot::testing::linear;

TEST(SharpImage, Examples) {
  const Fan& q = Fan::quadrants();
  EXPECT_EQ(sharp_image(PLAutomorphism::identity(), q, ConeRef::sector(0)), ConeRef::sector(0));
  PLAutomorphism shear = linear(1, 1, 0, 1);
  EXPECT_EQ(sharp_image(shear, q, ConeRef::sector(0)), ConeRef::sector(0));
  EXPECT_FALSE(sharp_image(shear, q, ConeRef::sector(1)).has_value());
  for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(sharp_image(shear, q, ConeRef::ray(j)).has_value());
  EXPECT_EQ(sharp_image(shear, q, ConeRef::origin()), ConeRef::origin());
  EXPECT_THROW(sharp_image(construct_rotation(1, 6), q, ConeRef::sector(0)), InvalidError);
}

TEST(RayOrbit, Examples) {
  const Fan& q = Fan::quadrants();
  OrbitStatus r = ray_orbit_status(linear(0, -1, 1, 0), q, 0);
  ASSERT_TRUE(r.is_cycle());
  EXPECT_EQ(r.cycle(), (OrbitStatus::Cycle{0, 4}));

  OrbitStatus s = ray_orbit_status(linear(1, 1, 0, 1), q, 1);
  ASSERT_TRUE(s.is_cycle());
  EXPECT_EQ(s.cycle(), (OrbitStatus::Cycle{1, 1}));
  EXPECT_EQ(s.prefix[1], ConeRef::sector(0));

  OrbitStatus u = ray_orbit_status(linear(0, -1, 1, 1), q, 1);
  ASSERT_FALSE(u.is_cycle());
  EXPECT_EQ(std::get<OrbitStatus::Undefined>(u.outcome).step, 2u);
  EXPECT_EQ(u.prefix[1], ConeRef::sector(1));
}

TEST(DecomposeSimple, Examples) {
  auto rot = decompose_simple(linear(0, -1, 1, 0));
  ASSERT_EQ(rot.size(), 1u);
  EXPECT_EQ(rot[0].kind, StepKind::isomorphism);

  auto id = decompose_simple(PLAutomorphism::identity());
  ASSERT_EQ(id.size(), 1u);
  EXPECT_EQ(id[0].kind, StepKind::isomorphism);

  auto sh = decompose_simple(linear(1, 1, 0, 1));
  ASSERT_EQ(sh.size(), 5u);
  std::vector<StepKind> kinds{StepKind::isomorphism, StepKind::split, StepKind::split, StepKind::merge,
                              StepKind::merge};
  for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(sh[j].kind, kinds[j]) << j;
  EXPECT_EQ(sh[0].target_fan, fan_of({{1, 0}, {1, 1}, {-1, 0}, {-1, -1}}));
  EXPECT_EQ(sh[1].target_fan, fan_of({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}}));
  EXPECT_EQ(sh[2].target_fan, fan_of({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}));
  EXPECT_EQ(sh[3].target_fan, fan_of({{1, 0}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}));
  EXPECT_EQ(sh[4].target_fan, Fan::quadrants());
  for (std::size_t j = 1; j < 5; ++j) EXPECT_TRUE(sh[j].map.is_identity());

  PLAutomorphism irregular = PLAutomorphism::identity().on_fan(fan_of({{1, 0}, {1, 2}, {-1, 0}, {0, -1}}));
  EXPECT_THROW(decompose_simple(irregular), InvalidError);
}

TEST(DecomposeSimple, ReplayAndShape) {
  for (std::uint64_t s = 1; s <= 60; ++s) {
    PLAutomorphism f = random_element(700 + s, 1 + s % 6);
    auto steps = decompose_simple(f);
    ASSERT_FALSE(steps.empty());
    EXPECT_EQ(steps.front().source_fan, f.fan());
    EXPECT_EQ(steps.back().target_fan, f.fan());
    PLAutomorphism product = PLAutomorphism::identity();
    for (std::size_t j = 0; j < steps.size(); ++j) {
      if (j > 0) EXPECT_EQ(steps[j].source_fan, steps[j - 1].target_fan);
      EXPECT_TRUE(steps[j].map.is_compatible(steps[j].source_fan));
      auto shape = classify_step(steps[j].map, steps[j].source_fan, steps[j].target_fan);
      ASSERT_TRUE(shape.has_value());
      EXPECT_EQ(shape->kind, steps[j].kind);
      product = compose(steps[j].map, product);
    }
    EXPECT_EQ(product, f);
  }
}

TEST(DeterministicRefinement, Examples) {
  DeterministicFan r = deterministic_refinement(linear(0, -1, 1, 0));
  EXPECT_EQ(r.fan, Fan::quadrants());
  EXPECT_EQ(r.passes, 0u);
  DeterministicFan s = deterministic_refinement(linear(1, 1, 0, 1));
  EXPECT_EQ(s.fan, Fan::quadrants());

  PLAutomorphism f = linear(0, -1, 1, 1);
  DeterministicFan d = deterministic_refinement(f);
  EXPECT_GT(d.fan.size(), 4u);
  EXPECT_TRUE(d.fan.refines(Fan::quadrants()));
  EXPECT_TRUE(d.fan.is_regular());
  EXPECT_EQ(d.map, f);
  for (std::size_t j = 0; j < d.fan.size(); ++j) EXPECT_TRUE(ray_orbit_status(f, d.fan, j).is_cycle()) << j;
}

TEST(DeterministicRefinement, PostconditionAndMonotoneSplitCount) {
  std::vector<PLAutomorphism> corpus;
  for (std::uint64_t s = 1; s <= 80; ++s) corpus.push_back(random_element(800 + s, 1 + s % 8));
  corpus.push_back(linear(2, 1, 1, 1));
  corpus.push_back(linear(-2, -1, -1, -1));
  corpus.push_back(compose(construct_rotation(1, 5), linear(2, 1, 1, 1)));
  for (const auto& f : corpus) {
    DeterministicFan d = deterministic_refinement(f);
    EXPECT_TRUE(d.fan.is_regular());
    EXPECT_TRUE(d.fan.refines(f.fan()) || d.fan.refines(regularize_fan(f.fan())));
    EXPECT_EQ(d.map, f);
    for (std::size_t j = 0; j < d.fan.size(); ++j) {
      OrbitStatus st = ray_orbit_status(f, d.fan, j);
      ASSERT_TRUE(st.is_cycle());
      EXPECT_LE(st.prefix.size(), 2 * d.fan.size());
    }
    ASSERT_EQ(d.split_counts.size(), d.passes + 1);
    for (std::size_t i = 1; i < d.split_counts.size(); ++i) EXPECT_LT(d.split_counts[i], d.split_counts[i - 1]);
  }
}

TEST(DeterministicRefinement, PassCapIsEnforced) {
  PLAutomorphism f = linear(0, -1, 1, 1);
  EXPECT_THROW(deterministic_refinement(f, 0), InternalError);
  ::setenv("FANROT_MAX_PASSES", "0", 1);
  EXPECT_EQ(max_refinement_passes(7), 0u);
  EXPECT_THROW(deterministic_refinement(f), InternalError);
  ::unsetenv("FANROT_MAX_PASSES");
  EXPECT_EQ(max_refinement_passes(7), 80u);
  EXPECT_NO_THROW(deterministic_refinement(f));
}

// When F#c and G#(F#c) are defined, (G∘F)#c is defined and lies in G#F#c;
// for sectors the two agree.
TEST(SharpImage, Functoriality) {
  for (std::uint64_t s = 1; s <= 30; ++s) {
    PLAutomorphism f = random_element(900 + s, 3);
    PLAutomorphism g = random_element(950 + s, 3);
    PLAutomorphism gf = compose(g, f);
    std::vector<Ray> rays = f.fan().rays();
    for (const auto& r : g.fan().rays()) rays.push_back(r);
    for (const auto& r : gf.fan().rays()) rays.push_back(r);
    Fan fan = regularize_fan(Fan::from_ray_set(rays));
    for (std::size_t j = 0; j < fan.size(); ++j) {
      for (ConeRef c : {ConeRef::ray(j), ConeRef::sector(j)}) {
        auto fc = sharp_image(f, fan, c);
        if (!fc) continue;
        auto gfc = sharp_image(g, fan, *fc);
        if (!gfc) continue;
        auto direct = sharp_image(gf, fan, c);
        ASSERT_TRUE(direct.has_value());
        if (c.is_sector()) {
          EXPECT_EQ(*direct, *gfc);
        } else if (direct->is_ray() && gfc->is_sector()) {
          EXPECT_TRUE(direct->index == gfc->index || direct->index == fan.next(gfc->index));
        } else {
          EXPECT_EQ(*direct, *gfc);
        }
      }
    }
  }
}
