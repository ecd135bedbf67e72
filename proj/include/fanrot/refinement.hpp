#pragma once

// Regular refinements of fans, simple splits and merges, and the split
// sequence that carries a regular fan onto a regular refinement of it.

#include <cstddef>
#include <utility>
#include <vector>

#include "fanrot/errors.hpp"
#include "fanrot/lattice.hpp"

namespace fanrot {

/// One simple split: insert `new_ray` (the mediant) into sector `sector_index`
/// of the fan as it stands before the split.
struct SplitStep {
  std::size_t sector_index;
  Ray new_ray;

  friend bool operator==(const SplitStep&, const SplitStep&) = default;
};

/// Interior rays, counterclockwise, that cut `s` into regular sectors.
///
/// With facets u1, u2 and D = cross(u1, u2) >= 2, write u2 = c*u1 + D*h where
/// cross(u1, h) = 1. The next ray is w = (floor(c/D) + 1)*u1 + h, the lattice
/// point with cross(u1, w) = 1 nearest to u1 inside s; then cross(w, u2) =
/// D - (c mod D) < D and we continue on <w, u2>.
inline std::vector<Ray> regularize_sector(const Sector& s) {
  std::vector<Ray> out;
  IntVector u1 = s.lo.generator();
  const IntVector& u2 = s.hi.generator();
  for (Int det = cross(u1, u2); det > 1; det = cross(u1, u2)) {
    Bezout bz = extended_gcd(u1.x, u1.y);
    IntVector h{-bz.t, bz.s};
    Int c = cross(u2, h);
    Int m = floor_div(c, det) + 1;
    IntVector w = m * u1 + h;
    out.push_back(Ray::through(w));
    u1 = w;
  }
  return out;
}

inline Fan regularize_fan(const Fan& fan) {
  std::vector<Ray> rays;
  rays.reserve(fan.size());
  for (std::size_t j = 0; j < fan.size(); ++j) {
    rays.push_back(fan.ray(j));
    for (auto& r : regularize_sector(fan.sector(j))) rays.push_back(std::move(r));
  }
  if (rays.size() == fan.size()) return fan;
  return Fan::from_ray_set(std::move(rays));
}

inline Fan simple_split(const Fan& fan, std::size_t sector_index) {
  Sector s = fan.sector(sector_index);
  if (!s.is_regular()) {
    throw InvalidError("simple split needs a regular sector, " + to_string(s.lo.generator()) + "," +
                       to_string(s.hi.generator()) + " has determinant " + to_string(s.determinant()));
  }
  return fan.with_ray(Ray::through(s.mediant()));
}

inline Fan simple_merge(const Fan& fan, std::size_t ray_index) {
  const IntVector& left = fan.ray(fan.prev(ray_index)).generator();
  const IntVector& mid = fan.ray(ray_index).generator();
  const IntVector& right = fan.ray(fan.next(ray_index)).generator();
  if (left + right != mid || cross(left, mid) != 1 || cross(mid, right) != 1) {
    throw InvalidError("ray " + to_string(mid) + " is not mergeable: it is not the mediant of " + to_string(left) +
                       " and " + to_string(right));
  }
  return fan.without_ray(ray_index);
}

/// Splits carrying `coarse` onto `fine`, depth-first and counterclockwise.
/// In a regular sector <u, v> the mediant u+v is a ray of every regular
/// refinement that puts any ray strictly inside <u, v>, so each step is forced.
inline std::vector<SplitStep> split_sequence(const Fan& coarse, const Fan& fine) {
  if (!coarse.is_regular() || !fine.is_regular()) throw InvalidError("split sequence needs regular fans");
  if (!fine.refines(coarse)) throw InvalidError("fine fan does not refine the coarse fan");

  std::vector<SplitStep> steps;
  Fan current = coarse;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    std::vector<std::pair<Ray, Ray>> stack{{coarse.ray(j), coarse.ray(coarse.next(j))}};
    while (!stack.empty()) {
      auto [lo, hi] = std::move(stack.back());
      stack.pop_back();
      std::size_t at = *fine.find(lo);
      if (fine.ray(fine.next(at)) == hi) continue;
      Ray mid = Ray::through(lo.generator() + hi.generator());
      if (!fine.contains_ray(mid)) {
        throw InvalidError("fine fan has rays inside " + to_string(lo.generator()) + "," + to_string(hi.generator()) +
                           " but not their mediant " + to_string(mid.generator()));
      }
      steps.push_back(SplitStep{*current.find(lo), mid});
      current = current.with_ray(mid);
      stack.emplace_back(mid, hi);
      stack.emplace_back(lo, mid);
    }
  }
  if (current != fine) throw InternalError("split sequence replay does not reproduce the fine fan");
  return steps;
}

inline Fan apply_splits(Fan fan, const std::vector<SplitStep>& steps) {
  for (const auto& step : steps) {
    Fan next = simple_split(fan, step.sector_index);
    if (!next.contains_ray(step.new_ray)) throw InvalidError("split step names the wrong mediant");
    fan = std::move(next);
  }
  return fan;
}

/// Regular fan containing every ray of `a` and of `b`.
inline Fan common_refinement(const Fan& a, const Fan& b) {
  std::vector<Ray> rays = a.rays();
  rays.insert(rays.end(), b.rays().begin(), b.rays().end());
  return regularize_fan(Fan::from_ray_set(std::move(rays)));
}

}  // namespace fanrot
