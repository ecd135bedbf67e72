#pragma once

// The approximate map F#: a cone goes to the smallest cone of the target fan
// containing its image. Orbit tracing, the decomposition of an element into
// simple maps, and the refinement that makes every ray's F#-orbit defined.

#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fanrot/errors.hpp"
#include "fanrot/lattice.hpp"
#include "fanrot/pl_map.hpp"
#include "fanrot/refinement.hpp"

namespace fanrot {

/// F# of one cone. `f` must already be expressed on the source fan
/// (f.fan() is the source); `target` is the fan images are measured against.
inline std::optional<ConeRef> sharp_image_on(const PLAutomorphism& f, const Fan& target, ConeRef c) {
  const Fan& source = f.fan();
  switch (c.kind) {
    case ConeRef::Kind::origin:
      return ConeRef::origin();
    case ConeRef::Kind::ray:
      return target.locate(f.matrix(c.index) * source.ray(c.index).generator());
    case ConeRef::Kind::sector: {
      const UnimodularMatrix& m = f.matrix(c.index);
      Sector s = source.sector(c.index);
      Sector image{Ray::through(m * s.lo.generator()), Ray::through(m * s.hi.generator())};
      return target.smallest_containing(image);
    }
  }
  return std::nullopt;
}

inline std::optional<ConeRef> sharp_image(const PLAutomorphism& f, const Fan& source, const Fan& target, ConeRef c) {
  return sharp_image_on(f.on_fan(source), target, c);
}

/// F# : fan -> fan. Throws InvalidError when `fan` is not compatible with `f`.
inline std::optional<ConeRef> sharp_image(const PLAutomorphism& f, const Fan& fan, ConeRef c) {
  return sharp_image(f, fan, fan, c);
}

struct OrbitStatus {
  struct Cycle {
    std::size_t entry;
    std::size_t period;
    friend bool operator==(const Cycle&, const Cycle&) = default;
  };
  struct Undefined {
    std::size_t step;
    friend bool operator==(const Undefined&, const Undefined&) = default;
  };

  std::vector<ConeRef> prefix;
  std::variant<Cycle, Undefined> outcome;

  bool is_cycle() const { return std::holds_alternative<Cycle>(outcome); }
  const Cycle& cycle() const { return std::get<Cycle>(outcome); }
};

/// F#-orbit of `start`, stopped at the first repeated cone or the first
/// undefined image. `f` is expressed on `f.fan()`, which is also the target.
inline OrbitStatus cone_orbit_on(const PLAutomorphism& f, ConeRef start) {
  OrbitStatus status{{start}, OrbitStatus::Undefined{0}};
  std::map<ConeRef, std::size_t> seen{{start, 0}};
  ConeRef current = start;
  for (;;) {
    auto next = sharp_image_on(f, f.fan(), current);
    if (!next) {
      status.outcome = OrbitStatus::Undefined{status.prefix.size()};
      return status;
    }
    if (auto it = seen.find(*next); it != seen.end()) {
      status.outcome = OrbitStatus::Cycle{it->second, status.prefix.size() - it->second};
      return status;
    }
    seen.emplace(*next, status.prefix.size());
    status.prefix.push_back(*next);
    current = *next;
  }
}

inline OrbitStatus ray_orbit_status(const PLAutomorphism& f, const Fan& fan, std::size_t ray_index) {
  return cone_orbit_on(f.on_fan(fan), ConeRef::ray(ray_index));
}

enum class StepKind { isomorphism, split, merge };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::isomorphism: return "isomorphism";
    case StepKind::split: return "split";
    case StepKind::merge: return "merge";
  }
  return "?";
}

/// One factor f_j : source_fan -> target_fan of a decomposition.
///   isomorphism: f_j(source) == target
///   split:       target is a simple split of f_j(source)
///   merge:       target is a simple merge of f_j(source)
struct SimpleMapStep {
  StepKind kind;
  PLAutomorphism map;
  Fan source_fan;
  Fan target_fan;
};

/// How `map` carries `source` onto `target`, together with the ray of the
/// image fan that is missing from `target` (merge) or the target ray missing
/// from the image (split). Nothing if the map is not simple.
struct StepShape {
  StepKind kind;
  std::optional<Ray> odd_ray;
};

inline std::optional<StepShape> classify_step(const PLAutomorphism& map, const Fan& source, const Fan& target) {
  Fan image = map.on_fan(source).image_fan();
  if (image == target) return StepShape{StepKind::isomorphism, std::nullopt};
  if (image.size() == target.size() + 1) {
    for (std::size_t j = 0; j < image.size(); ++j) {
      if (target.contains_ray(image.ray(j))) continue;
      try {
        if (simple_merge(image, j) == target) return StepShape{StepKind::merge, image.ray(j)};
      } catch (const InvalidError&) {
      }
      return std::nullopt;
    }
  }
  if (image.size() + 1 == target.size()) {
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (image.contains_ray(target.ray(j))) continue;
      try {
        if (simple_merge(target, j) == image) return StepShape{StepKind::split, target.ray(j)};
      } catch (const InvalidError&) {
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

/// F = f_{n-1} o ... o f_0 with every f_j simple and fans returning to F's fan:
/// f_0 = F onto F(fan), identity splits up to the common refinement, then
/// identity merges back down to F's fan.
inline std::vector<SimpleMapStep> decompose_simple(const PLAutomorphism& f) {
  const Fan& base = f.fan();
  if (!base.is_regular()) throw InvalidError("decomposition needs a regular compatible fan");
  Fan image = f.image_fan();
  const PLAutomorphism id = PLAutomorphism::identity();

  std::vector<SimpleMapStep> steps;
  steps.push_back({StepKind::isomorphism, f, base, image});
  if (image == base) return steps;

  Fan finest = common_refinement(base, image);
  Fan current = image;
  for (const auto& split : split_sequence(image, finest)) {
    Fan next = simple_split(current, split.sector_index);
    steps.push_back({StepKind::split, id, current, next});
    current = std::move(next);
  }
  while (current.size() > base.size()) {
    bool merged = false;
    for (std::size_t j = 0; j < current.size() && !merged; ++j) {
      if (base.contains_ray(current.ray(j))) continue;
      std::optional<Fan> next;
      try {
        next = simple_merge(current, j);
      } catch (const InvalidError&) {
        continue;
      }
      steps.push_back({StepKind::merge, id, current, *next});
      current = std::move(*next);
      merged = true;
    }
    if (!merged) throw InternalError("regular refinement has no mergeable ray");
  }
  if (current != base) throw InternalError("merges did not return to the base fan");
  return steps;
}

struct DeterministicFan {
  Fan fan;
  PLAutomorphism map;                     // the element expressed on `fan`
  std::vector<std::size_t> split_counts;  // split steps in the decomposition, before each pass and at the end
  std::size_t passes = 0;
};

/// Pass cap: FANROT_MAX_PASSES if set, else 10 * (initial split count + 1).
inline std::size_t max_refinement_passes(std::size_t initial_splits) {
  if (const char* env = std::getenv("FANROT_MAX_PASSES"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return static_cast<std::size_t>(v);
  }
  return 10 * (initial_splits + 1);
}

namespace detail {

struct DecompositionState {
  std::vector<PLAutomorphism> maps;  // f_j, each compatible with fans[j]
  std::vector<Fan> fans;             // fans[j] is the source of f_j; the target is fans[j+1 mod n]

  std::size_t n() const { return fans.size(); }
  const Fan& target(std::size_t j) const { return fans[(j + 1) % n()]; }

  std::vector<StepShape> shapes() const {
    std::vector<StepShape> out;
    out.reserve(n());
    for (std::size_t j = 0; j < n(); ++j) {
      auto shape = classify_step(maps[j], fans[j], target(j));
      if (!shape) throw InternalError("decomposition step " + std::to_string(j) + " is no longer simple");
      out.push_back(*shape);
    }
    return out;
  }
};

struct ChainLink {
  std::size_t stage;
  Sector sector;
};

// Follows sector chains from every merge ray in lock step and returns the
// first chain (fewest steps, then lowest stage) whose next image straddles a
// ray. Chains that revisit a (stage, sector) state are periodic and dropped.
inline std::optional<std::vector<ChainLink>> shortest_undefined_chain(const DecompositionState& st,
                                                                      const std::vector<StepShape>& shapes) {
  struct Walker {
    std::vector<ChainLink> links;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::size_t stage;
    std::size_t sector;
    bool alive = true;
    bool isomorphic = true;
  };
  std::vector<Walker> walkers;
  for (std::size_t j = 0; j < st.n(); ++j) {
    if (shapes[j].kind != StepKind::merge) continue;
    // The odd image ray of a merge is the image of the source's extra ray.
    const Ray& image_ray = *shapes[j].odd_ray;
    ConeRef c = st.target(j).locate(image_ray.generator());
    if (!c.is_sector()) throw InternalError("merge ray does not land inside a sector");
    Walker w;
    w.stage = (j + 1) % st.n();
    w.sector = c.index;
    w.seen.emplace(w.stage, w.sector);
    w.links.push_back({w.stage, st.fans[w.stage].sector(w.sector)});
    walkers.push_back(std::move(w));
  }
  for (bool any_alive = !walkers.empty(); any_alive;) {
    any_alive = false;
    for (auto& w : walkers) {
      if (!w.alive) continue;
      const Sector& s = w.links.back().sector;
      const UnimodularMatrix& m = st.maps[w.stage].matrix_at(s.mediant());
      Sector image{Ray::through(m * s.lo.generator()), Ray::through(m * s.hi.generator())};
      const Fan& target = st.target(w.stage);
      auto next = target.smallest_containing(image);
      if (!next) {
        if (!w.isomorphic) throw InternalError("shortest chain passes through a non-isomorphic step");
        return std::move(w.links);
      }
      if (target.sector(next->index) != image) w.isomorphic = false;
      w.stage = (w.stage + 1) % st.n();
      w.sector = next->index;
      if (!w.seen.emplace(w.stage, w.sector).second) {
        w.alive = false;
        continue;
      }
      w.links.push_back({w.stage, target.sector(next->index)});
      any_alive = true;
    }
  }
  return std::nullopt;
}

inline std::size_t count_splits(const std::vector<StepShape>& shapes) {
  std::size_t n = 0;
  for (const auto& s : shapes) n += s.kind == StepKind::split ? 1 : 0;
  return n;
}

}  // namespace detail

/// A regular refinement of f's fan, compatible with f, on which every ray has
/// a periodic F#-orbit.
///
/// Works on the periodic decomposition f_{j mod n}. Each pass takes the
/// shortest chain ray -> sector -> ... -> sector whose last image straddles a
/// ray, and inserts the transported mediant into every sector of the chain.
/// That turns the merge at the chain's start and the split at its end into
/// isomorphisms and leaves every other step's kind alone, so the number of
/// split steps drops by one per pass.
inline DeterministicFan deterministic_refinement(const PLAutomorphism& f,
                                                 std::optional<std::size_t> max_passes = std::nullopt) {
  Fan base = regularize_fan(f.fan());
  PLAutomorphism on_base = f.on_fan(base);
  auto steps = decompose_simple(on_base);

  detail::DecompositionState st;
  for (auto& step : steps) {
    st.maps.push_back(std::move(step.map));
    st.fans.push_back(std::move(step.source_fan));
  }

  DeterministicFan result{base, on_base, {}, 0};
  auto shapes = st.shapes();
  result.split_counts.push_back(detail::count_splits(shapes));
  const std::size_t cap = max_passes.value_or(max_refinement_passes(result.split_counts.front()));

  while (auto chain = detail::shortest_undefined_chain(st, shapes)) {
    if (result.passes == cap) {
      throw InternalError("deterministic refinement exceeded " + std::to_string(cap) + " passes");
    }
    ++result.passes;
    for (const auto& link : *chain) {
      st.fans[link.stage] = st.fans[link.stage].with_ray(Ray::through(link.sector.mediant()));
    }
    shapes = st.shapes();
    result.split_counts.push_back(detail::count_splits(shapes));
  }

  result.fan = st.fans[0];
  result.map = f.on_fan(result.fan);
  if (!result.fan.is_regular()) throw InternalError("deterministic fan is not regular");
  for (std::size_t j = 0; j < result.fan.size(); ++j) {
    if (!cone_orbit_on(result.map, ConeRef::ray(j)).is_cycle()) {
      throw InternalError("ray " + to_string(result.fan.ray(j).generator()) + " is not deterministic");
    }
  }
  return result;
}

}  // namespace fanrot
