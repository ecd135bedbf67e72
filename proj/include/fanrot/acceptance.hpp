#pragma once

// Acceptance criteria 1-11, runnable from the test suite and `fanrot selftest`.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fanrot/dyadic.hpp"
#include "fanrot/errors.hpp"
#include "fanrot/lattice.hpp"
#include "fanrot/pl_map.hpp"
#include "fanrot/refinement.hpp"
#include "fanrot/rotation.hpp"
#include "fanrot/sharp.hpp"

namespace fanrot::acceptance {

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

struct CorpusElement {
  std::string label;
  PLAutomorphism f;
};

inline PLAutomorphism linear(long long a, long long b, long long c, long long d) {
  return PLAutomorphism::linear(UnimodularMatrix::from_entries(a, b, c, d));
}

inline std::vector<CorpusElement> rotation_corpus() {
  std::vector<CorpusElement> out;
  for (long long q = 3; q <= 12; ++q) {
    for (long long p = 0; p < q; ++p) {
      out.push_back({"rot:" + std::to_string(p) + "/" + std::to_string(q), construct_rotation(p, q)});
    }
  }
  return out;
}

inline std::vector<CorpusElement> torsion_corpus() {
  return {{"linear [[0,-1],[1,0]]", linear(0, -1, 1, 0)},
          {"linear [[0,-1],[1,1]]", linear(0, -1, 1, 1)},
          {"linear [[2,1],[1,1]]", linear(2, 1, 1, 1)},
          {"linear [[1,1],[0,1]]", linear(1, 1, 0, 1)}};
}

/// 200 words of length 1..6 in the rotation generators.
inline std::vector<CorpusElement> random_corpus() {
  std::vector<CorpusElement> out;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::size_t length = 1 + (seed - 1) % 6;
    out.push_back({"random:" + std::to_string(seed) + ":" + std::to_string(length), random_element(seed, length)});
  }
  return out;
}

inline std::vector<CorpusElement> full_corpus() {
  std::vector<CorpusElement> out = rotation_corpus();
  for (auto& e : torsion_corpus()) out.push_back(std::move(e));
  for (auto& e : random_corpus()) out.push_back(std::move(e));
  return out;
}

/// Minkowski's ?(p/q) for 0 <= p/q <= 1 from the continued fraction
/// [0; a1, a2, ...]: ?(x) = 2 * sum (-1)^(k+1) 2^-(a1+...+ak).
inline DyadicRational question_mark(Int p, Int q) {
  DyadicRational sum;
  std::size_t partial = 0;
  int sign = 1;
  // x = p/q, peel off 1/x repeatedly
  while (p != 0) {
    Int a = q / p;
    Int r = q % p;
    partial += static_cast<std::size_t>(a);
    DyadicRational term(2, partial);
    sum = sign > 0 ? sum + term : sum - term;
    sign = -sign;
    q = p;
    p = r;
  }
  return sum;
}

namespace detail {

template <class Body>
CriterionResult timed(int id, std::string name, Body body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {id, std::move(name), pass, std::move(detail), s};
}

inline IntVector random_vector(std::mt19937_64& rng, long long bound) {
  std::uniform_int_distribution<long long> dist(-bound, bound);
  while (true) {
    IntVector v{dist(rng), dist(rng)};
    if (!v.is_zero()) return v;
  }
}

inline Fan random_splits(Fan fan, std::mt19937_64& rng, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) fan = simple_split(fan, rng() % fan.size());
  return fan;
}

// Walks the approximate orbit of ray j for at most 2d steps, one per cone of
// the fan; a cone seen twice closes a cycle, a straddling image ends it.
inline bool ray_orbit_cycles(const PLAutomorphism& f, const Fan& fan, std::size_t j) {
  if (!f.is_compatible(fan)) return false;
  const std::size_t d = fan.size();
  std::vector<bool> seen(2 * d, false);
  bool is_ray = true;
  std::size_t index = j;
  for (std::size_t step = 0; step <= 2 * d; ++step) {
    std::size_t slot = is_ray ? index : d + index;
    if (seen[slot]) return true;
    seen[slot] = true;
    if (is_ray) {
      ConeRef c = fan.locate(f.apply(fan.ray(index).generator()));
      is_ray = c.is_ray();
      index = c.index;
    } else {
      Sector s = fan.sector(index);
      IntVector lo = f.apply(s.lo.generator());
      IntVector hi = f.apply(s.hi.generator());
      std::size_t k = fan.sector_index_at(lo);
      if (!fan.sector(k).contains(hi) || cross(lo, hi) <= 0) return false;
      index = k;
    }
  }
  return false;
}

}  // namespace detail

inline CriterionResult criterion1() {
  return detail::timed(1, "rotation_number(construct_rotation(p,q)) = p/q, 3<=q<=12", [](std::string& d) {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t bad = 0, total = 0;
    for (long long q = 3; q <= 12; ++q) {
      for (long long p = 0; p < q; ++p) {
        ++total;
        if (rotation_number(construct_rotation(p, q)) != RotationNumber::make(p, q)) ++bad;
      }
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    d = std::to_string(total - bad) + "/" + std::to_string(total) + " exact, " + std::to_string(s) + " s (limit 5 s)";
    return bad == 0 && s < 5.0;
  });
}

inline CriterionResult criterion2() {
  return detail::timed(2, "torsion and infinite-order linear examples", [](std::string& d) {
    struct Case {
      PLAutomorphism f;
      RotationNumber rho;
      std::optional<std::size_t> order;
    };
    std::vector<Case> cases{{linear(0, -1, 1, 0), RotationNumber::make(1, 4), 4},
                            {linear(0, -1, 1, 1), RotationNumber::make(1, 6), 6},
                            {linear(2, 1, 1, 1), RotationNumber::make(0, 1), std::nullopt},
                            {linear(1, 1, 0, 1), RotationNumber::make(0, 1), std::nullopt}};
    std::ostringstream os;
    bool ok = true;
    for (const auto& c : cases) {
      RotationReport rep = rotation_report(c.f);
      auto order = finite_order(c.f, rep, 64);
      ok = ok && rep.rho == c.rho && order == c.order;
      if (os.tellp() > 0) os << ", ";
      os << "rho " << rep.rho << " order " << (order ? std::to_string(*order) : "infinite");
    }
    d = os.str();
    return ok;
  });
}

inline CriterionResult criterion3() {
  return detail::timed(3, "rotation numbers of 200 random words are reduced rationals", [](std::string& d) {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t ok = 0;
    for (const auto& e : random_corpus()) {
      RotationNumber r = rotation_number(e.f);
      if (gcd(r.numerator(), r.denominator()) == 1 && r.numerator() >= 0 && r.numerator() < r.denominator()) ++ok;
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    d = std::to_string(ok) + "/200, " + std::to_string(s) + " s (limit 60 s)";
    return ok == 200 && s < 60.0;
  });
}

inline CriterionResult criterion4(const std::vector<CorpusElement>& corpus) {
  return detail::timed(4, "exact rotation number within 2e-5 of the 1e5-step estimate", [&](std::string& d) {
    double worst = 0;
    std::string worst_label;
    for (const auto& e : corpus) {
      double dist = circle_distance(rotation_number(e.f).to_double(), estimate_rotation(e.f, 100000, 0.0));
      if (dist > worst) {
        worst = dist;
        worst_label = e.label;
      }
    }
    std::ostringstream os;
    os << corpus.size() << " elements, worst " << worst << (worst_label.empty() ? "" : " at " + worst_label);
    d = os.str();
    return worst <= 2e-5 + 1e-12;
  });
}

inline CriterionResult criterion5() {
  return detail::timed(5, "rho(F^k) = k rho(F), conjugation and inverse invariance", [](std::string& d) {
    std::size_t failures = 0;
    for (std::uint64_t i = 1; i <= 50; ++i) {
      PLAutomorphism f = random_element(10'000 + i, 1 + i % 6);
      PLAutomorphism g = random_element(20'000 + i, 1 + (i * 7) % 6);
      RotationNumber rho = rotation_number(f);
      PLAutomorphism fk = PLAutomorphism::identity();
      for (long long k = 1; k <= 5; ++k) {
        fk = compose(f, fk);
        if (rotation_number(fk) != Int(k) * rho) ++failures;
      }
      if (rotation_number(compose(g, compose(f, inverse(g)))) != rho) ++failures;
      if (rotation_number(inverse(f)) != -rho) ++failures;
    }
    d = std::to_string(350 - failures) + "/350 identities hold";
    return failures == 0;
  });
}

inline CriterionResult criterion6(const std::vector<CorpusElement>& corpus) {
  return detail::timed(6, "decomposition steps compose to F and have their stated kinds", [&](std::string& d) {
    std::size_t bad = 0, steps = 0;
    for (const auto& e : corpus) {
      auto trace = decompose_simple(e.f);
      PLAutomorphism product = PLAutomorphism::identity();
      bool kinds_ok = trace.front().source_fan == e.f.fan() && trace.back().target_fan == e.f.fan();
      for (const auto& s : trace) {
        auto shape = classify_step(s.map, s.source_fan, s.target_fan);
        kinds_ok = kinds_ok && shape && shape->kind == s.kind;
        product = compose(s.map, product);
      }
      steps += trace.size();
      if (!kinds_ok || !(product == e.f)) ++bad;
    }
    d = std::to_string(corpus.size() - bad) + "/" + std::to_string(corpus.size()) + " elements, " +
        std::to_string(steps) + " steps";
    return bad == 0;
  });
}

inline CriterionResult criterion7(const std::vector<CorpusElement>& corpus) {
  return detail::timed(7, "deterministic fan: every ray orbit cycles, split count decreases", [&](std::string& d) {
    std::size_t bad = 0, max_rays = 0, max_passes = 0;
    for (const auto& e : corpus) {
      DeterministicFan det = deterministic_refinement(e.f);
      bool ok = det.fan.is_regular() && det.fan.refines(e.f.fan()) && det.map == e.f;
      for (std::size_t j = 0; ok && j < det.fan.size(); ++j) ok = detail::ray_orbit_cycles(e.f, det.fan, j);
      for (std::size_t i = 1; ok && i < det.split_counts.size(); ++i) ok = det.split_counts[i] <= det.split_counts[i - 1];
      if (!ok) ++bad;
      max_rays = std::max(max_rays, det.fan.size());
      max_passes = std::max(max_passes, det.passes);
    }
    d = std::to_string(corpus.size() - bad) + "/" + std::to_string(corpus.size()) + " elements, largest fan " +
        std::to_string(max_rays) + " rays, most passes " + std::to_string(max_passes);
    return bad == 0;
  });
}

inline CriterionResult criterion8() {
  return detail::timed(8, "regularization of 100 random sectors with determinant <= 1000", [](std::string& d) {
    std::mt19937_64 rng(8);
    std::size_t bad = 0, done = 0;
    while (done < 100) {
      IntVector u1 = detail::random_vector(rng, 60);
      IntVector u2 = detail::random_vector(rng, 60);
      Int det = cross(u1, u2);
      if (det < 1 || det > 1000) continue;
      Sector s = Sector::make(Ray::through(u1), Ray::through(u2));
      Int D = s.determinant();
      auto added = regularize_sector(s);
      std::vector<IntVector> chain{s.lo.generator()};
      for (const auto& r : added) chain.push_back(r.generator());
      chain.push_back(s.hi.generator());
      bool ok = Int(added.size()) <= D - 1;
      for (std::size_t i = 0; ok && i + 1 < chain.size(); ++i) ok = cross(chain[i], chain[i + 1]) == 1;
      if (!ok) ++bad;
      ++done;
    }
    d = std::to_string(100 - bad) + "/100 sectors";
    return bad == 0;
  });
}

inline CriterionResult criterion9() {
  return detail::timed(9, "split_sequence replay reproduces the fine fan", [](std::string& d) {
    std::mt19937_64 rng(9);
    std::size_t bad = 0;
    for (int i = 0; i < 100; ++i) {
      Fan base = i % 2 ? Fan::quadrants() : Fan::validate(std::vector<IntVector>{{1, 0}, {0, 1}, {-1, -1}});
      Fan coarse = detail::random_splits(base, rng, rng() % 6);
      Fan fine = detail::random_splits(coarse, rng, 1 + rng() % 12);
      if (apply_splits(coarse, split_sequence(coarse, fine)) != fine) ++bad;
    }
    d = std::to_string(100 - bad) + "/100 pairs";
    return bad == 0;
  });
}

inline CriterionResult criterion10(const std::vector<CorpusElement>& corpus) {
  return detail::timed(10, "dyadic conjugacy, round trips, question-mark oracle", [&](std::string& d) {
    std::mt19937_64 rng(10);
    std::size_t bad_points = 0, bad_trips = 0, bad_qm = 0, qm_checked = 0;
    for (const auto& e : corpus) {
      DyadicPLMap f = to_dyadic(e.f);
      if (!(from_dyadic(f) == e.f) || !(to_dyadic(from_dyadic(f)) == f)) ++bad_trips;
      for (int i = 0; i < 100; ++i) {
        std::size_t k = rng() % 13;
        DyadicRational t(Int(rng() % (std::uint64_t{1} << k)), k);
        if (phi(e.f.apply(phi_inverse(t))) != f.evaluate(t)) ++bad_points;
      }
    }
    // slopes p/q of Stern-Brocot depth <= 5 in [0, 1], on <(1,0),(1,1)>
    Sector sigma{Ray::through({1, 0}), Ray::through({1, 1})};
    std::vector<std::pair<long long, long long>> level{{0, 1}, {1, 1}};
    for (int depth = 1; depth <= 5; ++depth) {
      std::vector<std::pair<long long, long long>> next;
      for (std::size_t i = 0; i + 1 < level.size(); ++i) {
        next.push_back(level[i]);
        next.push_back({level[i].first + level[i + 1].first, level[i].second + level[i + 1].second});
      }
      next.push_back(level.back());
      level = std::move(next);
    }
    for (auto [p, q] : level) {
      ++qm_checked;
      if (phi_forward(sigma, StandardDyadicInterval{0, 0}, Ray::through({q, p})) != question_mark(p, q)) ++bad_qm;
    }
    d = std::to_string(corpus.size() * 100 - bad_points) + "/" + std::to_string(corpus.size() * 100) +
        " points, " + std::to_string(corpus.size() - bad_trips) + "/" + std::to_string(corpus.size()) +
        " round trips, " + std::to_string(qm_checked - bad_qm) + "/" + std::to_string(qm_checked) + " ? values";
    return bad_points == 0 && bad_trips == 0 && bad_qm == 0;
  });
}

inline CriterionResult criterion11() {
  return detail::timed(11, "validation rejects [[4,-3],[3,4]] with a determinant diagnostic", [](std::string& d) {
    std::vector<IntVector> rays{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<std::array<Int, 4>> mats(4, std::array<Int, 4>{4, -3, 3, 4});
    try {
      (void)PLAutomorphism::validate(rays, mats);
      d = "accepted";
      return false;
    } catch (const InvalidError& e) {
      d = e.what();
      return d.find("determinant 25") != std::string::npos;
    }
  });
}

inline std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  out.push_back(criterion1());
  out.push_back(criterion2());
  out.push_back(criterion3());
  const std::vector<CorpusElement> corpus = full_corpus();
  out.push_back(criterion4(corpus));
  out.push_back(criterion5());
  out.push_back(criterion6(corpus));
  out.push_back(criterion7(corpus));
  out.push_back(criterion8());
  out.push_back(criterion9());
  out.push_back(criterion10(corpus));
  out.push_back(criterion11());
  return out;
}

inline std::string format(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " (" << r.detail << ")";
  return os.str();
}

}  // namespace fanrot::acceptance
