#pragma once

// Piecewise linear automorphisms of Z^2: a compatible fan plus one SL(2, Z)
// matrix per sector. These are the elements of Thompson's group T.

#include <array>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fanrot/errors.hpp"
#include "fanrot/lattice.hpp"
#include "fanrot/matrix.hpp"
#include "fanrot/refinement.hpp"

namespace fanrot {

class PLAutomorphism {
 public:
  /// Full validation of user-supplied data. Matrix j acts on the sector from
  /// rays[j] to rays[j+1]. Rejects det != 1, discontinuity on a shared ray,
  /// and image rays that do not form a fan (not a homeomorphism).
  static PLAutomorphism validate(std::span<const IntVector> rays, std::span<const std::array<Int, 4>> matrices) {
    if (rays.size() != matrices.size()) {
      throw InvalidError("expected one matrix per sector: " + std::to_string(rays.size()) + " rays but " +
                         std::to_string(matrices.size()) + " matrices");
    }
    std::vector<UnimodularMatrix> pieces;
    pieces.reserve(matrices.size());
    for (std::size_t j = 0; j < matrices.size(); ++j) {
      try {
        pieces.push_back(UnimodularMatrix::from_entries(matrices[j]));
      } catch (const InvalidError& e) {
        throw InvalidError("matrix " + std::to_string(j) + ": " + e.what());
      }
    }
    auto [fan, offset] = Fan::validate_with_offset(rays);
    std::rotate(pieces.begin(), pieces.begin() + static_cast<std::ptrdiff_t>(offset), pieces.end());
    return assemble(std::move(fan), std::move(pieces));
  }

  /// Checks continuity and the homeomorphism condition for matrices that are
  /// already unimodular, indexed by the sectors of `fan`.
  static PLAutomorphism assemble(Fan fan, std::vector<UnimodularMatrix> pieces) {
    if (fan.size() != pieces.size()) throw InvalidError("expected one matrix per sector");
    std::vector<IntVector> images;
    images.reserve(fan.size());
    for (std::size_t j = 0; j < fan.size(); ++j) {
      const IntVector& v = fan.ray(j).generator();
      IntVector left = pieces[fan.prev(j)] * v;
      IntVector right = pieces[j] * v;
      if (left != right) throw InvalidError("continuity fails on ray " + to_string(v));
      images.push_back(std::move(right));
    }
    try {
      (void)Fan::validate(images);
    } catch (const InvalidError& e) {
      throw InvalidError(std::string("image rays do not form a fan: ") + e.what());
    }
    return PLAutomorphism(std::move(fan), std::move(pieces));
  }

  static PLAutomorphism linear(const UnimodularMatrix& m) {
    return PLAutomorphism(Fan::quadrants(), std::vector<UnimodularMatrix>(4, m));
  }

  static PLAutomorphism identity() { return linear(UnimodularMatrix::identity()); }

  const Fan& fan() const { return fan_; }
  const std::vector<UnimodularMatrix>& matrices() const { return pieces_; }
  const UnimodularMatrix& matrix(std::size_t sector) const { return pieces_[sector]; }

  /// The linear piece in force on the half-open cone containing `v`.
  const UnimodularMatrix& matrix_at(const IntVector& v) const { return pieces_[fan_.sector_index_at(v)]; }

  IntVector apply(const IntVector& v) const {
    if (v.is_zero()) return v;
    return matrix_at(v) * v;
  }

  Ray apply(const Ray& r) const { return Ray::through(matrix_at(r.generator()) * r.generator()); }

  /// Image fan together with the offset k such that the image of source
  /// sector j is image sector (j - k) mod d.
  std::pair<Fan, std::size_t> image_fan_with_offset() const {
    std::vector<IntVector> images;
    images.reserve(fan_.size());
    for (std::size_t j = 0; j < fan_.size(); ++j) images.push_back(pieces_[j] * fan_.ray(j).generator());
    return Fan::validate_with_offset(images);
  }

  Fan image_fan() const { return image_fan_with_offset().first; }

  /// True when no ray at which F actually bends lies strictly inside a sector of `fan`.
  bool is_compatible(const Fan& fan) const {
    for (std::size_t j = 0; j < fan.size(); ++j) {
      if (!piece_on(fan.sector(j))) return false;
    }
    return true;
  }

  /// The same map expressed on a compatible fan.
  PLAutomorphism on_fan(const Fan& fan) const {
    std::vector<UnimodularMatrix> pieces;
    pieces.reserve(fan.size());
    for (std::size_t j = 0; j < fan.size(); ++j) {
      const UnimodularMatrix* m = piece_on(fan.sector(j));
      if (m == nullptr) {
        throw InvalidError("fan is not compatible with the map: it bends inside sector " +
                           to_string(fan.ray(j).generator()) + "," + to_string(fan.ray(fan.next(j)).generator()));
      }
      pieces.push_back(*m);
    }
    return PLAutomorphism(fan, std::move(pieces));
  }

  /// Coarsest presentation: the rays where the matrix changes, or those rays
  /// together with the coordinate axes when they alone do not form a fan.
  PLAutomorphism canonical() const {
    std::vector<Ray> breaks;
    for (std::size_t j = 0; j < fan_.size(); ++j) {
      if (pieces_[fan_.prev(j)] != pieces_[j]) breaks.push_back(fan_.ray(j));
    }
    bool is_fan = breaks.size() >= 3;
    for (std::size_t j = 0; is_fan && j < breaks.size(); ++j) {
      is_fan = cross(breaks[j].generator(), breaks[(j + 1) % breaks.size()].generator()) > 0;
    }
    if (!is_fan) {
      const auto& axes = Fan::quadrants().rays();
      breaks.insert(breaks.end(), axes.begin(), axes.end());
    }
    Fan coarse = Fan::from_ray_set(std::move(breaks));
    if (coarse == fan_) return *this;
    return on_fan(coarse);
  }

  bool is_identity() const {
    for (const auto& m : pieces_) {
      if (!m.is_identity()) return false;
    }
    return true;
  }

  /// Equality as functions on Z^2.
  friend bool operator==(const PLAutomorphism& f, const PLAutomorphism& g) {
    PLAutomorphism cf = f.canonical();
    PLAutomorphism cg = g.canonical();
    return cf.fan_ == cg.fan_ && cf.pieces_ == cg.pieces_;
  }

 private:
  PLAutomorphism(Fan fan, std::vector<UnimodularMatrix> pieces) : fan_(std::move(fan)), pieces_(std::move(pieces)) {}

  // The single matrix in force on all of `s`, or null if the map bends inside it.
  const UnimodularMatrix* piece_on(const Sector& s) const {
    std::size_t k = fan_.sector_index_at(s.lo.generator());
    const UnimodularMatrix* m = &pieces_[k];
    for (std::size_t r = fan_.next(k); s.contains_in_interior(fan_.ray(r).generator()); r = fan_.next(r)) {
      if (pieces_[r] != *m) return nullptr;
    }
    return m;
  }

  Fan fan_;
  std::vector<UnimodularMatrix> pieces_;
};

inline std::ostream& operator<<(std::ostream& os, const PLAutomorphism& f) {
  os << "PL{";
  for (std::size_t j = 0; j < f.fan().size(); ++j) {
    os << (j ? " " : "") << f.fan().sector(j) << "->" << f.matrix(j);
  }
  return os << '}';
}

inline Fan image_fan(const PLAutomorphism& f) { return f.image_fan(); }

inline PLAutomorphism inverse(const PLAutomorphism& f) {
  auto [image, offset] = f.image_fan_with_offset();
  const std::size_t d = image.size();
  std::vector<UnimodularMatrix> pieces;
  pieces.reserve(d);
  for (std::size_t k = 0; k < d; ++k) pieces.push_back(f.matrix((k + offset) % d).inverse());
  return PLAutomorphism::assemble(std::move(image), std::move(pieces)).canonical();
}

/// g after f.
inline PLAutomorphism compose(const PLAutomorphism& g, const PLAutomorphism& f) {
  PLAutomorphism f_inv = inverse(f);
  std::vector<Ray> rays = f.fan().rays();
  for (const auto& r : g.fan().rays()) rays.push_back(f_inv.apply(r));
  Fan fan = Fan::from_ray_set(std::move(rays));
  std::vector<UnimodularMatrix> pieces;
  pieces.reserve(fan.size());
  for (std::size_t j = 0; j < fan.size(); ++j) {
    IntVector inside = fan.sector(j).mediant();
    const UnimodularMatrix& lf = f.matrix_at(inside);
    pieces.push_back(g.matrix_at(lf * inside) * lf);
  }
  return PLAutomorphism::assemble(std::move(fan), std::move(pieces)).canonical();
}

/// f^k for any integer k.
inline PLAutomorphism power(const PLAutomorphism& f, long long k) {
  PLAutomorphism base = k < 0 ? inverse(f) : f;
  PLAutomorphism result = PLAutomorphism::identity();
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) result = compose(base, result);
  return result;
}

/// Regular fan with `sectors` sectors used by construct_rotation: the 3-ray fan
/// {(1,0),(0,1),(-1,-1)}, the quadrant fan, or the quadrant fan split
/// repeatedly at the sector whose mediant has the smallest l1 norm.
inline Fan rotation_fan(std::size_t sectors) {
  if (sectors < 3) throw InvalidError("a rotation fan needs at least 3 sectors");
  if (sectors == 3) return Fan::validate(std::vector<IntVector>{{1, 0}, {0, 1}, {-1, -1}});
  Fan fan = Fan::quadrants();
  while (fan.size() < sectors) {
    std::size_t best = 0;
    Int best_norm = -1;
    for (std::size_t j = 0; j < fan.size(); ++j) {
      IntVector m = fan.sector(j).mediant();
      Int norm = abs_value(m.x) + abs_value(m.y);
      if (best_norm < 0 || norm < best_norm) {
        best = j;
        best_norm = norm;
      }
    }
    fan = simple_split(fan, best);
  }
  return fan;
}

/// The element rotating the sectors of rotation_fan(q) by p places.
inline PLAutomorphism construct_rotation(long long p, long long q) {
  if (q < 3) throw InvalidError("rotation denominator must be at least 3, got " + std::to_string(q));
  if (p < 0 || p >= q) throw InvalidError("rotation numerator must lie in [0, q), got " + std::to_string(p));
  Fan fan = rotation_fan(static_cast<std::size_t>(q));
  const auto n = static_cast<std::size_t>(q);
  std::vector<UnimodularMatrix> pieces;
  pieces.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pieces.push_back(UnimodularMatrix::mapping(fan.sector(i), fan.sector((i + static_cast<std::size_t>(p)) % n)));
  }
  return PLAutomorphism::assemble(std::move(fan), std::move(pieces));
}

/// rot(1,3), rot(1,4), rot(1,5) and their inverses.
inline const std::vector<PLAutomorphism>& random_generators() {
  static const std::vector<PLAutomorphism> gens = [] {
    std::vector<PLAutomorphism> g;
    for (long long q : {3, 4, 5}) {
      g.push_back(construct_rotation(1, q));
      g.push_back(inverse(g.back()));
    }
    return g;
  }();
  return gens;
}

/// Reproducible product of `length` generators drawn by a seeded mt19937_64.
inline PLAutomorphism random_element(std::uint64_t seed, std::size_t length) {
  if (length == 0) throw InvalidError("random element length must be at least 1");
  const auto& gens = random_generators();
  std::mt19937_64 rng(seed);
  PLAutomorphism result = gens[rng() % gens.size()];
  for (std::size_t i = 1; i < length; ++i) result = compose(result, gens[rng() % gens.size()]);
  return result;
}

}  // namespace fanrot
