#pragma once

// Rays, sectors and complete fans in Z^2. Every predicate here is decided by
// exact integer cross/dot products; nothing touches floating point.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fanrot/errors.hpp"
#include "fanrot/integer.hpp"

namespace fanrot {

struct IntVector {
  Int x;
  Int y;

  bool is_zero() const { return x == 0 && y == 0; }

  friend bool operator==(const IntVector&, const IntVector&) = default;
  friend IntVector operator+(const IntVector& a, const IntVector& b) { return {a.x + b.x, a.y + b.y}; }
  friend IntVector operator-(const IntVector& a, const IntVector& b) { return {a.x - b.x, a.y - b.y}; }
  friend IntVector operator-(const IntVector& a) { return {-a.x, -a.y}; }
  friend IntVector operator*(const Int& k, const IntVector& a) { return {k * a.x, k * a.y}; }
};

inline Int cross(const IntVector& a, const IntVector& b) { return a.x * b.y - a.y * b.x; }
inline Int dot(const IntVector& a, const IntVector& b) { return a.x * b.x + a.y * b.y; }

/// True when `a` and `b` are positive multiples of each other.
inline bool same_direction(const IntVector& a, const IntVector& b) {
  return cross(a, b) == 0 && dot(a, b) > 0;
}

inline std::ostream& operator<<(std::ostream& os, const IntVector& v) {
  return os << '(' << v.x << ',' << v.y << ')';
}

inline std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

/// A rational ray R+ v, stored by its primitive generator.
class Ray {
 public:
  /// The ray through `v`; the generator is `v / gcd(|x|, |y|)`.
  static Ray through(const IntVector& v) {
    if (v.is_zero()) throw InvalidError("zero vector has no ray");
    Int g = gcd(v.x, v.y);
    return Ray(IntVector{v.x / g, v.y / g});
  }

  const IntVector& generator() const { return g_; }
  const Int& x() const { return g_.x; }
  const Int& y() const { return g_.y; }

  friend bool operator==(const Ray&, const Ray&) = default;

 private:
  explicit Ray(IntVector g) : g_(std::move(g)) {}
  IntVector g_;
};

inline Ray primitive_generator(const IntVector& v) { return Ray::through(v); }

inline std::ostream& operator<<(std::ostream& os, const Ray& r) { return os << r.generator(); }

namespace detail {

// 0: along cut, 1: open left half-plane, 2: opposite to cut, 3: open right half-plane.
inline int half_turn_class(const IntVector& v, const IntVector& cut) {
  int c = sign(cross(cut, v));
  if (c > 0) return 1;
  if (c < 0) return 3;
  return dot(cut, v) > 0 ? 0 : 2;
}

}  // namespace detail

/// Order by counterclockwise angle measured from `cut`; `cut` itself is minimal.
/// Vectors pointing the same way compare equal.
inline std::strong_ordering ccw_compare(const IntVector& a, const IntVector& b, const IntVector& cut) {
  int ha = detail::half_turn_class(a, cut);
  int hb = detail::half_turn_class(b, cut);
  if (ha != hb) return ha <=> hb;
  if (ha == 0 || ha == 2) return std::strong_ordering::equal;
  return 0 <=> sign(cross(a, b));
}

inline std::strong_ordering ccw_compare(const Ray& a, const Ray& b, const Ray& cut) {
  return ccw_compare(a.generator(), b.generator(), cut.generator());
}

inline const IntVector& positive_x_axis() {
  static const IntVector e1{1, 0};
  return e1;
}

/// A two-dimensional rational cone spanned counterclockwise by `lo` then `hi`.
struct Sector {
  Ray lo;
  Ray hi;

  static Sector make(const Ray& lo, const Ray& hi) {
    if (cross(lo.generator(), hi.generator()) <= 0) {
      throw InvalidError("sector facets " + to_string(lo.generator()) + ", " + to_string(hi.generator()) +
                         " are not counterclockwise within a half-turn");
    }
    return Sector{lo, hi};
  }

  Int determinant() const { return cross(lo.generator(), hi.generator()); }
  bool is_regular() const { return determinant() == 1; }
  IntVector mediant() const { return lo.generator() + hi.generator(); }

  /// Closed-cone membership.
  bool contains(const IntVector& v) const {
    return cross(lo.generator(), v) >= 0 && cross(v, hi.generator()) >= 0;
  }
  bool contains_in_interior(const IntVector& v) const {
    return cross(lo.generator(), v) > 0 && cross(v, hi.generator()) > 0;
  }

  friend bool operator==(const Sector&, const Sector&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Sector& s) {
  return os << '<' << s.lo << ',' << s.hi << '>';
}

/// Reference to a cone of a particular fan.
struct ConeRef {
  enum class Kind { origin, ray, sector };
  Kind kind = Kind::origin;
  std::size_t index = 0;

  static ConeRef origin() { return {Kind::origin, 0}; }
  static ConeRef ray(std::size_t i) { return {Kind::ray, i}; }
  static ConeRef sector(std::size_t i) { return {Kind::sector, i}; }

  bool is_ray() const { return kind == Kind::ray; }
  bool is_sector() const { return kind == Kind::sector; }

  friend bool operator==(const ConeRef&, const ConeRef&) = default;
  friend auto operator<=>(const ConeRef&, const ConeRef&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const ConeRef& c) {
  switch (c.kind) {
    case ConeRef::Kind::origin: return os << "origin";
    case ConeRef::Kind::ray: return os << "ray#" << c.index;
    case ConeRef::Kind::sector: return os << "sector#" << c.index;
  }
  return os;
}

/// A complete fan. Rays are kept in counterclockwise order starting from the
/// first ray at or after the positive x-axis, so equal fans are equal values.
/// Sector j is bounded by ray j and ray j+1 (cyclically).
class Fan {
 public:
  /// Validates a counterclockwise cyclic ray sequence. Returns the canonical fan
  /// and the offset such that canonical ray j is input ray (j + offset) mod d.
  static std::pair<Fan, std::size_t> validate_with_offset(std::span<const IntVector> input) {
    const std::size_t d = input.size();
    if (d < 3) throw InvalidError("a fan needs at least 3 rays, got " + std::to_string(d));
    std::vector<Ray> rays;
    rays.reserve(d);
    for (const auto& v : input) rays.push_back(Ray::through(v));
    for (std::size_t j = 0; j < d; ++j) {
      const Ray& a = rays[j];
      const Ray& b = rays[(j + 1) % d];
      if (cross(a.generator(), b.generator()) <= 0) {
        throw InvalidError("consecutive rays " + to_string(a.generator()) + " and " + to_string(b.generator()) +
                           " do not turn counterclockwise by less than a half-turn");
      }
    }
    for (std::size_t j = 1; j + 1 < d; ++j) {
      auto order = ccw_compare(rays[j], rays[j + 1], rays[0]);
      if (order >= 0) {
        for (std::size_t k = 0; k < d; ++k) {
          for (std::size_t l = k + 1; l < d; ++l) {
            if (rays[k] == rays[l]) throw InvalidError("duplicate ray " + to_string(rays[k].generator()));
          }
        }
        throw InvalidError("rays wind around the origin more than once");
      }
    }
    std::size_t offset = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (ccw_compare(rays[j].generator(), rays[offset].generator(), positive_x_axis()) < 0) offset = j;
    }
    std::rotate(rays.begin(), rays.begin() + static_cast<std::ptrdiff_t>(offset), rays.end());
    return {Fan(std::move(rays)), offset};
  }

  static Fan validate(std::span<const IntVector> input) { return validate_with_offset(input).first; }

  /// Builds the fan on an unordered set of rays (duplicates allowed).
  static Fan from_ray_set(std::vector<Ray> rays) {
    std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) {
      return ccw_compare(a.generator(), b.generator(), positive_x_axis()) < 0;
    });
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    if (rays.size() < 3) throw InvalidError("a fan needs at least 3 distinct rays");
    for (std::size_t j = 0; j < rays.size(); ++j) {
      if (cross(rays[j].generator(), rays[(j + 1) % rays.size()].generator()) <= 0) {
        throw InvalidError("ray set leaves a gap of at least a half-turn after " + to_string(rays[j].generator()));
      }
    }
    return Fan(std::move(rays));
  }

  static const Fan& quadrants() {
    static const Fan q = from_ray_set({Ray::through({1, 0}), Ray::through({0, 1}), Ray::through({-1, 0}),
                                        Ray::through({0, -1})});
    return q;
  }

  std::size_t size() const { return rays_.size(); }
  const std::vector<Ray>& rays() const { return rays_; }
  const Ray& ray(std::size_t j) const { return rays_[j]; }
  std::size_t next(std::size_t j) const { return j + 1 == rays_.size() ? 0 : j + 1; }
  std::size_t prev(std::size_t j) const { return j == 0 ? rays_.size() - 1 : j - 1; }
  Sector sector(std::size_t j) const { return Sector{rays_[j], rays_[next(j)]}; }

  bool is_regular() const {
    for (std::size_t j = 0; j < size(); ++j) {
      if (!sector(j).is_regular()) return false;
    }
    return true;
  }

  /// Index s such that `v` lies in the half-open cone [ray s, ray s+1).
  std::size_t sector_index_at(const IntVector& v) const {
    auto it = std::upper_bound(rays_.begin(), rays_.end(), v, [](const IntVector& p, const Ray& r) {
      return ccw_compare(p, r.generator(), positive_x_axis()) < 0;
    });
    std::size_t idx = static_cast<std::size_t>(it - rays_.begin());
    return idx == 0 ? size() - 1 : idx - 1;
  }

  std::optional<std::size_t> find(const Ray& r) const {
    std::size_t s = sector_index_at(r.generator());
    if (rays_[s] == r) return s;
    return std::nullopt;
  }

  bool contains_ray(const Ray& r) const { return find(r).has_value(); }

  /// The cone containing a non-zero vector: an equal ray, else the open sector.
  ConeRef locate(const IntVector& v) const {
    if (v.is_zero()) return ConeRef::origin();
    std::size_t s = sector_index_at(v);
    if (same_direction(rays_[s].generator(), v)) return ConeRef::ray(s);
    return ConeRef::sector(s);
  }

  ConeRef smallest_containing(const Ray& r) const { return locate(r.generator()); }

  /// The fan sector containing `c`, or nothing if `c` straddles a ray.
  std::optional<ConeRef> smallest_containing(const Sector& c) const {
    std::size_t s = sector_index_at(c.lo.generator());
    if (sector(s).contains(c.hi.generator())) return ConeRef::sector(s);
    return std::nullopt;
  }

  /// True when every ray of `coarse` is a ray of this fan.
  bool refines(const Fan& coarse) const {
    return std::all_of(coarse.rays_.begin(), coarse.rays_.end(), [this](const Ray& r) { return contains_ray(r); });
  }

  Fan with_ray(const Ray& r) const {
    std::size_t s = sector_index_at(r.generator());
    if (rays_[s] == r) throw InvalidError("ray " + to_string(r.generator()) + " already in fan");
    std::vector<Ray> rays = rays_;
    std::size_t pos = s + 1;
    // A ray before rays[0] belongs at the front, not after the last ray.
    if (ccw_compare(r.generator(), rays_[0].generator(), positive_x_axis()) < 0) pos = 0;
    rays.insert(rays.begin() + static_cast<std::ptrdiff_t>(pos), r);
    return Fan(std::move(rays));
  }

  Fan without_ray(std::size_t j) const {
    if (size() <= 3) throw InvalidError("cannot remove a ray from a 3-ray fan");
    if (cross(rays_[prev(j)].generator(), rays_[next(j)].generator()) <= 0) {
      throw InvalidError("removing ray " + to_string(rays_[j].generator()) + " leaves a gap of a half-turn or more");
    }
    std::vector<Ray> rays = rays_;
    rays.erase(rays.begin() + static_cast<std::ptrdiff_t>(j));
    return Fan(std::move(rays));
  }

  std::vector<IntVector> generators() const {
    std::vector<IntVector> out;
    out.reserve(size());
    for (const auto& r : rays_) out.push_back(r.generator());
    return out;
  }

  friend bool operator==(const Fan&, const Fan&) = default;

 private:
  explicit Fan(std::vector<Ray> rays) : rays_(std::move(rays)) {}
  std::vector<Ray> rays_;
};

inline Fan validate_fan(std::span<const IntVector> rays) { return Fan::validate(rays); }

inline std::ostream& operator<<(std::ostream& os, const Fan& f) {
  os << '{';
  for (std::size_t j = 0; j < f.size(); ++j) os << (j ? "," : "") << f.ray(j);
  return os << '}';
}

inline std::string to_string(const Fan& f) {
  std::ostringstream os;
  os << f;
  return os.str();
}

}  // namespace fanrot
