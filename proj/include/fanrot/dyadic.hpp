#pragma once

// The conjugacy between rays of the plane and the circle [0, 1): regular
// sectors correspond to standard dyadic intervals, mediants to midpoints.
// Elements of T move back and forth between the two presentations exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fanrot/errors.hpp"
#include "fanrot/integer.hpp"
#include "fanrot/lattice.hpp"
#include "fanrot/matrix.hpp"
#include "fanrot/pl_map.hpp"
#include "fanrot/refinement.hpp"

namespace fanrot {

/// mantissa / 2^exponent, with an odd mantissa whenever the exponent is positive.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(Int mantissa, std::size_t exponent) : m_(std::move(mantissa)), e_(exponent) { normalize(); }
  static DyadicRational integer(Int v) { return DyadicRational(std::move(v), 0); }

  /// Accepts "m", "m/2^k" or "m/d" with d a power of two.
  static DyadicRational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
      while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return integer(parse_int(text));
    Int num = parse_int(trim(text.substr(0, slash)));
    std::string_view den = trim(text.substr(slash + 1));
    if (den.starts_with("2^")) {
      Int k = parse_int(den.substr(2));
      if (k < 0 || k > 1'000'000) throw ParseError("dyadic exponent out of range in '" + std::string(text) + "'");
      return DyadicRational(std::move(num), static_cast<std::size_t>(k));
    }
    Int d = parse_int(den);
    if (d <= 0) throw ParseError("denominator must be positive in '" + std::string(text) + "'");
    std::size_t k = bit_length(d) - 1;
    if (d != (Int(1) << k)) {
      Int g = gcd(num, d);
      Int reduced = d / g;
      std::size_t rk = bit_length(reduced) - 1;
      if (reduced != (Int(1) << rk)) throw InvalidError(std::string(text) + " is not a dyadic rational");
      return DyadicRational(num / g, rk);
    }
    return DyadicRational(std::move(num), k);
  }

  const Int& mantissa() const { return m_; }
  std::size_t exponent() const { return e_; }
  bool is_zero() const { return m_ == 0; }

  /// "m/2^k", or "m" for integers.
  std::string str() const {
    if (e_ == 0) return m_.str();
    return m_.str() + "/2^" + std::to_string(e_);
  }

  long double to_long_double() const {
    std::size_t drop = bit_length(m_) > 80 ? bit_length(m_) - 80 : 0;
    long double head = static_cast<long double>(Int(m_ >> drop));
    long long shift = static_cast<long long>(drop) - static_cast<long long>(e_);
    return std::ldexp(head, static_cast<int>(std::clamp<long long>(shift, -100000, 100000)));
  }

  /// this * 2^j.
  DyadicRational shifted(long long j) const {
    if (j >= 0) {
      auto uj = static_cast<std::size_t>(j);
      std::size_t drop = std::min(uj, e_);
      return DyadicRational(m_ << (uj - drop), e_ - drop);
    }
    return DyadicRational(m_, e_ + static_cast<std::size_t>(-j));
  }

  Int floor() const { return floor_div(m_, Int(1) << e_); }
  DyadicRational frac() const { return *this - integer(floor()); }

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
    std::size_t e = std::max(a.e_, b.e_);
    return DyadicRational((a.m_ << (e - a.e_)) + (b.m_ << (e - b.e_)), e);
  }
  friend DyadicRational operator-(const DyadicRational& a) { return DyadicRational(-a.m_, a.e_); }
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) { return a + (-b); }
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
    return DyadicRational(a.m_ * b.m_, a.e_ + b.e_);
  }

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
    std::size_t e = std::max(a.e_, b.e_);
    Int l = a.m_ << (e - a.e_);
    Int r = b.m_ << (e - b.e_);
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  void normalize() {
    if (m_ == 0) {
      e_ = 0;
      return;
    }
    if (e_ == 0) return;
    std::size_t k = std::min<std::size_t>(boost::multiprecision::lsb(abs_value(m_)), e_);
    m_ >>= k;
    e_ -= k;
  }

  Int m_ = 0;
  std::size_t e_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const DyadicRational& d) { return os << d.str(); }

/// log2(a / b) when a / b is a power of two; a and b positive.
inline std::optional<long long> power_of_two_ratio(const DyadicRational& a, const DyadicRational& b) {
  auto odd = [](const DyadicRational& d) {
    std::size_t z = boost::multiprecision::lsb(d.mantissa());
    return std::pair<Int, long long>{d.mantissa() >> z,
                                     static_cast<long long>(z) - static_cast<long long>(d.exponent())};
  };
  auto [oa, ea] = odd(a);
  auto [ob, eb] = odd(b);
  if (oa != ob) return std::nullopt;
  return ea - eb;
}

/// [a/2^k, (a+1)/2^k] with 0 <= a < 2^k.
struct StandardDyadicInterval {
  Int a = 0;
  std::size_t k = 0;

  static StandardDyadicInterval make(Int a, std::size_t k) {
    if (a < 0 || a >= (Int(1) << k)) {
      throw InvalidError("standard interval index " + a.str() + " outside [0, 2^" + std::to_string(k) + ")");
    }
    return {std::move(a), k};
  }

  DyadicRational lo() const { return DyadicRational(a, k); }
  DyadicRational hi() const { return DyadicRational(a + 1, k); }
  DyadicRational length() const { return DyadicRational(1, k); }
  bool contains(const DyadicRational& t) const { return lo() <= t && t <= hi(); }

  friend bool operator==(const StandardDyadicInterval&, const StandardDyadicInterval&) = default;
};

namespace detail {

inline void require_regular(const Sector& s) {
  if (!s.is_regular()) {
    throw InvalidError("phi needs a regular sector, " + to_string(s.lo.generator()) + "," +
                       to_string(s.hi.generator()) + " has determinant " + to_string(s.determinant()));
  }
}

}  // namespace detail

/// Stern-Brocot descent. In the current basis (vl, vh) the ray is x*vl + y*vh;
/// x > y means it lies left of the mediant, and the whole run of k left turns
/// is taken at once.
inline DyadicRational phi_forward(const Sector& sector, const StandardDyadicInterval& interval, const Ray& ray) {
  detail::require_regular(sector);
  const IntVector& v = ray.generator();
  if (!sector.contains(v)) {
    throw InvalidError("ray " + to_string(v) + " lies outside sector " + to_string(sector.lo.generator()) + "," +
                       to_string(sector.hi.generator()));
  }
  Int x = cross(v, sector.hi.generator());
  Int y = cross(sector.lo.generator(), v);
  DyadicRational lo = interval.lo();
  DyadicRational hi = interval.hi();
  if (y == 0) return lo;
  if (x == 0) return hi;
  std::size_t depth = interval.k;  // hi - lo == 2^-depth
  while (x != y) {
    if (x > y) {
      Int k = (x - 1) / y;
      x -= k * y;
      depth += static_cast<std::size_t>(k);
      hi = lo + DyadicRational(1, depth);
    } else {
      Int k = (y - 1) / x;
      y -= k * x;
      depth += static_cast<std::size_t>(k);
      lo = hi - DyadicRational(1, depth);
    }
  }
  return lo + DyadicRational(1, depth + 1);
}

/// Binary-digit descent: runs of zero bits turn left, runs of one bits turn right.
inline Ray phi_inverse(const Sector& sector, const StandardDyadicInterval& interval, const DyadicRational& t) {
  detail::require_regular(sector);
  if (!interval.contains(t)) {
    throw InvalidError("point " + t.str() + " lies outside interval [" + interval.lo().str() + ", " +
                       interval.hi().str() + "]");
  }
  IntVector vl = sector.lo.generator();
  IntVector vh = sector.hi.generator();
  if (t == interval.lo()) return sector.lo;
  if (t == interval.hi()) return sector.hi;
  DyadicRational u = (t - interval.lo()).shifted(static_cast<long long>(interval.k));
  Int m = u.mantissa();
  std::size_t e = u.exponent();
  while (e > 1) {
    std::size_t b = bit_length(m);
    if (b < e) {
      std::size_t k = e - b;
      vh = Int(k) * vl + vh;
      e -= k;
    } else {
      Int w = (Int(1) << e) - m;
      std::size_t k = e - bit_length(w);
      vl = vl + Int(k) * vh;
      e -= k;
      m = (Int(1) << e) - w;
    }
  }
  return Ray::through(vl + vh);
}

/// Quadrant i of the plane and the quarter interval [i/4, (i+1)/4].
inline Sector quadrant_sector(std::size_t i) { return Fan::quadrants().sector(i % 4); }
inline StandardDyadicInterval quarter_interval(std::size_t i) { return StandardDyadicInterval{Int(i % 4), 2}; }

/// The global conjugacy on rays, (1,0) -> 0, (0,1) -> 1/4, (-1,0) -> 1/2, (0,-1) -> 3/4.
inline DyadicRational phi(const Ray& r) {
  std::size_t q = Fan::quadrants().sector_index_at(r.generator());
  return phi_forward(quadrant_sector(q), quarter_interval(q), r);
}

inline Ray phi_inverse(const DyadicRational& t) {
  DyadicRational u = t.frac();
  auto q = static_cast<std::size_t>(u.shifted(2).floor());
  return phi_inverse(quadrant_sector(q), quarter_interval(q), u);
}

/// A degree-one circle map, affine between consecutive breakpoints with
/// power-of-two slopes. 0 is always the first breakpoint.
class DyadicPLMap {
 public:
  /// Validates breakpoints in [0,1), strictly increasing, with images in
  /// [0,1) that increase cyclically and wind once. A missing breakpoint at 0
  /// is added.
  static DyadicPLMap validate(std::vector<DyadicRational> breakpoints, std::vector<DyadicRational> images) {
    const DyadicRational zero, one = DyadicRational::integer(1);
    if (breakpoints.size() != images.size()) {
      throw InvalidError("expected one image per breakpoint: " + std::to_string(breakpoints.size()) +
                         " breakpoints but " + std::to_string(images.size()) + " images");
    }
    if (breakpoints.empty()) throw InvalidError("a dyadic map needs at least one breakpoint");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (breakpoints[i] < zero || breakpoints[i] >= one) {
        throw InvalidError("breakpoint " + breakpoints[i].str() + " outside [0, 1)");
      }
      if (images[i] < zero || images[i] >= one) throw InvalidError("image " + images[i].str() + " outside [0, 1)");
      if (i > 0 && breakpoints[i] <= breakpoints[i - 1]) {
        throw InvalidError("breakpoints not strictly increasing at " + breakpoints[i].str());
      }
    }
    const std::size_t n = breakpoints.size();
    DyadicRational total;
    std::vector<long long> slopes(n);
    for (std::size_t i = 0; i < n; ++i) {
      DyadicRational len = i + 1 < n ? breakpoints[i + 1] - breakpoints[i] : breakpoints[0] + one - breakpoints[i];
      DyadicRational rise = (images[(i + 1) % n] - images[i]).frac();
      if (rise.is_zero()) {
        if (n > 1) throw InvalidError("images of breakpoints " + std::to_string(i) + " and next coincide");
        rise = one;
      }
      auto slope = power_of_two_ratio(rise, len);
      if (!slope) throw InvalidError("piece " + std::to_string(i) + " has slope " + ratio_string(rise, len) +
                                     ", not a power of 2");
      slopes[i] = *slope;
      total = total + rise;
    }
    if (total != one) {
      throw InvalidError("images wind " + total.str() + " times around the circle; a homeomorphism winds once");
    }
    if (!breakpoints[0].is_zero()) {
      DyadicRational at_zero =
          (images[n - 1] + (one - breakpoints[n - 1]).shifted(slopes[n - 1])).frac();
      breakpoints.insert(breakpoints.begin(), zero);
      images.insert(images.begin(), at_zero);
      slopes.insert(slopes.begin(), slopes[n - 1]);
    }
    return DyadicPLMap(std::move(breakpoints), std::move(images), std::move(slopes));
  }

  static DyadicPLMap identity() { return DyadicPLMap({DyadicRational()}, {DyadicRational()}, {0}); }

  const std::vector<DyadicRational>& breakpoints() const { return breaks_; }
  const std::vector<DyadicRational>& images() const { return images_; }
  /// log2 of the slope on the piece starting at breakpoint i.
  long long slope_exponent(std::size_t i) const { return slopes_[i]; }
  std::size_t size() const { return breaks_.size(); }

  /// f(t) for t in [0, 1), taken modulo 1.
  DyadicRational evaluate(const DyadicRational& t) const {
    DyadicRational u = t.frac();
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
    auto i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return (images_[i] + (u - breaks_[i]).shifted(slopes_[i])).frac();
  }

  /// Drops breakpoints other than 0 where the slope does not change.
  DyadicPLMap canonical() const {
    std::vector<DyadicRational> b{breaks_[0]}, y{images_[0]};
    std::vector<long long> s{slopes_[0]};
    for (std::size_t i = 1; i < size(); ++i) {
      if (slopes_[i] == s.back()) continue;
      b.push_back(breaks_[i]);
      y.push_back(images_[i]);
      s.push_back(slopes_[i]);
    }
    return DyadicPLMap(std::move(b), std::move(y), std::move(s));
  }

  friend bool operator==(const DyadicPLMap& f, const DyadicPLMap& g) {
    DyadicPLMap cf = f.canonical(), cg = g.canonical();
    return cf.breaks_ == cg.breaks_ && cf.images_ == cg.images_;
  }

 private:
  DyadicPLMap(std::vector<DyadicRational> b, std::vector<DyadicRational> y, std::vector<long long> s)
      : breaks_(std::move(b)), images_(std::move(y)), slopes_(std::move(s)) {}

  static std::string ratio_string(const DyadicRational& a, const DyadicRational& b) {
    std::size_t e = std::max(a.exponent(), b.exponent());
    Int num = a.mantissa() << (e - a.exponent());
    Int den = b.mantissa() << (e - b.exponent());
    Int g = gcd(num, den);
    return Int(num / g).str() + "/" + Int(den / g).str();
  }

  std::vector<DyadicRational> breaks_;
  std::vector<DyadicRational> images_;
  std::vector<long long> slopes_;
};

inline std::ostream& operator<<(std::ostream& os, const DyadicPLMap& f) {
  os << "T{";
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f.breakpoints()[i] << "->" << f.images()[i];
  return os << '}';
}

/// Conjugates F by phi. On a fan containing the axes and the preimages of
/// the axes, every regular sector and its image sit inside single quadrants,
/// so each piece is an affine map between standard intervals.
inline DyadicPLMap to_dyadic(const PLAutomorphism& f) {
  PLAutomorphism f_inv = inverse(f);
  std::vector<Ray> rays = f.fan().rays();
  for (const auto& axis : Fan::quadrants().rays()) {
    rays.push_back(axis);
    rays.push_back(f_inv.apply(axis));
  }
  Fan fan = regularize_fan(Fan::from_ray_set(std::move(rays)));
  std::vector<DyadicRational> breaks, images;
  breaks.reserve(fan.size());
  images.reserve(fan.size());
  for (const auto& r : fan.rays()) {
    breaks.push_back(phi(r));
    images.push_back(phi(f.apply(r)));
  }
  return DyadicPLMap::validate(std::move(breaks), std::move(images)).canonical();
}

namespace detail {

// Sector and quadrant-local address of a standard interval of length <= 1/4.
inline Sector sector_of(const DyadicRational& lo, const DyadicRational& len) {
  auto q = static_cast<std::size_t>(lo.shifted(2).floor());
  Sector quad = quadrant_sector(q);
  StandardDyadicInterval quarter = quarter_interval(q);
  return Sector{phi_inverse(quad, quarter, lo), phi_inverse(quad, quarter, lo + len)};
}

// Largest standard interval starting at x that fits in [x, end] and one quadrant.
inline DyadicRational largest_standard_step(const DyadicRational& x, const DyadicRational& end) {
  std::size_t k = std::max<std::size_t>(x.exponent(), 2);
  DyadicRational len(1, k);
  while (x + len > end) len = len.shifted(-1);
  return len;
}

}  // namespace detail

/// The element of T acting as f under the conjugacy phi.
inline PLAutomorphism from_dyadic(const DyadicPLMap& f) {
  const DyadicRational one = DyadicRational::integer(1);
  std::vector<Ray> rays;
  std::vector<UnimodularMatrix> pieces;
  for (std::size_t i = 0; i < f.size(); ++i) {
    DyadicRational x = f.breakpoints()[i];
    const DyadicRational end = i + 1 < f.size() ? f.breakpoints()[i + 1] : one;
    const long long slope = f.slope_exponent(i);
    const DyadicRational quarter(1, 2);
    DyadicRational y = f.images()[i];
    while (x < end) {
      DyadicRational len = detail::largest_standard_step(x, end);
      while (true) {
        DyadicRational image_len = len.shifted(slope);
        bool standard = image_len <= quarter && y.exponent() <= image_len.exponent();
        if (standard) break;
        len = len.shifted(-1);
      }
      DyadicRational image_len = len.shifted(slope);
      Sector source = detail::sector_of(x, len);
      Sector target = detail::sector_of(y, image_len);
      rays.push_back(source.lo);
      pieces.push_back(UnimodularMatrix::mapping(source, target));
      x = x + len;
      y = (y + image_len).frac();
    }
  }
  std::vector<IntVector> gens;
  gens.reserve(rays.size());
  for (const auto& r : rays) gens.push_back(r.generator());
  auto [fan, offset] = Fan::validate_with_offset(gens);
  if (offset != 0) throw InternalError("standard pieces out of counterclockwise order");
  return PLAutomorphism::assemble(std::move(fan), std::move(pieces)).canonical();
}

/// Floating-point average displacement of the lift with f~(0) in [0, 1).
inline double estimate_rotation(const DyadicPLMap& f, std::size_t iterations, double x0 = 0.0) {
  if (iterations == 0) throw InvalidError("estimate needs at least one iteration");
  const std::size_t n = f.size();
  std::vector<long double> b(n), lift(n), slope(n);
  long double acc = f.images()[0].to_long_double();
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = f.breakpoints()[i].to_long_double();
    slope[i] = std::ldexp(1.0L, static_cast<int>(f.slope_exponent(i)));
    lift[i] = acc;
    long double next_b = i + 1 < n ? f.breakpoints()[i + 1].to_long_double() : 1.0L;
    acc += (next_b - b[i]) * slope[i];
  }
  long double t = x0 - std::floor(static_cast<long double>(x0));
  long double total = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    auto pos = std::upper_bound(b.begin(), b.end(), t);
    std::size_t i = pos == b.begin() ? 0 : static_cast<std::size_t>(pos - b.begin()) - 1;
    long double image = lift[i] + (t - b[i]) * slope[i];
    total += image - t;
    t = image - std::floor(image);
  }
  return static_cast<double>(total / static_cast<long double>(iterations));
}

}  // namespace fanrot
