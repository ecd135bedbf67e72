#pragma once

// Exact rotation numbers of elements of T, read off the F#-dynamics of a
// deterministic fan, plus a floating-point estimator used as an oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fanrot/errors.hpp"
#include "fanrot/lattice.hpp"
#include "fanrot/pl_map.hpp"
#include "fanrot/sharp.hpp"

namespace fanrot {

/// A rational number in [0, 1), reduced; zero is 0/1.
class RotationNumber {
 public:
  RotationNumber() : num_(0), den_(1) {}

  /// p/q taken modulo 1.
  static RotationNumber make(const Int& p, const Int& q) {
    if (q == 0) throw InvalidError("rotation number with zero denominator");
    Int num = q < 0 ? Int(-p) : p;
    Int den = abs_value(q);
    num = num - floor_div(num, den) * den;
    Int g = gcd(num, den);
    if (g == 0) g = 1;
    return RotationNumber(num / g, den / g);
  }

  /// Parses "p/q" or an integer.
  static RotationNumber parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return make(parse_int(text), 1);
    return make(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }

  const Int& numerator() const { return num_; }
  const Int& denominator() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const { return num_.str() + "/" + den_.str(); }

  friend RotationNumber operator+(const RotationNumber& a, const RotationNumber& b) {
    return make(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RotationNumber operator-(const RotationNumber& a) { return make(-a.num_, a.den_); }
  friend RotationNumber operator*(const Int& k, const RotationNumber& a) { return make(k * a.num_, a.den_); }
  friend bool operator==(const RotationNumber&, const RotationNumber&) = default;

 private:
  RotationNumber(Int num, Int den) : num_(std::move(num)), den_(std::move(den)) {}
  Int num_, den_;
};

inline std::ostream& operator<<(std::ostream& os, const RotationNumber& r) { return os << r.str(); }

/// Revolution increment of the lift of F fixed by F~(ref, 0) = (F(ref), 0):
/// 1 when F(w) comes strictly before F(ref) counterclockwise from ref.
inline int wrap_step(const PLAutomorphism& f, const IntVector& w, const IntVector& ref = positive_x_axis()) {
  return ccw_compare(f.apply(w), f.apply(ref), ref) < 0 ? 1 : 0;
}

struct RotationOptions {
  IntVector ref{1, 0};
  std::size_t start = 0;  // which eligible ray (case a) or entering ray (case b) to trace
};

struct RotationReport {
  enum class Case { ray_permutation, sector_cycle };

  RotationNumber rho;
  Case kind = Case::ray_permutation;
  std::size_t period = 0;
  Int revolutions = 0;
  std::vector<std::size_t> cycle;  // ray indices (ray_permutation) or sector indices (sector_cycle) of `fan`
  Fan fan;
  std::optional<std::size_t> permutation_order;
};

/// Reads the rotation number off a deterministic fan.
///
/// If F# sends every ray to a ray, F permutes the rays of the fan and one ray
/// orbit gives the answer. Otherwise some ray enters a sector, whose F#-orbit
/// closes up into a cycle of sectors s_0 -> ... -> s_p = s_0 with
/// F(s_t) inside s_{t+1}. Lifting the left facet of s_t to revolution r_t,
/// F~ lands in the lift of s_{t+1} on revolution r_t + wrap, less one if the
/// image sits past the cut before the next left facet. After p steps the
/// lifted s_0 maps into itself shifted by q = r_p, so F~^p - q has a fixed
/// point and the rotation number is q/p.
inline RotationReport rotation_report(const DeterministicFan& det, const RotationOptions& opts = {}) {
  const Fan& fan = det.fan;
  const PLAutomorphism& f = det.map;
  const IntVector& ref = opts.ref;
  RotationReport report{RotationNumber(), RotationReport::Case::ray_permutation, 0, 0, {}, fan, std::nullopt};

  std::vector<std::size_t> entering;
  for (std::size_t j = 0; j < fan.size(); ++j) {
    if (!fan.locate(f.matrix(j) * fan.ray(j).generator()).is_ray()) entering.push_back(j);
  }

  if (entering.empty()) {
    std::size_t start = opts.start % fan.size();
    std::size_t current = start;
    Int revolutions = 0;
    do {
      report.cycle.push_back(current);
      revolutions += wrap_step(f, fan.ray(current).generator(), ref);
      current = fan.locate(f.apply(fan.ray(current).generator())).index;
    } while (current != start);
    report.period = report.cycle.size();
    report.revolutions = revolutions;
    report.permutation_order = report.period;
    report.rho = RotationNumber::make(revolutions, report.period);
    return report;
  }

  report.kind = RotationReport::Case::sector_cycle;
  std::size_t ray = entering[opts.start % entering.size()];
  OrbitStatus orbit = cone_orbit_on(f, ConeRef::ray(ray));
  if (!orbit.is_cycle()) throw InternalError("ray orbit on a deterministic fan is undefined");
  const auto [entry, period] = orbit.cycle();
  for (std::size_t t = entry; t < entry + period; ++t) {
    if (!orbit.prefix[t].is_sector()) throw InternalError("entered sector orbit returned to a ray");
    report.cycle.push_back(orbit.prefix[t].index);
  }

  Int revolutions = 0;
  for (std::size_t t = 0; t < period; ++t) {
    const IntVector& lo = fan.ray(report.cycle[t]).generator();
    const IntVector& next_lo = fan.ray(report.cycle[(t + 1) % period]).generator();
    revolutions += wrap_step(f, lo, ref);
    if (ccw_compare(f.apply(lo), next_lo, ref) < 0) revolutions -= 1;
  }
  report.period = period;
  report.revolutions = revolutions;
  report.rho = RotationNumber::make(revolutions, period);
  return report;
}

inline RotationReport rotation_report(const PLAutomorphism& f, const RotationOptions& opts = {}) {
  return rotation_report(deterministic_refinement(f), opts);
}

inline RotationNumber rotation_number(const PLAutomorphism& f) { return rotation_report(f).rho; }

/// Order of a element whose rotation report is known. A finite-order circle
/// homeomorphism is conjugate to the rigid rotation by its rotation number,
/// so the only candidate order is the denominator of rho.
inline std::optional<std::size_t> finite_order(const PLAutomorphism& f, const RotationReport& report,
                                               std::size_t cap = 64) {
  if (report.permutation_order) return report.permutation_order;
  const Int& den = report.rho.denominator();
  if (den > cap) return std::nullopt;
  auto p = static_cast<std::size_t>(den);
  if (power(f, static_cast<long long>(p)).is_identity()) return p;
  return std::nullopt;
}

inline std::optional<std::size_t> finite_order(const PLAutomorphism& f, std::size_t cap = 64) {
  return finite_order(f, rotation_report(f), cap);
}

namespace detail {

// Angle of (x, y) as a fraction of a full turn, in [0, 1).
inline long double turn_fraction(long double x, long double y) {
  long double t = std::atan2(y, x) / (2.0L * std::numbers::pi_v<long double>);
  return t < 0 ? t + 1.0L : t;
}

inline long double to_long_double(const Int& v) { return static_cast<long double>(v); }

}  // namespace detail

/// Floating-point average displacement of the lift used by wrap_step (ref
/// (1,0)) over `iterations` steps from the ray at angle 2*pi*x0. Not reduced
/// modulo 1; the error is below 1/iterations plus rounding.
inline double estimate_rotation(const PLAutomorphism& f, std::size_t iterations, double x0 = 0.0) {
  if (iterations == 0) throw InvalidError("estimate needs at least one iteration");
  const Fan& fan = f.fan();
  const std::size_t d = fan.size();
  std::vector<long double> ray_turn(d);
  std::vector<std::array<long double, 4>> mats(d);
  for (std::size_t j = 0; j < d; ++j) {
    ray_turn[j] = detail::turn_fraction(detail::to_long_double(fan.ray(j).x()), detail::to_long_double(fan.ray(j).y()));
    const auto& m = f.matrix(j);
    mats[j] = {detail::to_long_double(m.a()), detail::to_long_double(m.b()), detail::to_long_double(m.c()),
               detail::to_long_double(m.d())};
  }
  IntVector image_ref = f.apply(positive_x_axis());
  const long double ref_turn = detail::turn_fraction(detail::to_long_double(image_ref.x), detail::to_long_double(image_ref.y));

  long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(x0);
  long double x = std::cos(angle);
  long double y = std::sin(angle);
  long double turn = detail::turn_fraction(x, y);
  const long double start_turn = turn;
  long long wraps = 0;
  for (std::size_t i = 0; i < iterations; ++i) {
    auto it = std::upper_bound(ray_turn.begin(), ray_turn.end(), turn);
    std::size_t s = it == ray_turn.begin() ? d - 1 : static_cast<std::size_t>(it - ray_turn.begin()) - 1;
    const auto& m = mats[s];
    long double nx = m[0] * x + m[1] * y;
    long double ny = m[2] * x + m[3] * y;
    int e = 0;
    std::frexp(static_cast<double>(std::max(std::fabs(nx), std::fabs(ny))), &e);
    if (e > 64 || e < -64) {
      nx = std::ldexp(nx, -e);
      ny = std::ldexp(ny, -e);
    }
    x = nx;
    y = ny;
    long double next_turn = detail::turn_fraction(x, y);
    if (next_turn < ref_turn) ++wraps;
    turn = next_turn;
  }
  return static_cast<double>((turn - start_turn + static_cast<long double>(wraps)) / static_cast<long double>(iterations));
}

/// Distance between two reals on the circle R/Z.
inline double circle_distance(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 1.0);
  return d > 0.5 ? 1.0 - d : d;
}

}  // namespace fanrot
