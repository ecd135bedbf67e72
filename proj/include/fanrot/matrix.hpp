#pragma once

#include <array>
#include <ostream>
#include <string>

#include "fanrot/errors.hpp"
#include "fanrot/lattice.hpp"

namespace fanrot {

/// An element of SL(2, Z), row-major [[a, b], [c, d]].
class UnimodularMatrix {
 public:
  static UnimodularMatrix from_entries(Int a, Int b, Int c, Int d) {
    Int det = a * d - b * c;
    if (det != 1) throw InvalidError("determinant " + to_string(det) + " ≠ 1");
    return UnimodularMatrix(std::move(a), std::move(b), std::move(c), std::move(d));
  }

  static UnimodularMatrix from_entries(const std::array<Int, 4>& e) { return from_entries(e[0], e[1], e[2], e[3]); }

  static UnimodularMatrix identity() { return UnimodularMatrix(1, 0, 0, 1); }

  /// The unique matrix sending regular sector `from` onto regular sector `to`,
  /// facet to facet.
  static UnimodularMatrix mapping(const Sector& from, const Sector& to) {
    if (!from.is_regular() || !to.is_regular()) throw InvalidError("sector mapping needs regular sectors");
    const IntVector& u1 = from.lo.generator();
    const IntVector& u2 = from.hi.generator();
    const IntVector& w1 = to.lo.generator();
    const IntVector& w2 = to.hi.generator();
    return UnimodularMatrix(w1.x * u2.y - w2.x * u1.y, w2.x * u1.x - w1.x * u2.x, w1.y * u2.y - w2.y * u1.y,
                            w2.y * u1.x - w1.y * u2.x);
  }

  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  const Int& c() const { return c_; }
  const Int& d() const { return d_; }
  Int trace() const { return a_ + d_; }

  IntVector operator*(const IntVector& v) const { return {a_ * v.x + b_ * v.y, c_ * v.x + d_ * v.y}; }

  UnimodularMatrix operator*(const UnimodularMatrix& o) const {
    return UnimodularMatrix(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
                            c_ * o.b_ + d_ * o.d_);
  }

  UnimodularMatrix inverse() const { return UnimodularMatrix(d_, -b_, -c_, a_); }

  bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }

  friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;

 private:
  UnimodularMatrix(Int a, Int b, Int c, Int d) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}
  Int a_, b_, c_, d_;
};

inline std::ostream& operator<<(std::ostream& os, const UnimodularMatrix& m) {
  return os << "[[" << m.a() << ',' << m.b() << "],[" << m.c() << ',' << m.d() << "]]";
}

}  // namespace fanrot
