#pragma once

#include <vector>

#include "modelspace/inner.hpp"

namespace modelspace {

/// Half-open boundary arc [start, start + length), angles in radians.
/// start is kept in [0, 2 pi); length lies in (0, 2 pi].
class Arc {
 public:
  Arc() = default;
  Arc(double start, double length);

  /// Arc from `start` to `end` counterclockwise (end is reduced past start).
  static Arc between(double start, double end);
  static Arc centered(double center, double length);
  static Arc full_circle() { return Arc(0.0, kTwoPi); }

  double start() const { return start_; }
  double length() const { return length_; }
  double end() const { return start_ + length_; }
  double center() const { return wrap_angle(start_ + 0.5 * length_); }
  /// Normalized length m(I) = length / 2 pi.
  double measure() const { return length_ / kTwoPi; }
  bool is_full() const { return length_ >= kTwoPi; }

  bool contains(double angle) const;
  /// Length (radians) of the intersection with another arc.
  double overlap(const Arc& other) const;

  friend bool operator==(const Arc&, const Arc&) = default;

 private:
  double start_ = 0.0;
  double length_ = kTwoPi;
};

/// m of the union of possibly overlapping arcs.
double union_measure(const std::vector<Arc>& arcs);

}  // namespace modelspace
