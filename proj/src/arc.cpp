#include "modelspace/arc.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "modelspace/error.hpp"

namespace modelspace {

Arc::Arc(double start, double length) : start_(wrap_angle(start)), length_(length) {
  if (!std::isfinite(start) || !std::isfinite(length) || !(length > 0.0))
    throw PreconditionError("arc length must be positive");
  if (length_ > kTwoPi) length_ = kTwoPi;
}

Arc Arc::between(double start, double end) {
  double length = end - start;
  if (length > kTwoPi) return full_circle();
  if (length <= 0.0) length = wrap_angle(length);
  if (length == 0.0) throw PreconditionError("arc endpoints coincide");
  return Arc(start, length);
}

Arc Arc::centered(double center, double length) {
  if (length >= kTwoPi) return Arc(center - 0.5 * kTwoPi, kTwoPi);
  return Arc(center - 0.5 * length, length);
}

bool Arc::contains(double angle) const {
  if (is_full()) return true;
  double offset = wrap_angle(angle) - start_;
  if (offset < 0.0) offset += kTwoPi;
  return offset < length_;
}

double Arc::overlap(const Arc& other) const {
  if (is_full()) return other.length_;
  if (other.is_full()) return length_;
  double total = 0.0;
  for (int k = -1; k <= 1; ++k) {
    const double lo = std::max(start_, other.start_ + k * kTwoPi);
    const double hi = std::min(end(), other.end() + k * kTwoPi);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

double union_measure(const std::vector<Arc>& arcs) {
  std::vector<std::pair<double, double>> pieces;
  for (const auto& a : arcs) {
    if (a.is_full()) return 1.0;
    if (a.end() <= kTwoPi) {
      pieces.emplace_back(a.start(), a.end());
    } else {
      pieces.emplace_back(a.start(), kTwoPi);
      pieces.emplace_back(0.0, a.end() - kTwoPi);
    }
  }
  std::sort(pieces.begin(), pieces.end());
  double covered = 0.0;
  double reach = -1.0;
  for (const auto& [lo, hi] : pieces) {
    const double from = std::max(lo, reach);
    if (hi > from) covered += hi - from;
    reach = std::max(reach, hi);
  }
  return std::min(1.0, covered / kTwoPi);
}

}  // namespace modelspace
