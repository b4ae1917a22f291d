#include "modelspace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "modelspace/error.hpp"
#include "modelspace/numerics.hpp"
#include "modelspace/parallel.hpp"

namespace modelspace {

bool window_contains(const Arc& arc, Complex z) {
  const double r = std::abs(z);
  if (!(r <= 1.0 + 1e-12)) throw PreconditionError("window point outside the closed disk");
  if (r == 0.0) return arc.measure() / 2.0 >= 1.0;
  return 1.0 - r <= arc.measure() / 2.0 && arc.contains(std::arg(z));
}

Arc amplify(const Arc& arc, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw PreconditionError("amplification must be positive");
  return Arc::centered(arc.center(), std::min(kTwoPi, factor * arc.length()));
}

Arc privalov_shadow(Complex lambda, double factor) {
  const double r = std::abs(lambda);
  if (r == 0.0) throw PreconditionError("Privalov shadow undefined at the origin");
  if (!(r < 1.0)) throw PreconditionError("Privalov shadow requires |lambda| < 1");
  if (!(factor > 0.0)) throw PreconditionError("shadow factor must be positive");
  return Arc::centered(std::arg(lambda), std::min(kTwoPi, factor * (1.0 - r)));
}

// ---------------------------------------------------------------------------
// Sub-level grid

Complex SublevelGrid::center(std::size_t ring, std::size_t index) const {
  const auto& r = rings.at(ring);
  return std::polar(r.radius, kTwoPi * static_cast<double>(index) / static_cast<double>(r.count));
}

double SublevelGrid::cell_diagonal(std::size_t ring) const {
  if (ring == 0) return 0.5;
  const auto& r = rings.at(ring);
  const double radial = std::ldexp(1.0, -static_cast<int>(ring));
  const double angular = r.radius * kTwoPi / static_cast<double>(r.count);
  return std::hypot(radial, angular);
}

std::size_t SublevelGrid::occupied_count() const {
  std::size_t n = 0;
  for (const auto& r : rings) n += static_cast<std::size_t>(std::count(r.occupied.begin(), r.occupied.end(), 1));
  return n;
}

std::vector<std::pair<Complex, std::size_t>> SublevelGrid::occupied_cells() const {
  std::vector<std::pair<Complex, std::size_t>> out;
  for (std::size_t j = 0; j < rings.size(); ++j)
    for (std::size_t i = 0; i < rings[j].count; ++i)
      if (rings[j].occupied[i]) out.emplace_back(center(j, i), j);
  return out;
}

std::string SublevelGrid::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "r,theta,occupied\n";
  for (std::size_t j = 0; j < rings.size(); ++j)
    for (std::size_t i = 0; i < rings[j].count; ++i)
      os << rings[j].radius << ',' << kTwoPi * static_cast<double>(i) / static_cast<double>(rings[j].count) << ','
         << static_cast<int>(rings[j].occupied[i]) << '\n';
  return os.str();
}

SublevelGrid sublevel_grid(const InnerFunction& theta, double epsilon, int depth) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("epsilon must lie in (0, 1)");
  if (depth < 8) throw PreconditionError("grid depth must be at least 8");
  if (depth > 20) throw PreconditionError("grid depth must be at most 20");
  SublevelGrid grid;
  grid.epsilon = epsilon;
  grid.depth = depth;
  grid.rings.resize(static_cast<std::size_t>(depth) + 1);
  grid.rings[0].radius = 0.0;
  grid.rings[0].count = 1;
  for (int j = 1; j <= depth; ++j) {
    auto& r = grid.rings[static_cast<std::size_t>(j)];
    r.radius = 1.0 - std::ldexp(1.0, -j);
    r.count = std::size_t{1} << (j + 3);
  }
  for (std::size_t j = 0; j < grid.rings.size(); ++j) {
    auto& ring = grid.rings[j];
    ring.occupied.assign(ring.count, 0);
    parallel_for(ring.count, [&](std::size_t i) {
      ring.occupied[i] = modulus(theta, grid.center(j, i)) < epsilon ? 1 : 0;
    });
  }
  return grid;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ClsResult cls_test(const SublevelGrid& grid) {
  if (grid.occupied_count() == 0) throw PreconditionError("ε below minimum modulus");
  std::vector<std::size_t> offset(grid.rings.size() + 1, 0);
  for (std::size_t j = 0; j < grid.rings.size(); ++j) offset[j + 1] = offset[j] + grid.rings[j].count;
  DisjointSets sets(offset.back());
  auto occupied = [&](std::size_t j, std::size_t i) { return grid.rings[j].occupied[i] != 0; };

  for (std::size_t j = 0; j < grid.rings.size(); ++j) {
    const std::size_t n = grid.rings[j].count;
    for (std::size_t i = 0; i < n; ++i) {
      if (!occupied(j, i)) continue;
      if (n > 1) {
        const std::size_t next = (i + 1) % n;
        if (occupied(j, next)) sets.unite(offset[j] + i, offset[j] + next);
      }
      if (j + 1 >= grid.rings.size()) continue;
      const std::size_t m = grid.rings[j + 1].count;
      if (j == 0) {
        for (std::size_t k = 0; k < m; ++k)
          if (occupied(1, k)) sets.unite(offset[0], offset[1] + k);
        continue;
      }
      // Child cells whose angular intervals overlap cell i.
      for (std::size_t k : {2 * i + m - 1, 2 * i, 2 * i + 1}) {
        k %= m;
        if (occupied(j + 1, k)) sets.unite(offset[j] + i, offset[j + 1] + k);
      }
    }
  }

  std::size_t components = 0;
  for (std::size_t j = 0; j < grid.rings.size(); ++j)
    for (std::size_t i = 0; i < grid.rings[j].count; ++i)
      if (occupied(j, i) && sets.find(offset[j] + i) == offset[j] + i) ++components;
  return {components == 1, components};
}

// ---------------------------------------------------------------------------
// Whitney decomposition

double distance_to_cells(double angle, const std::vector<std::pair<Complex, std::size_t>>& cells) {
  const Complex zeta = std::polar(1.0, angle);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [c, ring] : cells) best = std::min(best, std::norm(zeta - c));
  return std::sqrt(best);
}

namespace {

// Distance from an interior point to the closed arc, with the ring of the cell.
double point_arc_distance(Complex c, const Arc& arc) {
  const double r = std::abs(c);
  if (r > 0.0 && arc.contains(std::arg(c))) return 1.0 - r;
  return std::min(std::abs(std::polar(1.0, arc.start()) - c), std::abs(std::polar(1.0, arc.end()) - c));
}

class InverseDistance {
 public:
  explicit InverseDistance(const std::vector<std::pair<Complex, std::size_t>>& cells) : cells_(cells) {}

  double operator()(double t) const { return 1.0 / distance_to_cells(t, cells_); }

  // int_a^b d^{-1}, adaptive on nested Gauss-Legendre pairs; d is only
  // piecewise smooth (the nearest cell changes along the circle).
  double integrate(double a, double b) const { return refine(a, b, rule(a, b), 0); }

 private:
  double rule(double a, double b) const {
    const auto& gl = gauss_legendre(8);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) s += gl.weights[k] * (*this)(mid + half * gl.nodes[k]);
    return s * half;
  }

  double refine(double a, double b, double whole, int level) const {
    const double mid = 0.5 * (a + b);
    const double left = rule(a, mid);
    const double right = rule(mid, b);
    if (std::abs(left + right - whole) <= 1e-14 * std::max(1.0, std::abs(whole)) || level >= 40)
      return left + right;
    return refine(a, mid, left, level + 1) + refine(mid, b, right, level + 1);
  }

  const std::vector<std::pair<Complex, std::size_t>>& cells_;
};

// Complement of the flagged spectrum cells, as angle intervals [lo, hi) with
// lo < hi <= lo + 2 pi. An empty spectrum gives the whole circle from 0.
std::vector<std::pair<double, double>> free_components(const std::vector<double>& spectrum, double resolution) {
  if (spectrum.empty()) return {{0.0, kTwoPi}};
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::round(kTwoPi / resolution)));
  const double step = kTwoPi / static_cast<double>(cells);
  if (spectrum.size() >= cells) throw PreconditionError("no free boundary");
  std::vector<std::size_t> flagged;
  for (double a : spectrum) flagged.push_back(static_cast<std::size_t>(std::llround(a / step)) % cells);
  std::sort(flagged.begin(), flagged.end());
  flagged.erase(std::unique(flagged.begin(), flagged.end()), flagged.end());

  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < flagged.size(); ++k) {
    const std::size_t here = flagged[k];
    const std::size_t next = k + 1 < flagged.size() ? flagged[k + 1] : flagged[0] + cells;
    if (next == here + 1) continue;
    const double lo = (static_cast<double>(here) + 0.5) * step;
    const double hi = (static_cast<double>(next) - 0.5) * step;
    out.emplace_back(lo, hi);
  }
  return out;
}

}  // namespace

std::vector<WhitneyArc> whitney_decompose(const InnerFunction& theta, double epsilon, double delta,
                                          const WhitneyOptions& options) {
  if (!(delta > 0.0 && delta < 0.5)) throw PreconditionError("delta must lie in (0, 1/2)");
  const SublevelGrid grid = sublevel_grid(theta, epsilon, options.grid_depth);
  const auto cells = grid.occupied_cells();
  if (cells.empty()) throw PreconditionError("ε below minimum modulus");
  const auto components = free_components(spectrum_estimate(theta, options.spectrum_resolution),
                                          options.spectrum_resolution);
  const InverseDistance inv(cells);

  auto make_arc = [&](double lo, double hi, double integral, bool terminal) {
    WhitneyArc w;
    w.arc = Arc(lo, std::min(kTwoPi, hi - lo));
    w.integral = integral;
    w.terminal = terminal;
    w.level_distance = std::numeric_limits<double>::infinity();
    for (const auto& [c, ring] : cells) {
      const double d = point_arc_distance(c, w.arc);
      if (d < w.level_distance) {
        w.level_distance = d;
        w.resolution = grid.cell_diagonal(ring);
      }
    }
    return w;
  };

  std::vector<WhitneyArc> out;
  for (const auto& [lo, hi] : components) {
    double start = lo;
    double t = lo;
    double acc = 0.0;
    while (t < hi) {
      const double h = std::min(distance_to_cells(t, cells) / 64.0, hi - t);
      const double piece = inv.integrate(t, t + h);
      if (acc + piece < delta) {
        acc += piece;
        t = (hi - t <= h) ? hi : t + h;
        continue;
      }
      // Locate x in (t, t + h] with acc + int_t^x = delta: safeguarded Newton.
      double a = t;
      double b = t + h;
      double x = t + h * (delta - acc) / piece;
      for (int it = 0; it < 100; ++it) {
        const double f = acc + inv.integrate(t, x) - delta;
        if (std::abs(f) <= 1e-14) break;
        if (f > 0) b = x; else a = x;
        double next = x - f / inv(x);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) {
          x = next;
          break;
        }
        x = next;
      }
      out.push_back(make_arc(start, x, acc + inv.integrate(t, x), false));
      start = x;
      t = x;
      acc = 0.0;
    }
    if (hi - start > 1e-15) out.push_back(make_arc(start, hi, inv.integrate(start, hi), true));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Window scans

namespace {

// Points of the disk sorted by argument, for window queries.
class AngularIndex {
 public:
  AngularIndex() = default;
  explicit AngularIndex(const std::vector<std::pair<Complex, double>>& points) {
    for (const auto& [z, w] : points)
      if (z != Complex(0.0)) entries_.push_back({wrap_angle(std::arg(z)), z, w});
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.angle < b.angle; });
  }

  // Calls fn(z, weight) for every point in S(arc), in angle order.
  template <class Fn>
  void for_each_in_window(const Arc& arc, Fn&& fn) const {
    const double depth = arc.measure() / 2.0;
    auto visit = [&](double lo, double hi) {
      auto it = std::lower_bound(entries_.begin(), entries_.end(), lo,
                                 [](const Entry& e, double v) { return e.angle < v; });
      for (; it != entries_.end() && it->angle < hi; ++it)
        if (1.0 - std::abs(it->z) <= depth && window_contains(arc, it->z)) fn(it->z, it->weight);
    };
    if (arc.is_full()) {
      visit(-1.0, 2.0 * kTwoPi);
      return;
    }
    // Slightly widened ranges; window_contains decides membership exactly.
    constexpr double pad = 1e-12;
    const double end = arc.end();
    if (end <= kTwoPi - pad) {
      visit(arc.start() - pad, end + pad);
    } else {
      visit(arc.start() - pad, 2.0 * kTwoPi);
      visit(-1.0, end - kTwoPi + pad);
    }
  }

  bool empty() const { return entries_.empty(); }

 private:
  struct Entry {
    double angle;
    Complex z;
    double weight;
  };
  std::vector<Entry> entries_;
};

double window_mass_indexed(const MeasureSpec& mu, const AngularIndex& atoms, const Arc& arc) {
  double mass = 0.0;
  atoms.for_each_in_window(arc, [&](Complex, double w) { mass += w; });
  for (const auto& piece : mu.density_pieces()) mass += piece.density * piece.arc.overlap(arc) / kTwoPi;
  return mass;
}

AngularIndex atom_index(const MeasureSpec& mu) {
  std::vector<std::pair<Complex, double>> pts;
  for (const auto& a : mu.atoms()) pts.emplace_back(a.location, a.mass);
  return AngularIndex(pts);
}

}  // namespace

double window_mass(const MeasureSpec& mu, const Arc& arc) {
  return window_mass_indexed(mu, atom_index(mu), arc);
}

ScanResult window_scan(const MeasureSpec& mu, const ScanConfig& config) {
  if (config.max_depth < 0 || config.max_depth > 24) throw PreconditionError("max_depth must lie in [0, 24]");
  const auto& restriction = config.restriction;
  const AngularIndex atoms = atom_index(mu);

  AngularIndex level_cells;
  if (restriction.kind == ScanRestriction::Kind::sublevel) {
    if (!restriction.theta) throw PreconditionError("sublevel restriction needs an inner function");
    if (!(restriction.amplification >= 1.0)) throw PreconditionError("amplification must be at least 1");
    const SublevelGrid grid = sublevel_grid(*restriction.theta, restriction.epsilon, restriction.grid_depth);
    if (grid.occupied_count() == 0) throw PreconditionError("ε below minimum modulus");
    std::vector<std::pair<Complex, double>> pts;
    for (const auto& [c, ring] : grid.occupied_cells()) pts.emplace_back(c, 1.0);
    level_cells = AngularIndex(pts);
  }
  if (restriction.kind == ScanRestriction::Kind::meets_set && restriction.set.empty())
    throw PreconditionError("empty family");

  auto admitted = [&](const Arc& arc) {
    switch (restriction.kind) {
      case ScanRestriction::Kind::none:
        return true;
      case ScanRestriction::Kind::sublevel: {
        bool hit = false;
        level_cells.for_each_in_window(amplify(arc, restriction.amplification), [&](Complex, double) { hit = true; });
        return hit;
      }
      case ScanRestriction::Kind::meets_set:
        for (const auto& s : restriction.set)
          if (s.overlap(arc) > 0.0) return true;
        return false;
    }
    return false;
  };

  ScanResult result;
  bool found = false;
  const bool sup = config.mode == ScanMode::sup;
  for (int k = 0; k <= config.max_depth; ++k) {
    const double length = kTwoPi * std::ldexp(1.0, -k);
    const std::size_t count = std::size_t{1} << (k + 1);
    std::vector<double> ratio(count, 0.0);
    std::vector<std::uint8_t> pass(count, 0);
    parallel_for(count, [&](std::size_t i) {
      const Arc arc = Arc::centered(0.5 * length * static_cast<double>(i), length);
      if (!admitted(arc)) return;
      pass[i] = 1;
      ratio[i] = window_mass_indexed(mu, atoms, arc) / arc.measure();
    });
    for (std::size_t i = 0; i < count; ++i) {
      if (!pass[i]) continue;
      ++result.arcs_considered;
      if (!found || (sup ? ratio[i] > result.value : ratio[i] < result.value)) {
        found = true;
        result.value = ratio[i];
        result.witness = Arc::centered(0.5 * length * static_cast<double>(i), length);
        result.witness_level = k;
        result.witness_index = i;
      }
    }
  }
  if (!found) throw PreconditionError("empty family");
  return result;
}

}  // namespace modelspace
