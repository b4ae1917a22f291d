#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modelspace/arc.hpp"
#include "modelspace/inner.hpp"
#include "modelspace/measure.hpp"

namespace modelspace {

/// Membership in the Carleson window S(I) = {z/|z| in I, 1 - |z| <= m(I)/2}.
bool window_contains(const Arc& arc, Complex z);

/// Arc with the same center and n times the length (clamped to the full circle).
Arc amplify(const Arc& arc, double factor);

/// Arc centered at lambda/|lambda| of length factor * (1 - |lambda|) radians.
Arc privalov_shadow(Complex lambda, double factor = 1.0);

/// Polar grid sampling the sub-level set L(Theta, eps) = {|Theta| < eps}.
/// Ring 0 is the single cell at the origin; ring j >= 1 has radius
/// 1 - 2^{-j} and 2^{j+3} cells centered at angles 2 pi i / 2^{j+3}.
struct SublevelGrid {
  struct Ring {
    double radius = 0.0;
    std::size_t count = 1;
    std::vector<std::uint8_t> occupied;
  };

  double epsilon = 0.5;
  int depth = 8;
  std::vector<Ring> rings;  // rings[0] is the origin

  Complex center(std::size_t ring, std::size_t index) const;
  /// Cell diagonal: radial gap 2^{-j} against arc width r_j * 2 pi / count.
  double cell_diagonal(std::size_t ring) const;
  std::size_t occupied_count() const;
  /// Occupied cell centers with their ring index.
  std::vector<std::pair<Complex, std::size_t>> occupied_cells() const;
  /// CSV with header "r,theta,occupied", one row per cell.
  std::string to_csv() const;
};

SublevelGrid sublevel_grid(const InnerFunction& theta, double epsilon, int depth);

struct ClsResult {
  bool connected = false;
  std::size_t components = 0;
};

/// Connected components of the occupied cells under 4-adjacency: angular
/// neighbours on a ring (with wraparound) and radial neighbours whose angular
/// cells overlap. Throws PreconditionError("ε below minimum modulus") on an
/// empty grid.
ClsResult cls_test(const SublevelGrid& grid);

/// One arc of the Whitney-type decomposition of the free boundary.
struct WhitneyArc {
  Arc arc;
  double integral = 0.0;       // int_I d^{-1}(zeta) |d zeta|
  double level_distance = 0.0;  // d(I, L) against the grid
  double resolution = 0.0;      // diagonal of the grid cell realizing d(I, L)
  bool terminal = false;        // remainder at the end of a component
};

struct WhitneyOptions {
  int grid_depth = 14;
  double spectrum_resolution = kTwoPi / 4096.0;
};

/// Greedy left-to-right cut of each component of T \ sigma(Theta) into arcs
/// with int_I d_eps^{-1} |d zeta| = delta, where d_eps is the distance to the
/// occupied cells of the sub-level grid. Arc length is measured in radians.
std::vector<WhitneyArc> whitney_decompose(const InnerFunction& theta, double epsilon, double delta,
                                          const WhitneyOptions& options = {});

/// Distance from a boundary point to the occupied cells of a grid.
double distance_to_cells(double angle, const std::vector<std::pair<Complex, std::size_t>>& cells);

enum class ScanMode { sup, inf };

struct ScanRestriction {
  enum class Kind { none, sublevel, meets_set };
  Kind kind = Kind::none;
  // sublevel: arcs I with S(N I) meeting L(Theta, eps) (sampled on the grid)
  std::optional<InnerFunction> theta;
  double epsilon = 0.5;
  double amplification = 1.0;
  int grid_depth = 12;
  // meets_set: arcs I with I meeting one of these arcs
  std::vector<Arc> set;
};

struct ScanConfig {
  int max_depth = 12;
  ScanRestriction restriction;
  ScanMode mode = ScanMode::sup;
};

struct ScanResult {
  double value = 0.0;  // extremal mu(S(I))/m(I)
  Arc witness;
  int witness_level = 0;
  std::size_t witness_index = 0;
  std::size_t arcs_considered = 0;
};

/// Extremal window ratio over the dyadic family: lengths 2 pi 2^{-k},
/// k = 0..max_depth, centers at all multiples of half the length.
ScanResult window_scan(const MeasureSpec& mu, const ScanConfig& config);

/// mu(S(I)).
double window_mass(const MeasureSpec& mu, const Arc& arc);

}  // namespace modelspace
