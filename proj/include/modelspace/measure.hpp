#pragma once

#include <vector>

#include "modelspace/arc.hpp"
#include "modelspace/inner.hpp"

namespace modelspace {

/// Point mass at `location` in the closed disk.
struct Atom {
  Complex location;
  double mass = 0.0;
};

/// Constant density (with respect to m) on a boundary arc.
struct DensityPiece {
  Arc arc;
  double density = 0.0;
};

/// Finite positive measure on the closed disk: finitely many atoms plus a
/// piecewise-constant boundary density on pairwise disjoint arcs.
class MeasureSpec {
 public:
  MeasureSpec() = default;
  MeasureSpec(std::vector<Atom> atoms, std::vector<DensityPiece> pieces);

  /// Normalized Lebesgue measure c m.
  static MeasureSpec lebesgue(double density = 1.0);
  /// chi_Sigma dm.
  static MeasureSpec indicator(const std::vector<Arc>& arcs);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityPiece>& density_pieces() const { return pieces_; }

  double total_mass() const;
  /// True when every atom lies on the unit circle (within 1e-12).
  bool is_boundary() const;

  MeasureSpec scaled(double factor) const;
  /// Sum of two measures. Density pieces are concatenated and must stay disjoint.
  MeasureSpec operator+(const MeasureSpec& other) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
};

}  // namespace modelspace
