#include "modelspace/measure.hpp"

#include <cmath>

#include "modelspace/error.hpp"

namespace modelspace {

MeasureSpec::MeasureSpec(std::vector<Atom> atoms, std::vector<DensityPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
  for (const auto& a : atoms_) {
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw PreconditionError("atom mass must be positive");
    if (!(std::abs(a.location) <= 1.0 + 1e-12)) throw PreconditionError("atom outside the closed disk");
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].density >= 0.0) || !std::isfinite(pieces_[i].density))
      throw PreconditionError("density must be non-negative");
    for (std::size_t j = i + 1; j < pieces_.size(); ++j)
      if (pieces_[i].arc.overlap(pieces_[j].arc) > 1e-12)
        throw PreconditionError("density pieces must be pairwise disjoint");
  }
}

MeasureSpec MeasureSpec::lebesgue(double density) { return MeasureSpec({}, {{Arc::full_circle(), density}}); }

MeasureSpec MeasureSpec::indicator(const std::vector<Arc>& arcs) {
  std::vector<DensityPiece> pieces;
  pieces.reserve(arcs.size());
  for (const auto& a : arcs) pieces.push_back({a, 1.0});
  return MeasureSpec({}, std::move(pieces));
}

double MeasureSpec::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.mass;
  for (const auto& p : pieces_) total += p.density * p.arc.measure();
  return total;
}

bool MeasureSpec::is_boundary() const {
  for (const auto& a : atoms_)
    if (std::abs(std::abs(a.location) - 1.0) > 1e-12) return false;
  return true;
}

MeasureSpec MeasureSpec::scaled(double factor) const {
  if (!(factor > 0.0)) throw PreconditionError("scale factor must be positive");
  auto atoms = atoms_;
  for (auto& a : atoms) a.mass *= factor;
  auto pieces = pieces_;
  for (auto& p : pieces) p.density *= factor;
  return MeasureSpec(std::move(atoms), std::move(pieces));
}

MeasureSpec MeasureSpec::operator+(const MeasureSpec& other) const {
  auto atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  auto pieces = pieces_;
  pieces.insert(pieces.end(), other.pieces_.begin(), other.pieces_.end());
  return MeasureSpec(std::move(atoms), std::move(pieces));
}

}  // namespace modelspace
