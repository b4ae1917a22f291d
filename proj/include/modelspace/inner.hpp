#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace modelspace {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A zero of a Blaschke product, repeated `multiplicity` times.
struct BlaschkeZero {
  Complex location;
  int multiplicity = 1;

  friend bool operator==(const BlaschkeZero&, const BlaschkeZero&) = default;
};

/// A point mass of the singular measure, at boundary angle `angle` (radians).
struct SingularAtom {
  double angle = 0.0;
  double mass = 0.0;

  friend bool operator==(const SingularAtom&, const SingularAtom&) = default;
};

/// Inner function e^{i phase} * B * S, with B a finite Blaschke product and S
/// a singular inner function whose measure is a finite sum of atoms.
///
/// Each Blaschke factor is normalized as (|a|/a)(a - z)/(1 - conj(a) z), so
/// that it is real and positive at the origin; a zero at the origin
/// contributes the factor z. S(z) = exp(-sum_j mass_j (zeta_j + z)/(zeta_j - z)).
///
/// Instances are immutable. Infinite products are represented by truncations;
/// `truncation_level` records the level used (0 when the object is exact).
class InnerFunction {
 public:
  InnerFunction() = default;
  InnerFunction(double phase, std::vector<BlaschkeZero> zeros, std::vector<SingularAtom> atoms = {},
                int truncation_level = 0);

  /// Blaschke product with simple zeros at `zeros`.
  static InnerFunction blaschke(const std::vector<Complex>& zeros, double phase = 0.0);
  /// z^n.
  static InnerFunction power(int n);
  /// exp(-mass (zeta + z)/(zeta - z)) with zeta = e^{i angle}.
  static InnerFunction singular_atom(double angle, double mass);

  double phase() const { return phase_; }
  const std::vector<BlaschkeZero>& zeros() const { return zeros_; }
  const std::vector<SingularAtom>& singular_atoms() const { return atoms_; }
  int truncation_level() const { return truncation_level_; }

  /// Sum of multiplicities.
  int degree() const;
  bool is_finite_blaschke() const { return atoms_.empty(); }
  /// Zeros listed with repetition, in serialization order.
  std::vector<Complex> zero_sequence() const;

  /// Theta(z). Interior points, or boundary points off the singular atoms.
  Complex operator()(Complex z) const;

  /// Pointwise product Theta * Psi (zeros and atoms concatenated, phases added).
  InnerFunction operator*(const InnerFunction& other) const;
  /// e^{i delta} Theta.
  InnerFunction rotated(double delta) const;

  friend bool operator==(const InnerFunction&, const InnerFunction&) = default;

 private:
  double phase_ = 0.0;
  std::vector<BlaschkeZero> zeros_;
  std::vector<SingularAtom> atoms_;
  int truncation_level_ = 0;
};

/// Normalized Blaschke factor b_a(z).
Complex blaschke_factor(Complex a, Complex z);

/// Theta(z); throws PreconditionError ("essential singularity") at a singular
/// atom or outside the closed disk.
Complex eval(const InnerFunction& theta, Complex z);

/// |Theta(z)| without phases: prod |a - z|/|1 - conj(a) z| times exp(-sum mass P_z(zeta)).
/// Cheaper than |eval(theta, z)| for long products.
double modulus(const InnerFunction& theta, Complex z);

/// Theta(e^{i angle}).
Complex eval_boundary(const InnerFunction& theta, double angle);

/// Ahern-Clark sum: sum_n (1-|z_n|^2)/|xi - z_n|^2 + 2 sum_j mass_j/|xi - zeta_j|^2.
/// Equals |Theta'(xi)| when finite; +infinity at a singular atom.
double angular_derivative_modulus(const InnerFunction& theta, double angle);

/// Continuous (unwrapped) argument of Theta(e^{i angle}) for a finite
/// Blaschke product. Strictly increasing; gains 2 pi * degree per turn.
double boundary_argument(const InnerFunction& theta, double angle);

/// Involutive disk automorphism phi_a(z) = (a - z)/(1 - conj(a) z).
Complex mobius(Complex a, Complex z);

/// phi_lambda o Theta as a Blaschke product of the same degree.
InnerFunction frostman_shift(const InnerFunction& theta, Complex lambda);

/// Grid estimate (superset) of the boundary spectrum: grid angles where deep
/// radial probes see |Theta| < 1/2, together with grid cells holding zeros
/// closer to the circle than `resolution` and the singular atoms.
std::vector<double> spectrum_estimate(const InnerFunction& theta, double resolution);

/// Reduces an angle to [0, 2 pi).
double wrap_angle(double angle);

}  // namespace modelspace
