#include "modelspace/inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "modelspace/error.hpp"
#include "modelspace/numerics.hpp"

namespace modelspace {

namespace {

constexpr double kBoundaryTolerance = 1e-12;

std::vector<BlaschkeZero> merge_zeros(std::vector<BlaschkeZero> zeros) {
  std::vector<BlaschkeZero> out;
  for (const auto& z : zeros) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const BlaschkeZero& o) { return o.location == z.location; });
    if (it != out.end()) {
      it->multiplicity += z.multiplicity;
    } else {
      out.push_back(z);
    }
  }
  return out;
}

std::vector<SingularAtom> merge_atoms(std::vector<SingularAtom> atoms) {
  std::vector<SingularAtom> out;
  for (const auto& a : atoms) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SingularAtom& o) {
      return wrap_angle(o.angle) == wrap_angle(a.angle);
    });
    if (it != out.end()) {
      it->mass += a.mass;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

// Unit factor u with b_a(z) = u (a - z)/(1 - conj(a) z); u = -1 for a = 0.
Complex factor_unit(Complex a) { return a == Complex(0.0) ? Complex(-1.0) : std::abs(a) / a; }

}  // namespace

double wrap_angle(double angle) {
  double t = std::fmod(angle, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

InnerFunction::InnerFunction(double phase, std::vector<BlaschkeZero> zeros,
                             std::vector<SingularAtom> atoms, int truncation_level)
    : phase_(phase), zeros_(std::move(zeros)), atoms_(std::move(atoms)),
      truncation_level_(truncation_level) {
  if (!std::isfinite(phase_)) throw PreconditionError("phase must be finite");
  for (const auto& z : zeros_) {
    if (!(std::abs(z.location) < 1.0)) throw PreconditionError("Blaschke zero must satisfy |a| < 1");
    if (z.multiplicity < 1) throw PreconditionError("zero multiplicity must be positive");
  }
  for (const auto& a : atoms_) {
    if (!(a.mass > 0.0) || !std::isfinite(a.mass))
      throw PreconditionError("singular atom mass must be positive");
    if (!std::isfinite(a.angle)) throw PreconditionError("singular atom angle must be finite");
  }
  if (truncation_level_ < 0) throw PreconditionError("truncation level must be non-negative");
}

InnerFunction InnerFunction::blaschke(const std::vector<Complex>& zeros, double phase) {
  std::vector<BlaschkeZero> z;
  z.reserve(zeros.size());
  for (auto a : zeros) z.push_back({a, 1});
  return InnerFunction(phase, std::move(z));
}

InnerFunction InnerFunction::power(int n) {
  if (n < 1) throw PreconditionError("power must be positive");
  return InnerFunction(0.0, {{Complex(0.0), n}});
}

InnerFunction InnerFunction::singular_atom(double angle, double mass) {
  return InnerFunction(0.0, {}, {{angle, mass}});
}

int InnerFunction::degree() const {
  int d = 0;
  for (const auto& z : zeros_) d += z.multiplicity;
  return d;
}

std::vector<Complex> InnerFunction::zero_sequence() const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(degree()));
  for (const auto& z : zeros_)
    for (int k = 0; k < z.multiplicity; ++k) out.push_back(z.location);
  return out;
}

Complex InnerFunction::operator()(Complex z) const { return eval(*this, z); }

InnerFunction InnerFunction::operator*(const InnerFunction& other) const {
  auto zeros = zeros_;
  zeros.insert(zeros.end(), other.zeros_.begin(), other.zeros_.end());
  auto atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  return InnerFunction(phase_ + other.phase_, merge_zeros(std::move(zeros)),
                       merge_atoms(std::move(atoms)),
                       std::max(truncation_level_, other.truncation_level_));
}

InnerFunction InnerFunction::rotated(double delta) const {
  return InnerFunction(phase_ + delta, zeros_, atoms_, truncation_level_);
}

Complex blaschke_factor(Complex a, Complex z) {
  if (a == Complex(0.0)) return z;
  return (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
}

Complex eval(const InnerFunction& theta, Complex z) {
  const double r = std::abs(z);
  if (!(r <= 1.0 + kBoundaryTolerance)) throw PreconditionError("evaluation point outside the closed disk");
  Complex value = std::polar(1.0, theta.phase());
  for (const auto& zero : theta.zeros()) {
    Complex f = blaschke_factor(zero.location, z);
    for (int k = 0; k < zero.multiplicity; ++k) value *= f;
  }
  if (!theta.singular_atoms().empty()) {
    Complex exponent(0.0);
    for (const auto& atom : theta.singular_atoms()) {
      const Complex zeta = std::polar(1.0, atom.angle);
      if (std::abs(zeta - z) <= kBoundaryTolerance) throw PreconditionError("essential singularity");
      exponent -= atom.mass * (zeta + z) / (zeta - z);
    }
    value *= std::exp(exponent);
  }
  return value;
}

double modulus(const InnerFunction& theta, Complex z) {
  const double r2 = std::norm(z);
  if (!(r2 <= (1.0 + kBoundaryTolerance) * (1.0 + kBoundaryTolerance)))
    throw PreconditionError("evaluation point outside the closed disk");
  double ratio = 1.0;
  for (const auto& zero : theta.zeros()) {
    const Complex a = zero.location;
    double f = std::norm(a - z) / std::norm(1.0 - std::conj(a) * z);
    for (int k = 0; k < zero.multiplicity; ++k) ratio *= f;
  }
  double exponent = 0.0;
  for (const auto& atom : theta.singular_atoms()) {
    const double d2 = std::norm(std::polar(1.0, atom.angle) - z);
    if (d2 <= kBoundaryTolerance * kBoundaryTolerance) throw PreconditionError("essential singularity");
    exponent -= atom.mass * (1.0 - r2) / d2;
  }
  return std::sqrt(ratio) * std::exp(exponent);
}

Complex eval_boundary(const InnerFunction& theta, double angle) {
  return eval(theta, std::polar(1.0, angle));
}

double angular_derivative_modulus(const InnerFunction& theta, double angle) {
  const Complex xi = std::polar(1.0, angle);
  double sum = 0.0;
  for (const auto& zero : theta.zeros()) {
    const double a2 = std::norm(zero.location);
    sum += zero.multiplicity * (1.0 - a2) / std::norm(xi - zero.location);
  }
  for (const auto& atom : theta.singular_atoms()) {
    const double d2 = std::norm(xi - std::polar(1.0, atom.angle));
    if (d2 <= kBoundaryTolerance * kBoundaryTolerance) return std::numeric_limits<double>::infinity();
    sum += 2.0 * atom.mass / d2;
  }
  return sum;
}

double boundary_argument(const InnerFunction& theta, double angle) {
  if (!theta.is_finite_blaschke())
    throw PreconditionError("argument tracking requires finite Blaschke");
  const Complex xi = std::polar(1.0, angle);
  double arg = theta.phase();
  for (const auto& zero : theta.zeros()) {
    const Complex a = zero.location;
    double term = angle;
    if (a != Complex(0.0)) {
      const Complex w = 1.0 - std::conj(a) * xi;
      term += std::arg(std::abs(a) / a) + std::numbers::pi - 2.0 * std::atan2(w.imag(), w.real());
    }
    arg += zero.multiplicity * term;
  }
  return arg;
}

Complex mobius(Complex a, Complex z) {
  if (!(std::abs(a) < 1.0)) throw PreconditionError("mobius parameter must satisfy |a| < 1");
  return (a - z) / (1.0 - std::conj(a) * z);
}

InnerFunction frostman_shift(const InnerFunction& theta, Complex lambda) {
  if (!theta.is_finite_blaschke()) throw PreconditionError("frostman shift requires a finite Blaschke product");
  if (!(std::abs(lambda) < 1.0)) throw PreconditionError("frostman shift requires |lambda| < 1");
  if (lambda == Complex(0.0)) return theta.rotated(std::numbers::pi);

  // Theta = e^{i gamma} P / Q with P = prod u_k (a_k - z), Q = prod (1 - conj(a_k) z);
  // solve e^{i gamma} P - lambda Q = 0.
  std::vector<Complex> p{std::polar(1.0, theta.phase())};
  std::vector<Complex> q{Complex(1.0)};
  auto multiply_linear = [](std::vector<Complex>& poly, Complex c0, Complex c1) {
    std::vector<Complex> out(poly.size() + 1, Complex(0.0));
    for (std::size_t k = 0; k < poly.size(); ++k) {
      out[k] += poly[k] * c0;
      out[k + 1] += poly[k] * c1;
    }
    poly = std::move(out);
  };
  for (Complex a : theta.zero_sequence()) {
    const Complex u = factor_unit(a);
    multiply_linear(p, u * a, -u);
    multiply_linear(q, Complex(1.0), -std::conj(a));
  }
  std::vector<Complex> poly(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) poly[k] = p[k] - lambda * q[k];

  std::vector<Complex> roots = polynomial_roots(poly);
  for (auto& r : roots) {
    const double m = std::abs(r);
    if (m > 1.0 + 1e-9) throw NumericalError("root localization failed");
    if (m >= 1.0) r *= (1.0 - 1e-15) / m;
  }
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    return std::arg(x) != std::arg(y) ? std::arg(x) < std::arg(y) : std::abs(x) < std::abs(y);
  });

  InnerFunction unphased = InnerFunction::blaschke(roots);
  // Fix the phase at the first reference point where the product is not small.
  const Complex refs[] = {Complex(0.0), Complex(0.5), Complex(0.0, 0.5), Complex(-0.5), Complex(0.0, -0.5)};
  for (Complex z0 : refs) {
    const Complex prod = eval(unphased, z0);
    if (std::abs(prod) > 1e-3) {
      const Complex target = mobius(lambda, eval(theta, z0));
      return InnerFunction(std::arg(target / prod), unphased.zeros());
    }
  }
  throw NumericalError("root localization failed");
}

std::vector<double> spectrum_estimate(const InnerFunction& theta, double resolution) {
  if (!(resolution > 0.0)) throw PreconditionError("resolution must be positive");
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::round(kTwoPi / resolution)));
  const double step = kTwoPi / static_cast<double>(cells);
  auto snap = [&](double angle) {
    return static_cast<std::size_t>(std::llround(wrap_angle(angle) / step)) % cells;
  };

  std::set<std::size_t> flagged;
  // Probes sit at depth <= step^2/4, where a point one cell away from a
  // singular atom of unit mass already sees |Theta| > e^{-1/2}.
  const int first_level = static_cast<int>(std::ceil(std::log2(4.0 / (step * step))));
  for (std::size_t i = 0; i < cells; ++i) {
    const double angle = static_cast<double>(i) * step;
    double smallest = std::numeric_limits<double>::infinity();
    for (int j = first_level; j <= first_level + 8; ++j) {
      const double r = 1.0 - std::ldexp(1.0, -j);
      smallest = std::min(smallest, std::abs(eval(theta, std::polar(r, angle))));
    }
    if (smallest < 0.5) flagged.insert(i);
  }
  for (const auto& zero : theta.zeros()) {
    if (1.0 - std::abs(zero.location) < resolution) flagged.insert(snap(std::arg(zero.location)));
  }
  for (const auto& atom : theta.singular_atoms()) flagged.insert(snap(atom.angle));

  std::vector<double> out;
  out.reserve(flagged.size());
  for (auto i : flagged) out.push_back(static_cast<double>(i) * step);
  return out;
}

}  // namespace modelspace
