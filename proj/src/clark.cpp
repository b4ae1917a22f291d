#include "modelspace/clark.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "modelspace/error.hpp"
#include "modelspace/numerics.hpp"

namespace modelspace {

namespace {

// Antiderivative of P_z dm in the variable u = t - arg z, continuous on the
// real line and gaining exactly 1 per turn.
double poisson_antiderivative(double k, double u) {
  const double turns = std::floor((u + std::numbers::pi) / kTwoPi);
  const double v = u - turns * kTwoPi;  // in [-pi, pi)
  return turns + std::atan2(k * std::sin(0.5 * v), std::cos(0.5 * v)) / std::numbers::pi;
}

void require_boundary(const MeasureSpec& mu) {
  if (!mu.is_boundary()) throw PreconditionError("Poisson transform requires boundary measure");
}

void require_interior(Complex z) {
  if (!(std::abs(z) < 1.0)) throw PreconditionError("transform point must lie in the open disk");
}

}  // namespace

MeasureSpec clark_measure(const InnerFunction& b, Complex alpha) {
  const auto roots = unimodular_roots(b, alpha);
  std::vector<Atom> atoms;
  atoms.reserve(roots.size());
  for (double t : roots) atoms.push_back({std::polar(1.0, t), 1.0 / angular_derivative_modulus(b, t)});
  return MeasureSpec(std::move(atoms), {});
}

double poisson_kernel(Complex z, double angle) {
  return (1.0 - std::norm(z)) / std::norm(std::polar(1.0, angle) - z);
}

double poisson_arc(Complex z, const Arc& arc) {
  require_interior(z);
  if (arc.is_full()) return 1.0;
  const double r = std::abs(z);
  const double k = (1.0 + r) / (1.0 - r);
  const double phi = r == 0.0 ? 0.0 : std::arg(z);
  const double u0 = arc.start() - phi;
  return poisson_antiderivative(k, u0 + arc.length()) - poisson_antiderivative(k, u0);
}

Complex herglotz_arc(Complex z, const Arc& arc) {
  const double harmonic = poisson_arc(z, arc);
  if (arc.is_full()) return harmonic;
  const double near = std::abs(std::polar(1.0, arc.start()) - z);
  const double far = std::abs(std::polar(1.0, arc.end()) - z);
  return {harmonic, -std::log(far / near) / std::numbers::pi};
}

double poisson_transform(const MeasureSpec& mu, Complex z) {
  require_boundary(mu);
  require_interior(z);
  double sum = 0.0;
  for (const auto& a : mu.atoms()) sum += a.mass * poisson_kernel(z, std::arg(a.location));
  for (const auto& p : mu.density_pieces()) sum += p.density * poisson_arc(z, p.arc);
  return sum;
}

Complex herglotz_transform(const MeasureSpec& mu, Complex z) {
  require_boundary(mu);
  require_interior(z);
  Complex sum(0.0);
  for (const auto& a : mu.atoms()) {
    const Complex zeta = a.location / std::abs(a.location);
    sum += a.mass * (zeta + z) / (zeta - z);
  }
  for (const auto& p : mu.density_pieces()) sum += p.density * herglotz_arc(z, p.arc);
  return sum;
}

Complex herglotz_inversion(const MeasureSpec& mu, Complex z) {
  const Complex h = herglotz_transform(mu, z);
  return (h - 1.0) / (h + 1.0);
}

ModelElement cauchy_embed(const InnerFunction& b, Complex alpha, const std::vector<Complex>& h) {
  const MeasureSpec sigma = clark_measure(b, alpha);
  if (h.size() != sigma.atoms().size()) throw PreconditionError("h must have one value per Clark atom");
  ModelBasis basis(b);
  std::vector<Complex> coeffs(basis.dimension(), Complex(0.0));
  std::vector<Complex> e;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const Atom& atom = sigma.atoms()[j];
    basis.values(atom.location, e);
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] += h[j] * atom.mass * std::conj(e[k]);
  }
  return ModelElement(std::move(basis), std::move(coeffs));
}

std::vector<Arc> kapustin_partition(const InnerFunction& b, const Arc& a) {
  if (!b.is_finite_blaschke()) throw PreconditionError("argument tracking requires finite Blaschke");
  if (a.is_full()) return {Arc::full_circle()};
  const auto starts = unimodular_roots(b, std::polar(1.0, a.start()));
  const auto ends = unimodular_roots(b, std::polar(1.0, a.end()));
  std::vector<Arc> out;
  out.reserve(starts.size());
  for (double s : starts) {
    // First endpoint counterclockwise from s.
    double best = kTwoPi;
    for (double e : ends) {
      double d = e - s;
      if (d <= 0.0) d += kTwoPi;
      best = std::min(best, d);
    }
    out.emplace_back(s, best);
  }
  return out;
}

std::vector<Complex> default_probes() {
  std::vector<Complex> probes;
  probes.reserve(100);
  for (int j = 1; j <= 10; ++j)
    for (int k = 0; k < 10; ++k) probes.push_back(std::polar(1.0 - std::ldexp(1.0, -j), kTwoPi * k / 10.0));
  return probes;
}

double aleksandrov_identity_defect(const InnerFunction& theta, const MeasureSpec& mu, Complex z) {
  if (!mu.is_boundary()) throw PreconditionError("isometric embedding test requires a boundary measure");
  require_interior(z);
  const Complex tz = eval(theta, z);
  auto integrand = [&](Complex zeta) {
    return std::norm((1.0 - std::conj(tz) * eval(theta, zeta)) / (1.0 - std::conj(z) * zeta));
  };
  double lhs = 0.0;
  for (const auto& a : mu.atoms()) lhs += a.mass * integrand(a.location / std::abs(a.location));
  for (const auto& p : mu.density_pieces()) {
    lhs += p.density *
           integrate_arc([&](double t) { return Complex(integrand(std::polar(1.0, t))); }, p.arc.start(),
                         p.arc.length(), 1e-12)
               .real();
  }
  const double rhs = (1.0 - std::norm(tz)) / (1.0 - std::norm(z));
  return (lhs - rhs) * (1.0 - std::norm(z));
}

double aleksandrov_identity_residual(const InnerFunction& theta, const MeasureSpec& mu,
                                     const std::vector<Complex>& probes) {
  double worst = 0.0;
  for (Complex z : probes) worst = std::max(worst, std::abs(aleksandrov_identity_defect(theta, mu, z)));
  return worst;
}

}  // namespace modelspace
