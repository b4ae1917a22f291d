#include "modelspace/modelspace.hpp"

#include <cmath>
#include <limits>

#include "modelspace/error.hpp"
#include "modelspace/numerics.hpp"

namespace modelspace {

ModelBasis::ModelBasis(InnerFunction generator)
    : generator_(std::move(generator)), zeros_(generator_.zero_sequence()) {
  if (!generator_.is_finite_blaschke())
    throw PreconditionError("finite-dimensional basis requires finite Blaschke");
  if (zeros_.empty()) throw PreconditionError("model space basis needs degree >= 1");
}

void ModelBasis::values(Complex z, std::vector<Complex>& out) const {
  out.resize(zeros_.size());
  Complex partial(1.0);
  for (std::size_t k = 0; k < zeros_.size(); ++k) {
    const Complex a = zeros_[k];
    const Complex denom = 1.0 - std::conj(a) * z;
    if (std::abs(denom) < 1e-300) throw PreconditionError("evaluation at a basis pole");
    out[k] = std::sqrt(1.0 - std::norm(a)) / denom * partial;
    partial *= blaschke_factor(a, z);
  }
}

std::vector<Complex> ModelBasis::values(Complex z) const {
  std::vector<Complex> out;
  values(z, out);
  return out;
}

ModelElement::ModelElement(ModelBasis b, std::vector<Complex> c) : basis(std::move(b)), coefficients(std::move(c)) {
  if (coefficients.size() != basis.dimension()) throw PreconditionError("coefficient count does not match basis");
}

double ModelElement::norm() const {
  double s = 0.0;
  for (auto c : coefficients) s += std::norm(c);
  return std::sqrt(s);
}

ModelBasis build_basis(const InnerFunction& b) { return ModelBasis(b); }

Complex evaluate_element(const ModelElement& f, Complex z) {
  const auto e = f.basis.values(z);
  Complex sum(0.0);
  for (std::size_t k = 0; k < e.size(); ++k) sum += f.coefficients[k] * e[k];
  return sum;
}

namespace {

bool on_circle(Complex lambda) { return std::abs(std::abs(lambda) - 1.0) <= 1e-12; }

void check_kernel_point(const InnerFunction& theta, Complex lambda) {
  const double r = std::abs(lambda);
  if (r > 1.0 + 1e-12) throw PreconditionError("kernel point outside the closed disk");
  if (r >= 1.0 - 1e-12 && !on_circle(lambda)) throw PreconditionError("kernel point too close to the circle");
  if (on_circle(lambda) && !std::isfinite(angular_derivative_modulus(theta, std::arg(lambda))))
    throw PreconditionError("kernel undefined at boundary point");
}

}  // namespace

Complex kernel_eval(const InnerFunction& theta, Complex lambda, Complex z) {
  check_kernel_point(theta, lambda);
  if (on_circle(lambda)) lambda /= std::abs(lambda);
  if (std::abs(z - lambda) <= 1e-14) return kernel_norm_squared(theta, lambda);
  const Complex denom = 1.0 - std::conj(lambda) * z;
  if (std::abs(denom) < 1e-300) throw PreconditionError("kernel pole");
  return (1.0 - std::conj(eval(theta, lambda)) * eval(theta, z)) / denom;
}

double kernel_norm_squared(const InnerFunction& theta, Complex lambda) {
  check_kernel_point(theta, lambda);
  if (on_circle(lambda)) return angular_derivative_modulus(theta, std::arg(lambda));
  return (1.0 - std::norm(eval(theta, lambda))) / (1.0 - std::norm(lambda));
}

ModelElement kernel_element(const ModelBasis& basis, Complex lambda) {
  check_kernel_point(basis.generator(), lambda);
  auto e = basis.values(lambda);
  for (auto& x : e) x = std::conj(x);
  return ModelElement(basis, std::move(e));
}

Complex inner_product(const ModelElement& f, const ModelElement& g) {
  if (f.coefficients.size() != g.coefficients.size()) throw PreconditionError("dimension mismatch");
  Complex s(0.0);
  for (std::size_t k = 0; k < f.coefficients.size(); ++k) s += f.coefficients[k] * std::conj(g.coefficients[k]);
  return s;
}

ModelElement crofoot(const InnerFunction& theta, Complex a, const ModelElement& f) {
  if (!(std::abs(a) < 1.0)) throw PreconditionError("crofoot parameter must satisfy |a| < 1");
  if (!theta.is_finite_blaschke()) throw PreconditionError("crofoot transform requires finite Blaschke");
  if (!(f.basis.generator() == theta)) throw PreconditionError("element does not belong to the model space of theta");
  if (a == Complex(0.0)) return ModelElement(ModelBasis(theta.rotated(std::numbers::pi)), f.coefficients);

  ModelBasis target(frostman_shift(theta, a));
  const std::size_t n = target.dimension();
  const std::size_t nodes = 2 * n;
  const double scale = std::sqrt(1.0 - std::norm(a));
  std::vector<Complex> rows(nodes * n);
  std::vector<Complex> rhs(nodes);
  std::vector<Complex> e;
  for (std::size_t j = 0; j < nodes; ++j) {
    const Complex z = std::polar(0.5, kTwoPi * static_cast<double>(j) / static_cast<double>(nodes));
    target.values(z, e);
    for (std::size_t k = 0; k < n; ++k) rows[j * n + k] = e[k];
    rhs[j] = scale * evaluate_element(f, z) / (1.0 - std::conj(a) * eval(theta, z));
  }
  try {
    return ModelElement(target, least_squares(nodes, n, std::move(rows), std::move(rhs), 1e-13));
  } catch (const NumericalError&) {
    throw NumericalError("resample nodes");
  }
}

}  // namespace modelspace
