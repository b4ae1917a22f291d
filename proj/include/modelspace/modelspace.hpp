#pragma once

#include <vector>

#include "modelspace/inner.hpp"

namespace modelspace {

/// Takenaka-Malmquist orthonormal basis of (B H^2)^perp for a finite
/// Blaschke product B with zeros a_1, ..., a_n (repeated by multiplicity):
///
///   e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} b_{a_j}(z).
class ModelBasis {
 public:
  explicit ModelBasis(InnerFunction generator);

  const InnerFunction& generator() const { return generator_; }
  const std::vector<Complex>& zeros() const { return zeros_; }
  std::size_t dimension() const { return zeros_.size(); }

  /// (e_1(z), ..., e_n(z)). Throws PreconditionError at a pole.
  std::vector<Complex> values(Complex z) const;
  void values(Complex z, std::vector<Complex>& out) const;

 private:
  InnerFunction generator_;
  std::vector<Complex> zeros_;
};

/// Element of a finite-dimensional model space: coordinates in the TM basis.
struct ModelElement {
  ModelBasis basis;
  std::vector<Complex> coefficients;

  ModelElement(ModelBasis b, std::vector<Complex> c);

  /// ||f||_2, by Parseval in the orthonormal basis.
  double norm() const;
};

/// TM basis for B. Throws PreconditionError when B has a singular part.
ModelBasis build_basis(const InnerFunction& b);

/// f(z) = sum_k c_k e_k(z).
Complex evaluate_element(const ModelElement& f, Complex z);

/// Reproducing kernel k_lambda(z) = (1 - conj(Theta(lambda)) Theta(z)) / (1 - conj(lambda) z).
/// lambda may be interior or unimodular; a unimodular lambda needs a finite
/// angular derivative there.
Complex kernel_eval(const InnerFunction& theta, Complex lambda, Complex z);

/// ||k_lambda||_2^2: (1 - |Theta(lambda)|^2)/(1 - |lambda|^2) inside, |Theta'(lambda)| on the circle.
double kernel_norm_squared(const InnerFunction& theta, Complex lambda);

/// Coordinates of k_lambda in the basis: conj(e_k(lambda)).
ModelElement kernel_element(const ModelBasis& basis, Complex lambda);

/// <f, g> in H^2.
Complex inner_product(const ModelElement& f, const ModelElement& g);

/// Crofoot transform U f = sqrt(1 - |a|^2) f / (1 - conj(a) Theta), a unitary
/// map onto the model space of phi_a o Theta. Coordinates in the target basis
/// come from least-squares interpolation at 2n nodes on |z| = 1/2.
ModelElement crofoot(const InnerFunction& theta, Complex a, const ModelElement& f);

}  // namespace modelspace
