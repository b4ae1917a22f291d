#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "modelspace/inner.hpp"

namespace modelspace {

/// Equispaced trapezoidal rule for the normalized measure m on the circle.
class QuadratureRule {
 public:
  explicit QuadratureRule(std::size_t node_count = 2048);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  double weight() const { return 1.0 / static_cast<double>(nodes_.size()); }

 private:
  std::vector<double> nodes_;
};

using CircleFunction = std::function<Complex(double)>;

/// (1/n) sum_j f(node_j). Throws NumericalError("non-finite integrand").
Complex integrate_circle(const CircleFunction& f, const QuadratureRule& rule);

/// Doubles the node count from `initial_nodes` until two successive results
/// agree within `tolerance`; caps at 2^20 nodes. For integrands with jumps.
Complex integrate_circle_adaptive(const CircleFunction& f, std::size_t initial_nodes = 2048,
                                  double tolerance = 1e-8);

/// Integral over the angle interval [start, start + length] against dm =
/// d theta / 2 pi, by adaptive Gauss-Legendre. The integrand returns a vector
/// of fixed size; all components are integrated together.
std::vector<Complex> integrate_arc(const std::function<void(double, std::span<Complex>)>& f,
                                   std::size_t components, double start, double length,
                                   double tolerance = 1e-13);

/// Scalar convenience overload of integrate_arc.
Complex integrate_arc(const CircleFunction& f, double start, double length, double tolerance = 1e-13);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(std::size_t order);

/// Dense Hermitian matrix, row-major.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(std::size_t dimension = 1);
  HermitianMatrix(std::size_t dimension, std::vector<Complex> entries);

  static HermitianMatrix identity(std::size_t dimension);

  std::size_t dimension() const { return n_; }
  Complex& operator()(std::size_t row, std::size_t col) { return a_[row * n_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return a_[row * n_ + col]; }
  const std::vector<Complex>& entries() const { return a_; }

  double frobenius_norm() const;
  /// max_{jk} |a_jk - conj(a_kj)|.
  double asymmetry() const;

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double scale);

 private:
  std::size_t n_;
  std::vector<Complex> a_;
};

struct EigenDecomposition {
  std::vector<double> values;                 // ascending
  std::vector<std::vector<Complex>> vectors;  // vectors[k] pairs with values[k]
};

/// Cyclic complex Jacobi. Throws PreconditionError("not Hermitian") when the
/// input deviates from Hermitian symmetry by more than 1e-12 (relative).
EigenDecomposition hermitian_eigen(const HermitianMatrix& a);

/// Eigenvalues only, ascending.
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a);

/// Solutions of Theta(e^{i theta}) = alpha on the circle, for a finite
/// Blaschke product of degree n: exactly n angles in [0, 2 pi), strictly
/// increasing, each with residual |Theta - alpha| <= 1e-10.
std::vector<double> unimodular_roots(const InnerFunction& theta, Complex alpha);

/// Roots of the polynomial sum_k coeffs[k] z^k (Aberth iteration followed by
/// Newton polishing). Leading coefficient must be non-zero.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

/// Least-squares solution of the dense system rows x = rhs (row-major,
/// rows.size() == m * n) via Householder QR with column equilibration.
/// Throws NumericalError when the system is numerically rank deficient.
std::vector<Complex> least_squares(std::size_t m, std::size_t n, std::vector<Complex> rows,
                                   std::vector<Complex> rhs, double rank_tolerance = 1e-12);

}  // namespace modelspace
