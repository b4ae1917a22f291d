#pragma once

#include <vector>

#include "modelspace/arc.hpp"
#include "modelspace/inner.hpp"
#include "modelspace/measure.hpp"
#include "modelspace/modelspace.hpp"

namespace modelspace {

/// Clark measure sigma_B^alpha of a finite Blaschke product: atoms at the
/// solutions of B(xi) = alpha with masses 1/|B'(xi)|.
MeasureSpec clark_measure(const InnerFunction& b, Complex alpha);

/// Poisson kernel P_z(e^{i t}) = (1 - |z|^2)/|e^{i t} - z|^2.
double poisson_kernel(Complex z, double angle);

/// int_arc P_z dm, in closed form.
double poisson_arc(Complex z, const Arc& arc);

/// int_arc (zeta + z)/(zeta - z) dm(zeta), in closed form.
Complex herglotz_arc(Complex z, const Arc& arc);

/// int P_z d mu for a measure carried by the circle.
double poisson_transform(const MeasureSpec& mu, Complex z);

/// Herglotz integral H(z) = int (zeta + z)/(zeta - z) d mu.
Complex herglotz_transform(const MeasureSpec& mu, Complex z);

/// The function b with (1 + b)/(1 - b) = H, i.e. b = (H - 1)/(H + 1).
Complex herglotz_inversion(const MeasureSpec& mu, Complex z);

/// omega_b^alpha h = (1 - conj(alpha) b) C_sigma(h), for h given by its values
/// on the atoms of clark_measure(b, alpha) (in the same order). Since each
/// summand is a multiple of a boundary kernel, the coordinates are exact.
ModelElement cauchy_embed(const InnerFunction& b, Complex alpha, const std::vector<Complex>& h);

/// Preimage B^{-1}(A) on the circle as degree-many disjoint arcs, ordered by start angle.
std::vector<Arc> kapustin_partition(const InnerFunction& b, const Arc& a);

/// Default probe set: 10 radii 1 - 2^{-j} (j = 1..10) times 10 uniform angles.
std::vector<Complex> default_probes();

/// max over probes of |LHS - RHS| (1 - |z|^2) for Aleksandrov's identity
///   int |(1 - conj(Theta(z)) Theta(zeta))/(1 - conj(z) zeta)|^2 d mu(zeta) = (1 - |Theta(z)|^2)/(1 - |z|^2).
double aleksandrov_identity_residual(const InnerFunction& theta, const MeasureSpec& mu,
                                     const std::vector<Complex>& probes);

/// The same quantity at a single probe (signed: LHS - RHS, times 1 - |z|^2).
double aleksandrov_identity_defect(const InnerFunction& theta, const MeasureSpec& mu, Complex z);

}  // namespace modelspace
