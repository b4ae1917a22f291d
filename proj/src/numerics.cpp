#include "modelspace/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "modelspace/error.hpp"

namespace modelspace {

// ---------------------------------------------------------------------------
// Quadrature

QuadratureRule::QuadratureRule(std::size_t node_count) {
  if (node_count == 0) throw PreconditionError("quadrature needs at least one node");
  nodes_.resize(node_count);
  for (std::size_t j = 0; j < node_count; ++j)
    nodes_[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(node_count);
}

Complex integrate_circle(const CircleFunction& f, const QuadratureRule& rule) {
  Complex sum(0.0);
  for (double t : rule.nodes()) {
    const Complex v = f(t);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("non-finite integrand");
    sum += v;
  }
  return sum * rule.weight();
}

Complex integrate_circle_adaptive(const CircleFunction& f, std::size_t initial_nodes, double tolerance) {
  constexpr std::size_t kMaxNodes = std::size_t{1} << 20;
  std::size_t n = std::max<std::size_t>(initial_nodes, 1);
  Complex previous = integrate_circle(f, QuadratureRule(n));
  while (n < kMaxNodes) {
    // The doubled rule reuses the old nodes: only the midpoints are new.
    const std::size_t doubled = 2 * n;
    Complex mid(0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = kTwoPi * (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(doubled);
      const Complex v = f(t);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("non-finite integrand");
      mid += v;
    }
    const Complex current = 0.5 * previous + mid / static_cast<double>(doubled);
    n = doubled;
    if (std::abs(current - previous) <= tolerance) return current;
    previous = current;
  }
  return previous;
}

const GaussLegendre& gauss_legendre(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    auto rule = std::make_unique<GaussLegendre>();
    rule->nodes.resize(order);
    rule->weights.resize(order);
    const auto n = static_cast<double>(order);
    for (std::size_t i = 0; i < order; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
      double dp = 1.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= order; ++k) {
          const auto kk = static_cast<double>(k);
          const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
          p0 = p1;
          p1 = p2;
        }
        if (order == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      rule->nodes[i] = x;
      rule->weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    slot = std::move(rule);
  }
  return *slot;
}

std::vector<Complex> integrate_arc(const std::function<void(double, std::span<Complex>)>& f,
                                   std::size_t components, double start, double length,
                                   double tolerance) {
  std::vector<Complex> total(components, Complex(0.0));
  if (length <= 0.0) return total;
  const GaussLegendre& gl = gauss_legendre(12);
  std::vector<Complex> sample(components);

  auto rule = [&](double a, double b, std::vector<Complex>& out) {
    std::fill(out.begin(), out.end(), Complex(0.0));
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      f(mid + half * gl.nodes[i], sample);
      for (std::size_t c = 0; c < components; ++c) {
        if (!std::isfinite(sample[c].real()) || !std::isfinite(sample[c].imag()))
          throw NumericalError("non-finite integrand");
        out[c] += gl.weights[i] * half * sample[c];
      }
    }
  };
  auto max_norm = [](const std::vector<Complex>& v) {
    double m = 0.0;
    for (auto x : v) m = std::max(m, std::abs(x));
    return m;
  };

  struct Interval {
    double a, b;
    std::vector<Complex> estimate;
    int depth;
  };
  std::vector<Interval> stack;
  {
    Interval whole{start, start + length, std::vector<Complex>(components), 0};
    rule(whole.a, whole.b, whole.estimate);
    stack.push_back(std::move(whole));
  }
  std::vector<Complex> left(components), right(components), diff(components);
  while (!stack.empty()) {
    Interval iv = std::move(stack.back());
    stack.pop_back();
    const double m = 0.5 * (iv.a + iv.b);
    rule(iv.a, m, left);
    rule(m, iv.b, right);
    for (std::size_t c = 0; c < components; ++c) diff[c] = left[c] + right[c] - iv.estimate[c];
    const double scale = std::max(max_norm(left), max_norm(right));
    const double allowed = tolerance * std::max((iv.b - iv.a) / length, scale);
    if (max_norm(diff) <= allowed || iv.depth >= 48) {
      for (std::size_t c = 0; c < components; ++c) total[c] += left[c] + right[c];
      continue;
    }
    stack.push_back({m, iv.b, right, iv.depth + 1});
    stack.push_back({iv.a, m, left, iv.depth + 1});
  }
  for (auto& v : total) v /= kTwoPi;
  return total;
}

Complex integrate_arc(const CircleFunction& f, double start, double length, double tolerance) {
  auto out = integrate_arc([&](double t, std::span<Complex> v) { v[0] = f(t); }, 1, start, length, tolerance);
  return out[0];
}

// ---------------------------------------------------------------------------
// Hermitian matrices

HermitianMatrix::HermitianMatrix(std::size_t dimension) : n_(dimension), a_(dimension * dimension) {
  if (dimension == 0) throw PreconditionError("matrix dimension must be positive");
}

HermitianMatrix::HermitianMatrix(std::size_t dimension, std::vector<Complex> entries)
    : n_(dimension), a_(std::move(entries)) {
  if (dimension == 0) throw PreconditionError("matrix dimension must be positive");
  if (a_.size() != dimension * dimension) throw PreconditionError("entry count does not match dimension");
}

HermitianMatrix HermitianMatrix::identity(std::size_t dimension) {
  HermitianMatrix m(dimension);
  for (std::size_t i = 0; i < dimension; ++i) m(i, i) = 1.0;
  return m;
}

double HermitianMatrix::frobenius_norm() const {
  double s = 0.0;
  for (auto x : a_) s += std::norm(x);
  return std::sqrt(s);
}

double HermitianMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = j; k < n_; ++k)
      worst = std::max(worst, std::abs((*this)(j, k) - std::conj((*this)(k, j))));
  return worst;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  if (other.n_ != n_) throw PreconditionError("dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double scale) {
  for (auto& x : a_) x *= scale;
  return *this;
}

EigenDecomposition hermitian_eigen(const HermitianMatrix& input) {
  const std::size_t n = input.dimension();
  const double norm = input.frobenius_norm();
  if (input.asymmetry() > 1e-12 * std::max(1.0, norm)) throw PreconditionError("not Hermitian");

  // Work on the exactly Hermitian part.
  std::vector<Complex> a(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) a[j * n + k] = 0.5 * (input(j, k) + std::conj(input(k, j)));
  for (std::size_t j = 0; j < n; ++j) a[j * n + j] = a[j * n + j].real();
  std::vector<Complex> v(n * n, Complex(0.0));
  for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (j != k) s += std::norm(a[j * n + k]);
    return std::sqrt(s);
  };

  const double target = 1e-14 * std::max(norm, std::numeric_limits<double>::min());
  int sweep = 0;
  while (off_diagonal() > target) {
    if (++sweep > 100) throw NumericalError("Jacobi iteration did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a[p * n + q];
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const Complex phase = apq / g;  // e^{i phi}
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex ephi_conj = std::conj(phase);
        // R = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] acting on coordinates (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a[k * n + p];
          const Complex akq = a[k * n + q];
          a[k * n + p] = c * akp - s * ephi_conj * akq;
          a[k * n + q] = s * akp + c * ephi_conj * akq;
          const Complex vkp = v[k * n + p];
          const Complex vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * ephi_conj * vkq;
          v[k * n + q] = s * vkp + c * ephi_conj * vkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a[p * n + k];
          const Complex aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * phase * aqk;
          a[q * n + k] = s * apk + c * phase * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x].real() < a[y * n + y].real(); });
  EigenDecomposition out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (auto idx : order) {
    out.values.push_back(a[idx * n + idx].real());
    std::vector<Complex> vec(n);
    for (std::size_t k = 0; k < n; ++k) vec[k] = v[k * n + idx];
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a) { return hermitian_eigen(a).values; }

// ---------------------------------------------------------------------------
// Root finding

std::vector<double> unimodular_roots(const InnerFunction& theta, Complex alpha) {
  if (!theta.is_finite_blaschke()) throw PreconditionError("argument tracking requires finite Blaschke");
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12) throw PreconditionError("alpha must be unimodular");
  const int degree = theta.degree();
  if (degree == 0) return {};

  const std::size_t mesh = 64 * static_cast<std::size_t>(degree);
  std::vector<double> angle(mesh + 1), arg(mesh + 1);
  for (std::size_t i = 0; i <= mesh; ++i) {
    angle[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(mesh);
    arg[i] = boundary_argument(theta, angle[i]);
  }
  arg[mesh] = arg[0] + kTwoPi * degree;  // exact period keeps the cells a partition

  const double base = std::arg(alpha);
  const double first = std::ceil((arg[0] - base) / kTwoPi);
  std::vector<double> roots;
  roots.reserve(static_cast<std::size_t>(degree));
  std::size_t cell = 0;
  for (int k = 0; k < degree; ++k) {
    const double target = base + kTwoPi * (first + k);
    // Cells are half-open [arg_i, arg_{i+1}): a crossing on a mesh point is assigned to the cell it opens.
    while (cell + 1 < mesh && arg[cell + 1] <= target) ++cell;
    double lo = angle[cell];
    double hi = angle[cell + 1];
    double x = lo;
    if (arg[cell] != target) {
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (boundary_argument(theta, mid) <= target) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      x = 0.5 * (lo + hi);
      for (int it = 0; it < 3; ++it) {
        const double slope = angular_derivative_modulus(theta, x);
        const double next = x - (boundary_argument(theta, x) - target) / slope;
        if (!(next >= angle[cell] && next <= angle[cell + 1])) break;
        x = next;
      }
    }
    x = std::min(x, std::nextafter(kTwoPi, 0.0));
    if (std::abs(eval_boundary(theta, x) - alpha) > 1e-10) throw NumericalError("unimodular root residual too large");
    roots.push_back(x);
  }
  return roots;
}

namespace {

void horner(const std::vector<Complex>& c, Complex z, Complex& value, Complex& derivative) {
  value = c.back();
  derivative = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    derivative = derivative * z + value;
    value = value * z + c[k];
  }
}

}  // namespace

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  if (coeffs.size() < 2) return {};
  if (coeffs.back() == Complex(0.0)) throw PreconditionError("leading coefficient must be non-zero");
  const std::size_t n = coeffs.size() - 1;
  std::vector<Complex> monic(coeffs.size());
  for (std::size_t k = 0; k <= n; ++k) monic[k] = coeffs[k] / coeffs.back();
  if (n == 1) return {-monic[0]};

  double bound = 0.0;
  for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(monic[k]));
  const double radius = std::min(1.0 + bound, 2.0);
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = std::polar(radius * 0.9, kTwoPi * (static_cast<double>(i) + 0.25) / static_cast<double>(n) + 0.4);

  for (int iter = 0; iter < 1000; ++iter) {
    double largest_step = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex p, dp;
      horner(monic, z[i], p, dp);
      if (p == Complex(0.0)) continue;
      const Complex ratio = p / dp;
      Complex repulsion(0.0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      const Complex step = ratio / (1.0 - ratio * repulsion);
      z[i] -= step;
      largest_step = std::max(largest_step, std::abs(step) / std::max(1.0, std::abs(z[i])));
    }
    if (largest_step < 1e-15) break;
  }
  for (auto& r : z) {
    for (int it = 0; it < 3; ++it) {
      Complex p, dp;
      horner(monic, r, p, dp);
      if (dp == Complex(0.0) || p == Complex(0.0)) break;
      r -= p / dp;
    }
  }
  return z;
}

std::vector<Complex> least_squares(std::size_t m, std::size_t n, std::vector<Complex> a, std::vector<Complex> b,
                                   double rank_tolerance) {
  if (m < n || a.size() != m * n || b.size() != m) throw PreconditionError("least-squares shape mismatch");
  std::vector<double> scale(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(a[i * n + k]);
    scale[k] = std::sqrt(s);
    if (scale[k] == 0.0) throw NumericalError("rank-deficient least-squares system");
    for (std::size_t i = 0; i < m; ++i) a[i * n + k] /= scale[k];
  }
  std::vector<Complex> diag(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm_x = 0.0;
    for (std::size_t i = k; i < m; ++i) norm_x += std::norm(a[i * n + k]);
    norm_x = std::sqrt(norm_x);
    const Complex x0 = a[k * n + k];
    const Complex alpha = -(x0 == Complex(0.0) ? Complex(1.0) : x0 / std::abs(x0)) * norm_x;
    std::vector<Complex> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = a[i * n + k];
    v[0] -= alpha;
    double vnorm = 0.0;
    for (auto x : v) vnorm += std::norm(x);
    vnorm = std::sqrt(vnorm);
    diag[k] = alpha;
    if (vnorm == 0.0) continue;
    for (auto& x : v) x /= vnorm;
    for (std::size_t j = k; j < n; ++j) {
      Complex dot(0.0);
      for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * a[i * n + j];
      for (std::size_t i = k; i < m; ++i) a[i * n + j] -= 2.0 * v[i - k] * dot;
    }
    Complex dot(0.0);
    for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * b[i];
    for (std::size_t i = k; i < m; ++i) b[i] -= 2.0 * v[i - k] * dot;
  }
  double largest = 0.0;
  for (auto d : diag) largest = std::max(largest, std::abs(d));
  for (auto d : diag)
    if (std::abs(d) <= rank_tolerance * largest) throw NumericalError("rank-deficient least-squares system");
  std::vector<Complex> x(n);
  for (std::size_t k = n; k-- > 0;) {
    Complex s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k * n + j] * x[j];
    x[k] = s / a[k * n + k];
  }
  for (std::size_t k = 0; k < n; ++k) x[k] /= scale[k];
  return x;
}

}  // namespace modelspace
