#include "modelspace/embedding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "modelspace/clark.hpp"
#include "modelspace/error.hpp"
#include "modelspace/geometry.hpp"
#include "modelspace/parallel.hpp"

namespace modelspace {

namespace {

constexpr std::array<std::pair<ReportKind, const char*>, 11> kKindNames{{
    {ReportKind::direct, "direct"},
    {ReportKind::reverse, "reverse"},
    {ReportKind::isometric, "isometric"},
    {ReportKind::volberg, "volberg"},
    {ReportKind::dominating, "dominating"},
    {ReportKind::perturbation, "perturbation"},
    {ReportKind::evaluation, "evaluation"},
    {ReportKind::clark, "clark"},
    {ReportKind::gram, "gram"},
    {ReportKind::sublevel, "sublevel"},
    {ReportKind::whitney, "whitney"},
}};

void finish_hermitian(HermitianMatrix& a) {
  const std::size_t n = a.dimension();
  for (std::size_t j = 0; j < n; ++j) {
    a(j, j) = Complex(a(j, j).real(), 0.0);
    for (std::size_t k = j + 1; k < n; ++k) a(k, j) = std::conj(a(j, k));
  }
}

void require_finite_blaschke(const InnerFunction& b) {
  if (!b.is_finite_blaschke()) throw PreconditionError("finite-dimensional basis requires finite Blaschke");
  if (b.degree() == 0) throw PreconditionError("model space of a constant is trivial");
}

}  // namespace

std::string to_string(ReportKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

ReportKind report_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kKindNames)
    if (name == n) return k;
  throw PreconditionError("unknown report kind: " + name);
}

HermitianMatrix measure_gram(const MeasureSpec& mu, const ModelBasis& basis) {
  const std::size_t n = basis.dimension();
  HermitianMatrix a(n);
  std::vector<Complex> e;
  for (const auto& atom : mu.atoms()) {
    basis.values(atom.location, e);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) a(j, k) += atom.mass * e[k] * std::conj(e[j]);
  }
  for (const auto& piece : mu.density_pieces()) {
    if (piece.density == 0.0) continue;
    const auto integral = integrate_arc(
        [&](double t, std::span<Complex> out) {
          std::vector<Complex> v = basis.values(std::polar(1.0, t));
          std::size_t idx = 0;
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) out[idx++] = v[k] * std::conj(v[j]);
        },
        n * (n + 1) / 2, piece.arc.start(), piece.arc.length(), 1e-13);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) a(j, k) += piece.density * integral[idx++];
  }
  finish_hermitian(a);
  return a;
}

EmbeddingConstants embedding_constants(const HermitianMatrix& a) {
  const EigenDecomposition eig = hermitian_eigen(a);
  const double scale = std::max(1.0, a.frobenius_norm());
  if (eig.values.front() < -1e-10 * scale)
    throw PreconditionError("Gram matrix is not positive semidefinite");
  EmbeddingConstants c;
  c.reverse = eig.values.front();
  c.direct = eig.values.back();
  c.reverse_witness = eig.vectors.front();
  c.direct_witness = eig.vectors.back();
  return c;
}

// ---------------------------------------------------------------------------
// Volberg grid test

std::size_t PolarGrid::size() const { return (std::size_t{1} << (depth + 4)) - 15; }

Complex PolarGrid::point(std::size_t index) const {
  if (index == 0) return Complex(0.0);
  int j = 1;
  std::size_t offset = 1;
  while (index >= offset + (std::size_t{1} << (j + 3))) {
    offset += std::size_t{1} << (j + 3);
    ++j;
  }
  const auto count = static_cast<double>(std::size_t{1} << (j + 3));
  return std::polar(1.0 - std::ldexp(1.0, -j), kTwoPi * static_cast<double>(index - offset) / count);
}

double PolarGrid::ring_spacing(int ring) const { return std::ldexp(1.0, -ring); }

CertificateReport volberg_infimum(const MeasureSpec& w, const InnerFunction& theta, int depth) {
  if (!w.atoms().empty()) throw PreconditionError("Volberg test requires a boundary density");
  if (depth < 1 || depth > 22) throw PreconditionError("grid depth must lie in [1, 22]");
  const PolarGrid grid{depth};

  constexpr std::size_t kChunk = 4096;
  const std::size_t total = grid.size();
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<double> best(chunks, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> where(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(total, lo + kChunk);
    // Walk the ring structure directly instead of calling point() per index.
    int j = 1;
    std::size_t offset = 1;
    while (lo >= offset + (std::size_t{1} << (j + 3))) {
      offset += std::size_t{1} << (j + 3);
      ++j;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      Complex z(0.0);
      if (i > 0) {
        if (i >= offset + (std::size_t{1} << (j + 3))) {
          offset += std::size_t{1} << (j + 3);
          ++j;
        }
        const double count = static_cast<double>(std::size_t{1} << (j + 3));
        z = std::polar(1.0 - std::ldexp(1.0, -j), kTwoPi * static_cast<double>(i - offset) / count);
      }
      double v = modulus(theta, z);
      for (const auto& p : w.density_pieces()) v += p.density * poisson_arc(z, p.arc);
      if (v < best[c]) {
        best[c] = v;
        where[c] = i;
      }
    }
  });
  std::size_t arg = 0;
  for (std::size_t c = 1; c < chunks; ++c)
    if (best[c] < best[arg]) arg = c;

  CertificateReport r;
  r.kind = ReportKind::volberg;
  r.value = best[arg];
  r.witness = grid.point(where[arg]);
  r.parameters["grid_depth"] = depth;
  r.parameters["density_pieces"] = w.density_pieces().size();
  r.resolution["grid_points"] = total;
  r.resolution["innermost_gap"] = std::ldexp(1.0, -depth);
  r.resolution["outer_angular_step"] = kTwoPi / static_cast<double>(std::size_t{1} << (depth + 3));
  r.resolution["note"] = "infimum over grid points only";
  return r;
}

// ---------------------------------------------------------------------------
// Dominating sets

CertificateReport dominating_verify(const std::vector<Arc>& sigma, const InnerFunction& b, double threshold) {
  if (sigma.empty()) throw PreconditionError("dominating set must be nonempty");
  const double measure = union_measure(sigma);
  if (measure >= 1.0) throw PreconditionError("trivial domination");
  const MeasureSpec chi = MeasureSpec::indicator(sigma);

  CertificateReport r;
  r.kind = ReportKind::dominating;
  if (!b.is_finite_blaschke()) {
    constexpr int kDepth = 16;
    CertificateReport grid = volberg_infimum(chi, b, kDepth);
    r.value = grid.value;
    r.witness = grid.witness;
    r.parameters["sigma_measure"] = measure;
    r.parameters["threshold"] = threshold;
    r.parameters["method"] = "volberg grid";
    r.parameters["dominating"] = grid.value > threshold;
    r.resolution = grid.resolution;
    return r;
  }
  require_finite_blaschke(b);
  const ModelBasis basis(b);
  const EmbeddingConstants c = embedding_constants(measure_gram(chi, basis));
  r.value = c.reverse;
  r.witness = c.reverse_witness;
  r.parameters["degree"] = b.degree();
  r.parameters["sigma_measure"] = measure;
  r.parameters["threshold"] = threshold;
  r.parameters["method"] = "gram eigenvalue";
  r.parameters["dominating"] = c.reverse > threshold;
  r.resolution["quadrature_tolerance"] = 1e-13;
  return r;
}

KapustinResult kapustin_dominating(const InnerFunction& b, const Arc& a) {
  require_finite_blaschke(b);
  if (a.is_full()) throw PreconditionError("trivial domination");
  KapustinResult out;
  out.sigma = kapustin_partition(b, a);
  const double sigma_measure = union_measure(out.sigma);
  if (sigma_measure >= 1.0) throw PreconditionError("trivial domination");
  const EmbeddingConstants c = embedding_constants(measure_gram(MeasureSpec::indicator(out.sigma), ModelBasis(b)));
  const double deviation = std::abs(c.reverse - a.measure());

  auto& r = out.report;
  r.kind = ReportKind::dominating;
  r.value = c.reverse;
  r.witness = c.reverse_witness;
  r.parameters["degree"] = b.degree();
  r.parameters["arc_measure"] = a.measure();
  r.parameters["sigma_measure"] = sigma_measure;
  r.parameters["deviation"] = deviation;
  r.parameters["certified"] = deviation <= 1e-8 && sigma_measure < 1.0;
  r.resolution["quadrature_tolerance"] = 1e-13;
  return out;
}

// ---------------------------------------------------------------------------
// Smith-Volterra-Cantor construction

namespace {

int exponent_for(double m) {
  int n = 0;
  while (!(m >= std::ldexp(1.0, -(2 * n + 2)))) ++n;
  return n;
}

}  // namespace

SvcResult svc_construct(const SvcOptions& options) {
  if (options.levels < 1 || options.levels > 8) throw PreconditionError("levels must lie in [1, 8]");
  if (options.depth < 1 || options.depth > 6) throw PreconditionError("depth must lie in [1, 6]");
  if (options.scan_depth < 1 || options.scan_depth > 16) throw PreconditionError("scan_depth must lie in [1, 16]");
  if (options.grid_depth < 1 || options.grid_depth > 14) throw PreconditionError("grid_depth must lie in [1, 14]");

  SvcResult out;
  // Normalized coordinates x in [0, 1), angle 2 pi x. Step k removes the
  // middle interval of length 4^{-k} from each remaining interval.
  std::vector<std::pair<double, double>> remaining{{0.0, 1.0}};
  for (int k = 1; k <= options.levels; ++k) {
    const double half = 0.5 * std::ldexp(1.0, -2 * k);
    std::vector<std::pair<double, double>> next;
    for (const auto& [a, b] : remaining) {
      const double mid = 0.5 * (a + b);
      const double m = 2.0 * half;
      out.removed.push_back({Arc(kTwoPi * (mid - half), kTwoPi * m), exponent_for(m), 0.0});
      next.emplace_back(a, mid - half);
      next.emplace_back(mid + half, b);
    }
    remaining = std::move(next);
  }
  std::sort(out.removed.begin(), out.removed.end(),
            [](const SvcArc& x, const SvcArc& y) { return x.arc.start() < y.arc.start(); });

  std::vector<double> deficit;
  for (auto& r : out.removed) {
    const double m = r.arc.measure();
    r.alpha = m * std::ldexp(1.0, 2 * r.n_exponent);
    out.sigma.push_back(r.arc);
    out.sum_measure_squared += m * m;
    out.exponent_bound += std::ldexp(1.0, -4 * r.n_exponent);
    for (int l = 2 * r.n_exponent + 1; l <= 2 * r.n_exponent + options.depth; ++l) {
      const double d = std::ldexp(1.0, -2 * l);
      const long count = (1L << (l - 2 * r.n_exponent)) - 1;
      for (long k = 1; k <= count; ++k) {
        const double angle = r.arc.start() + kTwoPi * r.alpha * static_cast<double>(k) * std::ldexp(1.0, -l);
        out.points.push_back(std::polar(1.0 - d, angle));
        deficit.push_back(d);
      }
    }
  }
  for (double d : deficit) out.blaschke_sum += d;

  std::vector<BlaschkeZero> zeros;
  zeros.reserve(out.points.size());
  for (Complex p : out.points) zeros.push_back({p, 1});
  out.blaschke = InnerFunction(0.0, std::move(zeros), {}, options.levels);

  // Pseudo-hyperbolic separation, brute force.
  const std::size_t np = out.points.size();
  std::vector<double> nearest(np, 1.0);
  parallel_for(np, [&](std::size_t i) {
    const Complex a = out.points[i];
    double best = 1.0;
    for (std::size_t j = 0; j < np; ++j) {
      if (j == i) continue;
      const Complex b = out.points[j];
      best = std::min(best, std::abs(a - b) / std::abs(1.0 - std::conj(a) * b));
    }
    nearest[i] = best;
  });
  out.separation = np > 1 ? *std::min_element(nearest.begin(), nearest.end()) : 1.0;

  std::vector<Atom> nu;
  nu.reserve(np);
  for (std::size_t i = 0; i < np; ++i) nu.push_back({out.points[i], deficit[i] * (2.0 - deficit[i])});
  const MeasureSpec nu_measure(std::move(nu), {});
  ScanConfig scan;
  scan.max_depth = options.scan_depth;
  out.carleson_coarse = window_scan(nu_measure, scan).value;
  scan.max_depth = options.scan_depth + 2;
  out.carleson_fine = window_scan(nu_measure, scan).value;

  CertificateReport grid = volberg_infimum(MeasureSpec::indicator(out.sigma), out.blaschke, options.grid_depth);
  out.grid_infimum = grid.value;

  auto& r = out.report;
  r.kind = ReportKind::dominating;
  r.value = grid.value;
  r.witness = grid.witness;
  r.parameters["levels"] = options.levels;
  r.parameters["depth"] = options.depth;
  r.parameters["removed_arcs"] = out.removed.size();
  r.parameters["points"] = np;
  r.parameters["sigma_measure"] = union_measure(out.sigma);
  r.parameters["blaschke_sum"] = out.blaschke_sum;
  r.parameters["sum_measure_squared"] = out.sum_measure_squared;
  r.parameters["blaschke_sum_over_sum_measure_squared"] = out.blaschke_sum / out.sum_measure_squared;
  r.parameters["exponent_bound"] = out.exponent_bound;
  r.parameters["within_exponent_bound"] = out.blaschke_sum <= out.exponent_bound;
  r.parameters["separation"] = out.separation;
  r.parameters["carleson_sup_coarse"] = out.carleson_coarse;
  r.parameters["carleson_sup_fine"] = out.carleson_fine;
  r.parameters["scan_depths"] = {options.scan_depth, options.scan_depth + 2};
  r.resolution = grid.resolution;
  return out;
}

// ---------------------------------------------------------------------------
// Interpolation and perturbation

CertificateReport interpolating_reverse(const InnerFunction& b, const std::vector<Complex>& points) {
  require_finite_blaschke(b);
  if (points.size() != static_cast<std::size_t>(b.degree()))
    throw PreconditionError("need exactly degree-many points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(std::abs(points[i]) < 1.0)) throw PreconditionError("interpolation points must be interior");
    for (std::size_t j = 0; j < i; ++j)
      if (points[i] == points[j]) throw PreconditionError("repeated interpolation point");
  }
  std::vector<Atom> atoms;
  for (Complex p : points) atoms.push_back({p, 1.0 / kernel_norm_squared(b, p)});
  const EmbeddingConstants c = embedding_constants(measure_gram(MeasureSpec(std::move(atoms), {}), ModelBasis(b)));

  CertificateReport r;
  r.kind = ReportKind::reverse;
  r.value = c.reverse;
  r.witness = c.reverse_witness;
  r.parameters["degree"] = b.degree();
  r.parameters["direct"] = c.direct;
  r.resolution["method"] = "gram eigenvalue";
  return r;
}

CertificateReport perturbation_ratio(const InnerFunction& b, const std::vector<Complex>& displacements,
                                     const PerturbationOptions& options) {
  require_finite_blaschke(b);
  const MeasureSpec clark = clark_measure(b, options.alpha);
  const auto& xi = clark.atoms();
  if (displacements.size() != xi.size()) throw PreconditionError("need one displacement per Clark atom");

  std::vector<Complex> targets(xi.size());
  double scaled_size = 0.0;
  for (std::size_t n = 0; n < xi.size(); ++n) {
    targets[n] = xi[n].location + displacements[n];
    if (!(std::abs(targets[n]) <= 1.0 + 1e-12)) throw PreconditionError("shifted point outside the closed disk");
    const double size = std::abs(displacements[n]) / xi[n].mass;
    if (options.enforce_displacement_bound && !(size < 1.0))
      throw PreconditionError("displacement exceeds the inverse angular derivative");
    scaled_size = std::max(scaled_size, size);
  }

  const ModelBasis basis(b);
  const std::size_t dim = basis.dimension();
  HermitianMatrix diff(dim);
  std::vector<Atom> shifted;
  std::vector<Complex> e0, e1;
  for (std::size_t n = 0; n < xi.size(); ++n) {
    basis.values(xi[n].location, e0);
    basis.values(targets[n], e1);
    for (std::size_t k = 0; k < dim; ++k) e0[k] -= e1[k];
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = j; k < dim; ++k) diff(j, k) += xi[n].mass * e0[k] * std::conj(e0[j]);
    shifted.push_back({targets[n], xi[n].mass});
  }
  finish_hermitian(diff);
  const EmbeddingConstants d = embedding_constants(diff);
  const EmbeddingConstants p = embedding_constants(measure_gram(MeasureSpec(std::move(shifted), {}), basis));

  bool repeated = false;
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(targets[i] - targets[j]) <= 1e-14) repeated = true;

  CertificateReport r;
  r.kind = ReportKind::perturbation;
  r.value = d.direct;
  r.witness = d.direct_witness;
  r.parameters["degree"] = b.degree();
  r.parameters["alpha"] = {options.alpha.real(), options.alpha.imag()};
  r.parameters["scaled_displacement"] = scaled_size;
  // Coinciding targets (up to the rounding of xi + d) leave fewer distinct
  // kernels than the dimension.
  r.parameters["riesz_lower"] = repeated ? 0.0 : std::max(0.0, p.reverse);
  r.parameters["riesz_upper"] = p.direct;
  r.parameters["rank_deficient"] = repeated;
  r.resolution["method"] = "gram eigenvalue";
  return r;
}

}  // namespace modelspace
