#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "modelspace/arc.hpp"
#include "modelspace/inner.hpp"
#include "modelspace/measure.hpp"
#include "modelspace/modelspace.hpp"
#include "modelspace/numerics.hpp"

namespace modelspace {

enum class ReportKind {
  direct,
  reverse,
  isometric,
  volberg,
  dominating,
  perturbation,
  evaluation,
  clark,
  gram,
  sublevel,
  whitney,
};

std::string to_string(ReportKind kind);
/// Throws PreconditionError on an unknown name.
ReportKind report_kind_from_string(const std::string& name);

using Witness = std::variant<std::monostate, Arc, Complex, std::vector<Complex>>;

struct CertificateReport {
  ReportKind kind = ReportKind::reverse;
  double value = 0.0;
  Witness witness;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json resolution = nlohmann::ordered_json::object();
};

/// A_jk = int e_k conj(e_j) d mu. Atoms contribute mass * e_k(xi) conj(e_j(xi));
/// density pieces are integrated on their arcs by adaptive quadrature.
HermitianMatrix measure_gram(const MeasureSpec& mu, const ModelBasis& basis);

struct EmbeddingConstants {
  double reverse = 0.0;  // lambda_min
  double direct = 0.0;   // lambda_max
  std::vector<Complex> reverse_witness;
  std::vector<Complex> direct_witness;
};

/// Extremes of ||f||_mu^2 / ||f||_2^2. Throws PreconditionError when A has an
/// eigenvalue below -1e-10 (relative).
EmbeddingConstants embedding_constants(const HermitianMatrix& a);

/// Polar grid: the origin, then rings r_j = 1 - 2^{-j} (j = 1..depth) with
/// 2^{j+3} angles each.
struct PolarGrid {
  int depth = 12;
  std::size_t size() const;
  Complex point(std::size_t index) const;
  double ring_spacing(int ring) const;
};

/// inf over the polar grid of w^(lambda) + |Theta(lambda)|, where w^ is the
/// Poisson extension of the boundary density w.
CertificateReport volberg_infimum(const MeasureSpec& w, const InnerFunction& theta, int depth);

/// lambda_min of the Gram of chi_Sigma dm. Singular Theta is delegated to
/// the grid test of volberg_infimum at depth 16.
CertificateReport dominating_verify(const std::vector<Arc>& sigma, const InnerFunction& b,
                                    double threshold = 1e-6);

struct KapustinResult {
  std::vector<Arc> sigma;
  CertificateReport report;
};

/// Sigma = B^{-1}(A); certifies lambda_min = m(A) within 1e-8 and m(Sigma) < 1.
KapustinResult kapustin_dominating(const InnerFunction& b, const Arc& a);

struct SvcOptions {
  int levels = 6;      // removal steps of the Cantor construction, at most 8
  int depth = 6;       // rings per removed arc: 2N < l <= 2N + depth, at most 6
  int scan_depth = 12;  // window scan compared at scan_depth and scan_depth + 2
  int grid_depth = 12;  // polar grid for inf |B| + chi_Sigma^
};

struct SvcArc {
  Arc arc;
  int n_exponent = 0;  // N with 2^{-(2N+2)} <= m(I) < 2^{-2N}
  double alpha = 0.0;  // m(I) 2^{2N}
};

struct SvcResult {
  std::vector<SvcArc> removed;
  std::vector<Complex> points;
  std::vector<Arc> sigma;
  InnerFunction blaschke;
  double blaschke_sum = 0.0;        // sum (1 - |lambda|)
  double sum_measure_squared = 0.0;  // sum m(I_n)^2
  double exponent_bound = 0.0;       // sum 2^{-4 N_n}
  double separation = 0.0;           // min pseudo-hyperbolic distance
  double carleson_coarse = 0.0;
  double carleson_fine = 0.0;
  double grid_infimum = 0.0;
  CertificateReport report;
};

/// Smith-Volterra-Cantor dominating set and its Blaschke sequence, truncated.
SvcResult svc_construct(const SvcOptions& options = {});

/// Constants of mu = sum delta_lambda / ||k_lambda||^2 over `points`
/// (exactly degree(B) distinct interior points).
CertificateReport interpolating_reverse(const InnerFunction& b, const std::vector<Complex>& points);

struct PerturbationOptions {
  Complex alpha = 1.0;
  // When false, targets are taken as given (only |lambda| <= 1 is checked).
  bool enforce_displacement_bound = true;
};

/// Clark atoms xi_n of (B, alpha) moved to lambda_n = xi_n + d_n. Reports the
/// norm of f -> ((f(xi_n) - f(lambda_n)) / sqrt|B'(xi_n)|)_n squared (value)
/// and lambda_min of the perturbed-kernel Gram sum delta_{lambda_n} / |B'(xi_n)|.
CertificateReport perturbation_ratio(const InnerFunction& b, const std::vector<Complex>& displacements,
                                     const PerturbationOptions& options = {});

}  // namespace modelspace
