#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "modelspace/clark.hpp"
#include "modelspace/embedding.hpp"
#include "modelspace/error.hpp"

using namespace modelspace;
using std::numbers::pi;

namespace {

Complex random_disk_point(std::mt19937_64& rng, double max_radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(max_radius * std::sqrt(u(rng)), kTwoPi * u(rng));
}

InnerFunction random_blaschke(std::mt19937_64& rng, int degree, double max_radius = 0.9) {
  std::vector<Complex> zeros;
  for (int i = 0; i < degree; ++i) zeros.push_back(random_disk_point(rng, max_radius));
  return InnerFunction::blaschke(zeros, std::uniform_real_distribution<double>(0.0, kTwoPi)(rng));
}

double max_deviation_from_identity(const HermitianMatrix& a) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.dimension(); ++j)
    for (std::size_t k = 0; k < a.dimension(); ++k) worst = std::max(worst, std::abs(a(j, k) - (j == k ? 1.0 : 0.0)));
  return worst;
}

double max_difference(const HermitianMatrix& a, const HermitianMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  return worst;
}

}  // namespace

TEST_CASE("Gram of Lebesgue measure and of Clark measures") {
  std::mt19937_64 rng(61);
  for (int degree = 1; degree <= 8; ++degree) {
    const InnerFunction b = random_blaschke(rng, degree);
    const ModelBasis basis(b);
    CHECK(max_deviation_from_identity(measure_gram(MeasureSpec::lebesgue(), basis)) <= 1e-10);
    for (int r = 0; r < 8; ++r) {
      const Complex alpha = std::polar(1.0, kTwoPi * r / 8.0);
      CHECK(max_deviation_from_identity(measure_gram(clark_measure(b, alpha), basis)) <= 1e-9);
    }
  }
}

TEST_CASE("Gram of the upper half circle for z^2") {
  const HermitianMatrix a = measure_gram(MeasureSpec::indicator({Arc(0.0, pi)}), ModelBasis(InnerFunction::power(2)));
  // A_jk = int e_k conj(e_j): A_01 = int z dm over the upper half = i/pi
  CHECK(std::abs(a(0, 0) - 0.5) <= 1e-13);
  CHECK(std::abs(a(1, 1) - 0.5) <= 1e-13);
  CHECK(std::abs(a(0, 1) - Complex(0.0, 1.0 / pi)) <= 1e-13);
  CHECK(std::abs(a(1, 0) - Complex(0.0, -1.0 / pi)) <= 1e-13);
  const EmbeddingConstants c = embedding_constants(a);
  CHECK(std::fabs(c.reverse - (0.5 - 1.0 / pi)) <= 1e-12);
  CHECK(std::fabs(c.direct - (0.5 + 1.0 / pi)) <= 1e-12);
  CHECK(c.reverse == doctest::Approx(0.18169).epsilon(1e-4));
}

TEST_CASE("embedding constants") {
  const EmbeddingConstants id = embedding_constants(HermitianMatrix::identity(4));
  CHECK(id.reverse == doctest::Approx(1.0));
  CHECK(id.direct == doctest::Approx(1.0));
  CHECK(id.reverse_witness.size() == 4);

  const InnerFunction b = InnerFunction::blaschke({0.3, Complex(0.0, 0.5)});
  const EmbeddingConstants half = embedding_constants(measure_gram(clark_measure(b, 1.0).scaled(0.5), ModelBasis(b)));
  CHECK(std::fabs(half.reverse - 0.5) <= 1e-9);
  CHECK(std::fabs(half.direct - 0.5) <= 1e-9);

  CHECK_THROWS_AS(embedding_constants(HermitianMatrix(2, {1.0, 0.0, 0.0, -1.0})), PreconditionError);
}

TEST_CASE("Gram is linear in the measure") {
  std::mt19937_64 rng(62);
  const InnerFunction b = random_blaschke(rng, 4);
  const ModelBasis basis(b);
  const MeasureSpec mu1({{random_disk_point(rng, 0.9), 0.3}, {std::polar(1.0, 1.0), 0.2}}, {{Arc(0.5, 1.0), 0.7}});
  const MeasureSpec mu2({{random_disk_point(rng, 0.9), 0.4}}, {{Arc(3.0, 2.0), 1.5}});
  HermitianMatrix sum = measure_gram(mu1, basis);
  sum += measure_gram(mu2, basis);
  CHECK(max_difference(measure_gram(mu1 + mu2, basis), sum) <= 1e-12);

  const double c = 2.75;
  const EmbeddingConstants e1 = embedding_constants(measure_gram(mu1, basis));
  const EmbeddingConstants ec = embedding_constants(measure_gram(mu1.scaled(c), basis));
  CHECK(ec.reverse == doctest::Approx(c * e1.reverse).epsilon(1e-12));
  CHECK(ec.direct == doctest::Approx(c * e1.direct).epsilon(1e-12));
}

TEST_CASE("polar grid") {
  const PolarGrid g{3};
  CHECK(g.size() == 1 + 16 + 32 + 64);
  CHECK(g.point(0) == Complex(0.0));
  CHECK(std::abs(g.point(1) - 0.5) <= 1e-15);
  CHECK(std::abs(g.point(17) - 0.75) <= 1e-15);
  CHECK(std::abs(g.point(g.size() - 1) - std::polar(0.875, kTwoPi * 63 / 64)) <= 1e-15);
}

TEST_CASE("Volberg infimum") {
  const CertificateReport r = volberg_infimum(MeasureSpec::lebesgue(), InnerFunction::power(2), 10);
  CHECK(r.kind == ReportKind::volberg);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::holds_alternative<Complex>(r.witness));
  CHECK(r.resolution.contains("grid_points"));

  // |Theta| alone: z^2 vanishes at the origin
  const CertificateReport zero = volberg_infimum(MeasureSpec::indicator({Arc(0.0, 1e-3)}), InnerFunction::power(2), 8);
  CHECK(zero.value <= 1e-3);

  CHECK_THROWS_AS(volberg_infimum(MeasureSpec({{1.0, 1.0}}, {}), InnerFunction::power(1), 8), PreconditionError);
  CHECK_THROWS_AS(volberg_infimum(MeasureSpec::lebesgue(), InnerFunction::power(1), 0), PreconditionError);
}

TEST_CASE("dominating sets for finite Blaschke products") {
  const std::vector<Arc> sigma{Arc(0.3, 2.0), Arc(4.0, 0.5)};
  const CertificateReport c = dominating_verify(sigma, InnerFunction::power(1));
  CHECK(c.value == doctest::Approx(union_measure(sigma)).epsilon(1e-12));
  CHECK(c.parameters["dominating"].get<bool>());

  const CertificateReport h = dominating_verify({Arc(0.0, pi)}, InnerFunction::power(2));
  CHECK(std::fabs(h.value - (0.5 - 1.0 / pi)) <= 1e-9);

  const CertificateReport almost = dominating_verify({Arc(1e-9, kTwoPi - 1e-9)}, InnerFunction::power(3));
  CHECK(almost.value == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_WITH_AS(dominating_verify({Arc::full_circle()}, InnerFunction::power(2)), "trivial domination",
                       PreconditionError);
  CHECK_THROWS_WITH_AS(dominating_verify({Arc(0.0, pi), Arc(pi, pi)}, InnerFunction::power(2)), "trivial domination",
                       PreconditionError);
}

TEST_CASE("dominating constant is monotone in the set") {
  std::mt19937_64 rng(63);
  const InnerFunction b = random_blaschke(rng, 5);
  double prev = 0.0;
  for (double len : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    const double c = dominating_verify({Arc(1.0, len)}, b).value;
    CHECK(c >= prev - 1e-12);
    prev = c;
  }
}

TEST_CASE("dominating verdict for a singular function uses the grid") {
  const CertificateReport r = dominating_verify({Arc(-0.1, 0.2)}, InnerFunction::singular_atom(0.0, 1.0));
  CHECK(r.parameters["method"] == "volberg grid");
  CHECK(r.value > 0.05);
}

TEST_CASE("Kapustin dominating sets") {
  const KapustinResult r2 = kapustin_dominating(InnerFunction::power(2), Arc(0.0, pi));
  CHECK(r2.sigma.size() == 2);
  CHECK(std::fabs(r2.report.value - 0.5) <= 1e-8);
  CHECK(r2.report.parameters["certified"].get<bool>());

  const KapustinResult r3 = kapustin_dominating(InnerFunction::power(3), Arc(0.4, kTwoPi / 3));
  CHECK(std::fabs(r3.report.value - 1.0 / 3) <= 1e-8);

  std::mt19937_64 rng(64);
  const InnerFunction b = random_blaschke(rng, 5);
  const KapustinResult rb = kapustin_dominating(b, Arc(2.0, 1.5));
  CHECK(std::fabs(rb.report.value - 1.5 / kTwoPi) <= 1e-8);

  CHECK_THROWS_AS(kapustin_dominating(InnerFunction::power(2), Arc::full_circle()), PreconditionError);
}

TEST_CASE("SVC construction with one level") {
  SvcOptions opts;
  opts.levels = 1;
  opts.depth = 3;
  opts.scan_depth = 6;
  opts.grid_depth = 8;
  const SvcResult r = svc_construct(opts);
  REQUIRE(r.removed.size() == 1);
  const SvcArc& arc = r.removed[0];
  CHECK(arc.arc.measure() == doctest::Approx(0.25));
  // 2^{-(2N+2)} <= 1/4 < 2^{-2N} gives N = 0
  CHECK(arc.n_exponent == 0);
  CHECK(arc.alpha == doctest::Approx(0.25));
  std::size_t expected = 0;
  for (int l = 1; l <= 3; ++l) expected += (std::size_t{1} << l) - 1;
  CHECK(r.points.size() == expected);
  for (Complex p : r.points) CHECK(arc.arc.contains(std::arg(p) < 0 ? std::arg(p) + kTwoPi : std::arg(p)));
  CHECK(r.blaschke.degree() == static_cast<int>(expected));
  CHECK(r.blaschke.truncation_level() == 1);
  CHECK(r.separation > 0.0);
  CHECK(std::isfinite(r.carleson_fine));
  CHECK(r.grid_infimum > 0.0);
}

TEST_CASE("SVC exponents and parameter caps") {
  SvcOptions opts;
  opts.levels = 3;
  opts.depth = 2;
  opts.scan_depth = 6;
  opts.grid_depth = 8;
  const SvcResult r = svc_construct(opts);
  CHECK(r.removed.size() == 7);
  for (const SvcArc& a : r.removed) {
    const double m = a.arc.measure();
    CHECK(m >= std::ldexp(1.0, -(2 * a.n_exponent + 2)));
    CHECK(m < std::ldexp(1.0, -2 * a.n_exponent));
  }
  CHECK(union_measure(r.sigma) == doctest::Approx(0.25 + 2.0 / 16 + 4.0 / 64));
  opts.levels = 9;
  CHECK_THROWS_AS(svc_construct(opts), PreconditionError);
  opts.levels = 2;
  opts.depth = 7;
  CHECK_THROWS_AS(svc_construct(opts), PreconditionError);
}

TEST_CASE("interpolating sequences") {
  const CertificateReport a = interpolating_reverse(InnerFunction::power(2), {0.1, -0.1});
  CHECK(a.value > 0.0);
  CHECK(a.parameters["direct"].get<double>() > 0.0);
  // oracle: Gram of delta_{+-0.1} / ||k||^2 in the basis (1, z)
  const double w = 1.0 / kernel_norm_squared(InnerFunction::power(2), 0.1);
  const HermitianMatrix g(2, {2 * w, 0.0, 0.0, 2 * w * 0.01});
  const auto ev = hermitian_eigenvalues(g);
  CHECK(a.value == doctest::Approx(ev[0]).epsilon(1e-12));
  CHECK(a.parameters["direct"].get<double>() == doctest::Approx(ev[1]).epsilon(1e-12));

  std::mt19937_64 rng(65);
  const InnerFunction b = random_blaschke(rng, 5);
  std::vector<Complex> pts;
  const MeasureSpec sigma = clark_measure(b, 1.0);
  for (const auto& atom : sigma.atoms()) pts.push_back((1.0 - 1e-6) * atom.location);
  const CertificateReport near = interpolating_reverse(b, pts);
  CHECK(near.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(near.parameters["direct"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));

  CHECK_THROWS_WITH_AS(interpolating_reverse(InnerFunction::power(2), {0.1, 0.1}), "repeated interpolation point",
                       PreconditionError);
  CHECK_THROWS_AS(interpolating_reverse(InnerFunction::power(2), {0.1}), PreconditionError);
}

TEST_CASE("perturbation of Clark bases") {
  const InnerFunction b = InnerFunction::power(4);
  const CertificateReport zero = perturbation_ratio(b, std::vector<Complex>(4, 0.0));
  CHECK(zero.value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(zero.parameters["riesz_lower"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(zero.parameters["riesz_upper"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));

  const MeasureSpec sigma = clark_measure(b, 1.0);
  double prev_lower = 1.0, prev_ratio = 0.0;
  for (double s : {0.01, 0.05, 0.1}) {
    std::vector<Complex> d;
    for (const auto& atom : sigma.atoms()) d.push_back(-s * atom.mass * atom.location);
    const CertificateReport r = perturbation_ratio(b, d);
    const double lower = r.parameters["riesz_lower"].get<double>();
    CHECK(lower > 0.5);
    CHECK(lower < prev_lower);
    CHECK(r.value > prev_ratio);
    CHECK(r.value < 0.1);
    prev_lower = lower;
    prev_ratio = r.value;
  }

  std::vector<Complex> big(4, 0.0);
  big[0] = -0.3;
  CHECK_THROWS_AS(perturbation_ratio(b, big), PreconditionError);
}

TEST_CASE("duplicated perturbation targets lose the Riesz bound") {
  const InnerFunction b = InnerFunction::power(4);
  const MeasureSpec sigma = clark_measure(b, 1.0);
  const auto& atoms = sigma.atoms();
  std::vector<Complex> d(4, 0.0);
  d[1] = atoms[0].location - atoms[1].location;
  PerturbationOptions opts;
  opts.enforce_displacement_bound = false;
  const CertificateReport r = perturbation_ratio(b, d, opts);
  CHECK(r.parameters["riesz_lower"].get<double>() == 0.0);
  CHECK(r.parameters["rank_deficient"].get<bool>());
  CHECK_THROWS_AS(perturbation_ratio(b, d), PreconditionError);
}

TEST_CASE("report kinds round-trip through their names") {
  for (ReportKind k : {ReportKind::direct, ReportKind::reverse, ReportKind::isometric, ReportKind::volberg,
                       ReportKind::dominating, ReportKind::perturbation, ReportKind::evaluation, ReportKind::clark,
                       ReportKind::gram, ReportKind::sublevel, ReportKind::whitney})
    CHECK(report_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(report_kind_from_string("bogus"), PreconditionError);
}
