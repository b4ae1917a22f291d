#include "modelspace/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "modelspace/clark.hpp"
#include "modelspace/error.hpp"
#include "modelspace/geometry.hpp"
#include "modelspace/json_io.hpp"
#include "modelspace/parallel.hpp"

namespace modelspace::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

enum class ValueKind { json_value, number, integer, text };

struct OptionSpec {
  const char* key;
  ValueKind kind;
  const char* help;
};

struct CommandSpec {
  const char* name;
  const char* help;
  std::vector<OptionSpec> options;
};

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> specs = {
      {"eval", "evaluate an inner function at a point",
       {{"inner", ValueKind::json_value, "inner function (JSON text or file)"},
        {"point", ValueKind::json_value, "point: number, [re, im] or {\"re\", \"im\"}"}}},
      {"clark", "Clark measure of a finite Blaschke product",
       {{"inner", ValueKind::json_value, "inner function"},
        {"alpha", ValueKind::json_value, "unimodular parameter (default 1)"}}},
      {"gram", "Gram matrix of a measure in the model-space basis",
       {{"inner", ValueKind::json_value, "finite Blaschke product"},
        {"measure", ValueKind::json_value, "measure JSON, \"clark\" or \"lebesgue\""},
        {"alpha", ValueKind::json_value, "Clark parameter when measure = clark"}}},
      {"certify", "direct / reverse / isometric embedding certificate",
       {{"inner", ValueKind::json_value, "inner function"},
        {"measure", ValueKind::json_value, "measure JSON, \"clark\" or \"lebesgue\""},
        {"alpha", ValueKind::json_value, "Clark parameter when measure = clark"},
        {"mode", ValueKind::text, "reverse | direct | isometric"},
        {"restriction", ValueKind::text, "none | sublevel | meets_set"},
        {"epsilon", ValueKind::number, "sub-level parameter"},
        {"amplify", ValueKind::number, "window amplification N"},
        {"sigma", ValueKind::json_value, "arcs for meets_set"},
        {"max_depth", ValueKind::integer, "dyadic scan depth K"},
        {"grid_depth", ValueKind::integer, "sub-level grid depth"}}},
      {"volberg", "grid infimum of w^ + |Theta|",
       {{"inner", ValueKind::json_value, "inner function"},
        {"measure", ValueKind::json_value, "boundary density (default \"lebesgue\")"},
        {"depth", ValueKind::integer, "grid depth J"}}},
      {"dominate", "dominating-set constant of a union of arcs",
       {{"inner", ValueKind::json_value, "inner function"},
        {"sigma", ValueKind::json_value, "arcs"},
        {"threshold", ValueKind::number, "verdict threshold (default 1e-6)"}}},
      {"kapustin", "dominating set B^{-1}(A)",
       {{"inner", ValueKind::json_value, "finite Blaschke product"},
        {"arc", ValueKind::json_value, "arc A"}}},
      {"svc", "Smith-Volterra-Cantor construction",
       {{"levels", ValueKind::integer, "removal steps (<= 8)"},
        {"depth", ValueKind::integer, "rings per removed arc (<= 6)"},
        {"scan_depth", ValueKind::integer, "window scan depth"},
        {"grid_depth", ValueKind::integer, "grid depth for the infimum"}}},
      {"sublevel", "sub-level grid and connectivity",
       {{"inner", ValueKind::json_value, "inner function"},
        {"epsilon", ValueKind::number, "level"},
        {"depth", ValueKind::integer, "grid depth J (>= 8)"}}},
      {"whitney", "Whitney decomposition of the free boundary",
       {{"inner", ValueKind::json_value, "inner function"},
        {"epsilon", ValueKind::number, "level"},
        {"delta", ValueKind::number, "calibration in (0, 1/2)"},
        {"depth", ValueKind::integer, "grid depth (default 14)"}}},
      {"perturb", "Clark-basis perturbation test",
       {{"inner", ValueKind::json_value, "finite Blaschke product"},
        {"alpha", ValueKind::json_value, "Clark parameter (default 1)"},
        {"displacements", ValueKind::json_value, "per-atom complex shifts"},
        {"scale", ValueKind::number, "radial inward shift s / |B'(xi)| for every atom"},
        {"targets", ValueKind::json_value, "target points (no size bound)"}}},
  };
  return specs;
}

const CommandSpec& find_command(const std::string& name) {
  for (const auto& c : commands())
    if (name == c.name) return c;
  throw PreconditionError("unknown command '" + name + "'");
}

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (auto& ch : s)
    if (ch == '_') ch = '-';
  return "--" + s;
}

std::string read_file(const std::string& path, const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read file for '" + key + "': " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json flag_value(const OptionSpec& spec, const std::string& text) {
  const std::string key = spec.key;
  switch (spec.kind) {
    case ValueKind::text:
      return text;
    case ValueKind::number:
    case ValueKind::integer: {
      const json v = json::parse(text, nullptr, false);
      if (v.is_discarded() || !v.is_number() || (spec.kind == ValueKind::integer && !v.is_number_integer()))
        throw PreconditionError("invalid value for '" + key + "': " + text);
      return v;
    }
    case ValueKind::json_value: {
      const json v = json::parse(text, nullptr, false);
      if (!v.is_discarded()) return v;
      if (std::filesystem::is_regular_file(text)) return json_io::parse(read_file(text, key), key);
      return text;
    }
  }
  return text;
}

// Typed access to job keys.
class Job {
 public:
  explicit Job(const json& j) : j_(j) {}

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) return fallback ? *fallback : missing<double>(key);
    if (!j_.at(key).is_number()) invalid(key, "expected a number");
    return j_.at(key).get<double>();
  }
  int integer(const char* key, std::optional<int> fallback = std::nullopt) const {
    if (!has(key)) return fallback ? *fallback : missing<int>(key);
    if (!j_.at(key).is_number_integer()) invalid(key, "expected an integer");
    return j_.at(key).get<int>();
  }
  std::string text(const char* key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) return fallback ? *fallback : missing<std::string>(key);
    if (!j_.at(key).is_string()) invalid(key, "expected a string");
    return j_.at(key).get<std::string>();
  }
  Complex complex(const char* key, std::optional<Complex> fallback = std::nullopt) const {
    if (!has(key)) return fallback ? *fallback : missing<Complex>(key);
    return json_io::complex_from_json(j_.at(key), key);
  }
  std::vector<Complex> complex_list(const char* key) const {
    const json& v = at(key);
    if (!v.is_array()) invalid(key, "expected an array");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(json_io::complex_from_json(v[i], std::string(key) + "[" + std::to_string(i) + "]"));
    return out;
  }
  InnerFunction inner() const { return json_io::inner_from_json(at("inner"), "inner"); }
  std::vector<Arc> arcs(const char* key) const { return json_io::arcs_from_json(at(key), key); }
  Arc arc(const char* key) const { return json_io::arc_from_json(at(key), key); }

  const json& at(const char* key) const {
    if (!has(key)) missing<int>(key);
    return j_.at(key);
  }

  MeasureSpec measure(const InnerFunction& theta, const char* fallback) const {
    const json m = has("measure") ? j_.at("measure") : json(fallback);
    if (m.is_string()) {
      if (m == "clark") return clark_measure(theta, complex("alpha", Complex(1.0)));
      if (m == "lebesgue") return MeasureSpec::lebesgue();
      invalid("measure", "expected an object, \"clark\" or \"lebesgue\"");
    }
    return json_io::measure_from_json(m, "measure");
  }

 private:
  template <class T>
  [[noreturn]] static T missing(const char* key) {
    throw PreconditionError("invalid JSON: missing key '" + std::string(key) + "'");
  }
  [[noreturn]] static void invalid(const char* key, const std::string& what) {
    throw PreconditionError("invalid JSON at '" + std::string(key) + "': " + what);
  }

  const json& j_;
};

ordered_json arc_list(const std::vector<Arc>& arcs) {
  ordered_json a = ordered_json::array();
  for (const auto& arc : arcs) a.push_back(json_io::to_json(arc));
  return a;
}

void prepend_inputs(CertificateReport& r, const std::string& command, const json& job) {
  ordered_json p;
  p["command"] = command;
  p["inputs"] = ordered_json::parse(job.dump());
  for (auto it = r.parameters.begin(); it != r.parameters.end(); ++it) p[it.key()] = it.value();
  r.parameters = std::move(p);
}

double max_deviation_from_identity(const HermitianMatrix& a) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.dimension(); ++j)
    for (std::size_t k = 0; k < a.dimension(); ++k)
      worst = std::max(worst, std::abs(a(j, k) - (j == k ? Complex(1.0) : Complex(0.0))));
  return worst;
}

JobOutput run_certify(const Job& job) {
  const InnerFunction theta = job.inner();
  const MeasureSpec mu = job.measure(theta, "clark");
  const std::string mode = job.text("mode", "reverse");
  if (mode != "reverse" && mode != "direct" && mode != "isometric")
    throw PreconditionError("invalid JSON at 'mode': expected reverse, direct or isometric");

  ScanConfig scan;
  scan.max_depth = job.integer("max_depth", 12);
  scan.mode = mode == "direct" ? ScanMode::sup : ScanMode::inf;
  const std::string restriction = job.text("restriction", "none");
  if (restriction == "sublevel") {
    scan.restriction.kind = ScanRestriction::Kind::sublevel;
    scan.restriction.theta = theta;
    scan.restriction.epsilon = job.number("epsilon");
    scan.restriction.amplification = job.number("amplify", 1.0);
    scan.restriction.grid_depth = job.integer("grid_depth", 12);
  } else if (restriction == "meets_set") {
    scan.restriction.kind = ScanRestriction::Kind::meets_set;
    scan.restriction.set = job.arcs("sigma");
  } else if (restriction != "none") {
    throw PreconditionError("invalid JSON at 'restriction': expected none, sublevel or meets_set");
  }
  const ScanResult window = window_scan(mu, scan);

  JobOutput out;
  auto& r = out.report;
  r.kind = mode == "direct" ? ReportKind::direct : mode == "reverse" ? ReportKind::reverse : ReportKind::isometric;
  if (theta.is_finite_blaschke() && theta.degree() > 0) {
    const HermitianMatrix gram = measure_gram(mu, ModelBasis(theta));
    const EmbeddingConstants c = embedding_constants(gram);
    if (mode == "isometric") {
      r.value = max_deviation_from_identity(gram);
      r.parameters["isometric"] = r.value <= 1e-8;
    } else {
      r.value = mode == "reverse" ? c.reverse : c.direct;
      r.witness = mode == "reverse" ? c.reverse_witness : c.direct_witness;
    }
    r.parameters["method"] = "gram eigenvalue";
    r.parameters["reverse"] = c.reverse;
    r.parameters["direct"] = c.direct;
  } else {
    if (mode == "isometric") throw PreconditionError("isometric certificate requires a finite Blaschke product");
    r.value = window.value;
    r.witness = window.witness;
    r.parameters["method"] = "window scan";
  }
  r.parameters["window_ratio"] = window.value;
  r.parameters["window_witness"] = json_io::to_json(window.witness);
  r.parameters["window_level"] = window.witness_level;
  r.parameters["arcs_considered"] = window.arcs_considered;
  r.resolution["scan_depth"] = scan.max_depth;
  r.resolution["family"] = "dyadic arcs, centers at half-length multiples; certifies the family only";
  if (restriction == "sublevel") r.resolution["grid_depth"] = scan.restriction.grid_depth;
  return out;
}

std::string volberg_csv(const MeasureSpec& w, const InnerFunction& theta, int depth) {
  const PolarGrid grid{depth};
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Complex z = grid.point(i);
    values[i] = modulus(theta, z) + poisson_transform(w, z);
  });
  std::ostringstream os;
  os.precision(17);
  os << "r,theta,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Complex z = grid.point(i);
    os << std::abs(z) << ',' << wrap_angle(std::arg(z)) << ',' << values[i] << '\n';
  }
  return os.str();
}

}  // namespace

JobOutput run_job(const std::string& command, const nlohmann::json& j, bool with_csv) {
  const Job job(j);
  JobOutput out;
  auto& r = out.report;

  if (command == "eval") {
    const InnerFunction theta = job.inner();
    const Complex z = job.complex("point");
    const Complex v = eval(theta, z);
    r.kind = ReportKind::evaluation;
    r.value = std::abs(v);
    r.witness = z;
    r.parameters["re"] = v.real();
    r.parameters["im"] = v.imag();
  } else if (command == "clark") {
    const InnerFunction theta = job.inner();
    const MeasureSpec sigma = clark_measure(theta, job.complex("alpha", Complex(1.0)));
    const HermitianMatrix gram = measure_gram(sigma, ModelBasis(theta));
    r.kind = ReportKind::clark;
    r.value = sigma.total_mass();
    ordered_json atoms = ordered_json::array();
    for (const auto& a : sigma.atoms()) {
      ordered_json e;
      e["angle"] = wrap_angle(std::arg(a.location));
      e["mass"] = a.mass;
      atoms.push_back(e);
    }
    r.parameters["atoms"] = atoms;
    r.parameters["gram_deviation"] = max_deviation_from_identity(gram);
    r.resolution["root_residual"] = 1e-10;
  } else if (command == "gram") {
    const InnerFunction theta = job.inner();
    const MeasureSpec mu = job.measure(theta, "clark");
    const HermitianMatrix gram = measure_gram(mu, ModelBasis(theta));
    const EmbeddingConstants c = embedding_constants(gram);
    r.kind = ReportKind::gram;
    r.value = c.reverse;
    r.witness = c.reverse_witness;
    r.parameters["direct"] = c.direct;
    ordered_json rows = ordered_json::array();
    for (std::size_t a = 0; a < gram.dimension(); ++a) {
      ordered_json row = ordered_json::array();
      for (std::size_t b = 0; b < gram.dimension(); ++b) row.push_back(json_io::to_json(gram(a, b)));
      rows.push_back(row);
    }
    r.parameters["matrix"] = rows;
    r.resolution["quadrature_tolerance"] = 1e-13;
  } else if (command == "certify") {
    out = run_certify(job);
  } else if (command == "volberg") {
    const InnerFunction theta = job.inner();
    const MeasureSpec w = job.measure(theta, "lebesgue");
    const int depth = job.integer("depth", 12);
    r = volberg_infimum(w, theta, depth);
    if (with_csv) out.csv = volberg_csv(w, theta, depth);
  } else if (command == "dominate") {
    r = dominating_verify(job.arcs("sigma"), job.inner(), job.number("threshold", 1e-6));
  } else if (command == "kapustin") {
    const auto result = kapustin_dominating(job.inner(), job.arc("arc"));
    r = result.report;
    r.parameters["sigma"] = arc_list(result.sigma);
  } else if (command == "svc") {
    SvcOptions o;
    o.levels = job.integer("levels", o.levels);
    o.depth = job.integer("depth", o.depth);
    o.scan_depth = job.integer("scan_depth", o.scan_depth);
    o.grid_depth = job.integer("grid_depth", o.grid_depth);
    r = svc_construct(o).report;
  } else if (command == "sublevel") {
    const SublevelGrid grid = sublevel_grid(job.inner(), job.number("epsilon"), job.integer("depth", 10));
    const ClsResult cls = cls_test(grid);
    r.kind = ReportKind::sublevel;
    r.value = static_cast<double>(cls.components);
    r.parameters["connected"] = cls.connected;
    r.parameters["occupied_cells"] = grid.occupied_count();
    r.resolution["grid_depth"] = grid.depth;
    r.resolution["innermost_gap"] = std::ldexp(1.0, -grid.depth);
    out.csv = grid.to_csv();
  } else if (command == "whitney") {
    WhitneyOptions o;
    o.grid_depth = job.integer("depth", o.grid_depth);
    const auto arcs = whitney_decompose(job.inner(), job.number("epsilon"), job.number("delta"), o);
    r.kind = ReportKind::whitney;
    r.value = static_cast<double>(arcs.size());
    ordered_json list = ordered_json::array();
    double worst = 0.0;
    for (const auto& a : arcs) {
      ordered_json e;
      e["start"] = a.arc.start();
      e["length"] = a.arc.length();
      e["integral"] = a.integral;
      e["level_distance"] = a.level_distance;
      e["resolution"] = a.resolution;
      e["terminal"] = a.terminal;
      list.push_back(e);
      worst = std::max(worst, a.resolution);
    }
    r.parameters["arcs"] = list;
    r.resolution["grid_depth"] = o.grid_depth;
    r.resolution["max_cell_diagonal"] = worst;
    r.resolution["length_unit"] = "radians";
  } else if (command == "perturb") {
    const InnerFunction theta = job.inner();
    PerturbationOptions o;
    o.alpha = job.complex("alpha", Complex(1.0));
    const int given = job.has("displacements") + job.has("scale") + job.has("targets");
    if (given != 1) throw PreconditionError("give exactly one of 'displacements', 'scale' and 'targets'");
    std::vector<Complex> shifts;
    if (job.has("displacements")) {
      shifts = job.complex_list("displacements");
    } else {
      const MeasureSpec clark = clark_measure(theta, o.alpha);
      if (job.has("scale")) {
        const double s = job.number("scale");
        for (const auto& a : clark.atoms()) shifts.push_back(-s * a.mass * a.location);
      } else {
        const auto targets = job.complex_list("targets");
        if (targets.size() != clark.atoms().size()) throw PreconditionError("need one target per Clark atom");
        for (std::size_t n = 0; n < targets.size(); ++n) shifts.push_back(targets[n] - clark.atoms()[n].location);
        o.enforce_displacement_bound = false;
      }
    }
    r = perturbation_ratio(theta, shifts, o);
  } else {
    throw PreconditionError("unknown command '" + command + "'");
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model-space certificates: Clark measures, embedding constants, dominating sets"};
  app.require_subcommand(1);
  std::string output;
  std::string csv_path;
  std::string config_path;
  bool deterministic = false;

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& spec : commands()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    subs[spec.name] = sub;
    auto& store = values[spec.name];
    for (const auto& o : spec.options) sub->add_option(flag_name(o.key), store[o.key], o.help);
    sub->add_option("--output", output, "report path (stdout always mirrors it)");
    sub->add_option("--config", config_path, "JSON job file; its keys override flags");
    sub->add_flag("--deterministic", deterministic, "serial reductions, byte-identical output");
    if (std::string(spec.name) == "sublevel" || std::string(spec.name) == "volberg")
      sub->add_option("--csv", csv_path, "grid CSV path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string command;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) command = name;
    const CommandSpec& spec = find_command(command);
    CLI::App* sub = subs[command];

    json job = json::object();
    for (const auto& o : spec.options)
      if (sub->count(flag_name(o.key)) > 0) job[o.key] = flag_value(o, values[command][o.key]);

    if (!config_path.empty()) {
      const json cfg = json_io::parse(read_file(config_path, "config"), "config");
      if (!cfg.is_object()) throw PreconditionError("invalid JSON at 'config': expected an object");
      for (const auto& item : cfg.items()) {
        const std::string& k = item.key();
        bool known = k == "command" || k == "output" || k == "deterministic" || k == "csv";
        for (const auto& o : spec.options) known = known || k == o.key;
        if (!known) throw PreconditionError("invalid JSON: unknown key '" + k + "'");
        if (k == "command") {
          if (!item.value().is_string() || item.value() != command)
            throw PreconditionError("invalid JSON at 'command': does not match the subcommand");
        } else if (k == "output") {
          if (!item.value().is_string()) throw PreconditionError("invalid JSON at 'output': expected a string");
          output = item.value().get<std::string>();
        } else if (k == "csv") {
          if (!item.value().is_string()) throw PreconditionError("invalid JSON at 'csv': expected a string");
          csv_path = item.value().get<std::string>();
        } else if (k == "deterministic") {
          if (!item.value().is_boolean()) throw PreconditionError("invalid JSON at 'deterministic': expected a boolean");
          deterministic = item.value().get<bool>();
        } else {
          job[k] = item.value();
        }
      }
    }
    if (deterministic) set_thread_limit(1);

    JobOutput result = run_job(command, job, !csv_path.empty());
    prepend_inputs(result.report, command, job);
    const std::string text = json_io::dump(result.report);

    if (!output.empty()) {
      std::ofstream f(output, std::ios::binary);
      if (!f) throw PreconditionError("cannot write output: " + output);
      f << text;
    }
    if (!csv_path.empty()) {
      std::ofstream f(csv_path, std::ios::binary);
      if (!f) throw PreconditionError("cannot write csv: " + csv_path);
      f << result.csv;
    }
    out << text;
    return 0;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid JSON: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace modelspace::cli
