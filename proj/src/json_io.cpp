#include "modelspace/json_io.hpp"

#include <cmath>
#include <initializer_list>

#include "modelspace/error.hpp"

namespace modelspace::json_io {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw PreconditionError("invalid JSON at '" + key + "': " + what);
}

void allow_keys(const json& j, const std::string& key, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(key, "expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw PreconditionError("invalid JSON: unknown key '" + key + "." + item.key() + "'");
  }
}

const json& require(const json& j, const std::string& key, const char* name) {
  if (!j.contains(name)) throw PreconditionError("invalid JSON: missing key '" + key + "." + name + "'");
  return j.at(name);
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) fail(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(key, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) fail(key, "expected an integer");
  return j.get<int>();
}

const json& array(const json& j, const std::string& key) {
  if (!j.is_array()) fail(key, "expected an array");
  return j;
}

std::string child(const std::string& key, const std::string& name) { return key + "." + name; }
std::string child(const std::string& key, std::size_t index) { return key + "[" + std::to_string(index) + "]"; }

}  // namespace

json parse(const std::string& text, const std::string& key) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(key, "malformed JSON (byte " + std::to_string(e.byte) + ")");
  }
}

Complex complex_from_json(const json& j, const std::string& key) {
  if (j.is_number()) return {number(j, key), 0.0};
  if (j.is_array()) {
    if (j.size() != 2) fail(key, "expected [re, im]");
    return {number(j[0], child(key, 0)), number(j[1], child(key, 1))};
  }
  allow_keys(j, key, {"re", "im"});
  return {number(require(j, key, "re"), child(key, "re")), number(require(j, key, "im"), child(key, "im"))};
}

ordered_json to_json(Complex z) {
  ordered_json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

Arc arc_from_json(const json& j, const std::string& key) {
  allow_keys(j, key, {"start", "length", "end"});
  const double start = number(require(j, key, "start"), child(key, "start"));
  if (j.contains("length") == j.contains("end")) fail(key, "give exactly one of 'length' and 'end'");
  try {
    if (j.contains("length")) return Arc(start, number(j.at("length"), child(key, "length")));
    return Arc::between(start, number(j.at("end"), child(key, "end")));
  } catch (const PreconditionError& e) {
    fail(key, e.what());
  }
}

ordered_json to_json(const Arc& arc) {
  ordered_json j;
  j["start"] = arc.start();
  j["length"] = arc.length();
  return j;
}

std::vector<Arc> arcs_from_json(const json& j, const std::string& key) {
  std::vector<Arc> out;
  for (std::size_t i = 0; i < array(j, key).size(); ++i) out.push_back(arc_from_json(j[i], child(key, i)));
  return out;
}

InnerFunction inner_from_json(const json& j, const std::string& key) {
  allow_keys(j, key, {"phase", "zeros", "singular_atoms", "truncation_level"});
  const double phase = j.contains("phase") ? number(j.at("phase"), child(key, "phase")) : 0.0;
  std::vector<BlaschkeZero> zeros;
  if (j.contains("zeros")) {
    const std::string zk = child(key, "zeros");
    const json& arr = array(j.at("zeros"), zk);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string k = child(zk, i);
      allow_keys(arr[i], k, {"re", "im", "mult"});
      const Complex a(number(require(arr[i], k, "re"), child(k, "re")), number(require(arr[i], k, "im"), child(k, "im")));
      const int mult = arr[i].contains("mult") ? integer(arr[i].at("mult"), child(k, "mult")) : 1;
      zeros.push_back({a, mult});
    }
  }
  std::vector<SingularAtom> atoms;
  if (j.contains("singular_atoms")) {
    const std::string ak = child(key, "singular_atoms");
    const json& arr = array(j.at("singular_atoms"), ak);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string k = child(ak, i);
      allow_keys(arr[i], k, {"angle", "mass"});
      atoms.push_back({number(require(arr[i], k, "angle"), child(k, "angle")),
                       number(require(arr[i], k, "mass"), child(k, "mass"))});
    }
  }
  const int level = j.contains("truncation_level") ? integer(j.at("truncation_level"), child(key, "truncation_level")) : 0;
  try {
    return InnerFunction(phase, std::move(zeros), std::move(atoms), level);
  } catch (const PreconditionError& e) {
    fail(key, e.what());
  }
}

ordered_json to_json(const InnerFunction& theta) {
  ordered_json j;
  j["phase"] = theta.phase();
  j["zeros"] = ordered_json::array();
  for (const auto& z : theta.zeros()) {
    ordered_json e;
    e["re"] = z.location.real();
    e["im"] = z.location.imag();
    e["mult"] = z.multiplicity;
    j["zeros"].push_back(e);
  }
  j["singular_atoms"] = ordered_json::array();
  for (const auto& a : theta.singular_atoms()) {
    ordered_json e;
    e["angle"] = a.angle;
    e["mass"] = a.mass;
    j["singular_atoms"].push_back(e);
  }
  if (theta.truncation_level() != 0) j["truncation_level"] = theta.truncation_level();
  return j;
}

MeasureSpec measure_from_json(const json& j, const std::string& key) {
  allow_keys(j, key, {"atoms", "density_pieces"});
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    const std::string ak = child(key, "atoms");
    const json& arr = array(j.at("atoms"), ak);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string k = child(ak, i);
      allow_keys(arr[i], k, {"re", "im", "mass"});
      atoms.push_back({{number(require(arr[i], k, "re"), child(k, "re")), number(require(arr[i], k, "im"), child(k, "im"))},
                       number(require(arr[i], k, "mass"), child(k, "mass"))});
    }
  }
  std::vector<DensityPiece> pieces;
  if (j.contains("density_pieces")) {
    const std::string pk = child(key, "density_pieces");
    const json& arr = array(j.at("density_pieces"), pk);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string k = child(pk, i);
      allow_keys(arr[i], k, {"start", "end", "length", "density"});
      json arc_part = arr[i];
      arc_part.erase("density");
      const double density = number(require(arr[i], k, "density"), child(k, "density"));
      pieces.push_back({arc_from_json(arc_part, k), density});
    }
  }
  try {
    return MeasureSpec(std::move(atoms), std::move(pieces));
  } catch (const PreconditionError& e) {
    fail(key, e.what());
  }
}

ordered_json to_json(const MeasureSpec& mu) {
  ordered_json j;
  j["atoms"] = ordered_json::array();
  for (const auto& a : mu.atoms()) {
    ordered_json e;
    e["re"] = a.location.real();
    e["im"] = a.location.imag();
    e["mass"] = a.mass;
    j["atoms"].push_back(e);
  }
  j["density_pieces"] = ordered_json::array();
  for (const auto& p : mu.density_pieces()) {
    ordered_json e;
    e["start"] = p.arc.start();
    e["end"] = p.arc.end();
    e["density"] = p.density;
    j["density_pieces"].push_back(e);
  }
  return j;
}

ModelElement element_from_json(const json& j, const std::string& key) {
  allow_keys(j, key, {"generator", "coefficients"});
  const InnerFunction theta = inner_from_json(require(j, key, "generator"), child(key, "generator"));
  const std::string ck = child(key, "coefficients");
  const json& arr = array(require(j, key, "coefficients"), ck);
  std::vector<Complex> c;
  for (std::size_t i = 0; i < arr.size(); ++i) c.push_back(complex_from_json(arr[i], child(ck, i)));
  try {
    return ModelElement(ModelBasis(theta), std::move(c));
  } catch (const PreconditionError& e) {
    fail(key, e.what());
  }
}

ordered_json to_json(const ModelElement& f) {
  ordered_json j;
  j["generator"] = to_json(f.basis.generator());
  j["coefficients"] = ordered_json::array();
  for (Complex c : f.coefficients) j["coefficients"].push_back(to_json(c));
  return j;
}

ScanConfig scan_from_json(const json& j, const std::string& key) {
  allow_keys(j, key, {"max_depth", "restriction", "mode"});
  ScanConfig c;
  if (j.contains("max_depth")) c.max_depth = integer(j.at("max_depth"), child(key, "max_depth"));
  if (j.contains("mode")) {
    const json& m = j.at("mode");
    if (m == "sup") c.mode = ScanMode::sup;
    else if (m == "inf") c.mode = ScanMode::inf;
    else fail(child(key, "mode"), "expected \"sup\" or \"inf\"");
  }
  if (j.contains("restriction")) {
    const std::string rk = child(key, "restriction");
    const json& r = j.at("restriction");
    allow_keys(r, rk, {"kind", "inner", "epsilon", "amplify", "grid_depth", "sigma"});
    const json& kind = require(r, rk, "kind");
    if (kind == "none") {
      c.restriction.kind = ScanRestriction::Kind::none;
    } else if (kind == "sublevel") {
      c.restriction.kind = ScanRestriction::Kind::sublevel;
      c.restriction.theta = inner_from_json(require(r, rk, "inner"), child(rk, "inner"));
      c.restriction.epsilon = number(require(r, rk, "epsilon"), child(rk, "epsilon"));
      if (r.contains("amplify")) c.restriction.amplification = number(r.at("amplify"), child(rk, "amplify"));
      if (r.contains("grid_depth")) c.restriction.grid_depth = integer(r.at("grid_depth"), child(rk, "grid_depth"));
    } else if (kind == "meets_set") {
      c.restriction.kind = ScanRestriction::Kind::meets_set;
      c.restriction.set = arcs_from_json(require(r, rk, "sigma"), child(rk, "sigma"));
    } else {
      fail(child(rk, "kind"), "expected \"none\", \"sublevel\" or \"meets_set\"");
    }
  }
  return c;
}

ordered_json to_json(const ScanConfig& config) {
  ordered_json j;
  j["max_depth"] = config.max_depth;
  ordered_json r;
  const auto& res = config.restriction;
  switch (res.kind) {
    case ScanRestriction::Kind::none:
      r["kind"] = "none";
      break;
    case ScanRestriction::Kind::sublevel:
      r["kind"] = "sublevel";
      if (res.theta) r["inner"] = to_json(*res.theta);
      r["epsilon"] = res.epsilon;
      r["amplify"] = res.amplification;
      r["grid_depth"] = res.grid_depth;
      break;
    case ScanRestriction::Kind::meets_set:
      r["kind"] = "meets_set";
      r["sigma"] = ordered_json::array();
      for (const auto& a : res.set) r["sigma"].push_back(to_json(a));
      break;
  }
  j["restriction"] = r;
  j["mode"] = config.mode == ScanMode::sup ? "sup" : "inf";
  return j;
}

ordered_json to_json(const CertificateReport& report) {
  if (!std::isfinite(report.value)) throw NumericalError("report value is not finite");
  ordered_json j;
  j["kind"] = to_string(report.kind);
  j["value"] = report.value;
  ordered_json w;
  if (const auto* arc = std::get_if<Arc>(&report.witness)) {
    w["type"] = "arc";
    w["start"] = arc->start();
    w["length"] = arc->length();
  } else if (const auto* z = std::get_if<Complex>(&report.witness)) {
    w["type"] = "point";
    w["re"] = z->real();
    w["im"] = z->imag();
  } else if (const auto* v = std::get_if<std::vector<Complex>>(&report.witness)) {
    w["type"] = "coefficients";
    w["values"] = ordered_json::array();
    for (Complex c : *v) w["values"].push_back(to_json(c));
  }
  j["witness"] = w;
  j["parameters"] = report.parameters;
  j["resolution"] = report.resolution;
  return j;
}

CertificateReport report_from_text(const std::string& text) {
  const std::string key = "report";
  const json j = parse(text, key);
  allow_keys(j, key, {"kind", "value", "witness", "parameters", "resolution"});
  CertificateReport r;
  const json& kind = require(j, key, "kind");
  if (!kind.is_string()) fail(child(key, "kind"), "expected a string");
  try {
    r.kind = report_kind_from_string(kind.get<std::string>());
  } catch (const PreconditionError& e) {
    fail(child(key, "kind"), e.what());
  }
  r.value = number(require(j, key, "value"), child(key, "value"));
  const json& w = require(j, key, "witness");
  const std::string wk = child(key, "witness");
  if (!w.is_null()) {
    const json& type = require(w, wk, "type");
    if (type == "arc") {
      allow_keys(w, wk, {"type", "start", "length"});
      r.witness = Arc(number(require(w, wk, "start"), child(wk, "start")), number(require(w, wk, "length"), child(wk, "length")));
    } else if (type == "point") {
      allow_keys(w, wk, {"type", "re", "im"});
      r.witness = Complex(number(require(w, wk, "re"), child(wk, "re")), number(require(w, wk, "im"), child(wk, "im")));
    } else if (type == "coefficients") {
      allow_keys(w, wk, {"type", "values"});
      const std::string vk = child(wk, "values");
      const json& arr = array(require(w, wk, "values"), vk);
      std::vector<Complex> v;
      for (std::size_t i = 0; i < arr.size(); ++i) v.push_back(complex_from_json(arr[i], child(vk, i)));
      r.witness = std::move(v);
    } else {
      fail(child(wk, "type"), "unknown witness type");
    }
  }
  const json& p = require(j, key, "parameters");
  const json& res = require(j, key, "resolution");
  if (!p.is_object()) fail(child(key, "parameters"), "expected an object");
  if (!res.is_object()) fail(child(key, "resolution"), "expected an object");
  // Re-read with insertion order kept.
  const ordered_json ordered = ordered_json::parse(text);
  r.parameters = ordered.at("parameters");
  r.resolution = ordered.at("resolution");
  return r;
}

std::string dump(const CertificateReport& report) { return to_json(report).dump(2) + "\n"; }

}  // namespace modelspace::json_io
