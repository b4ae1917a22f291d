#pragma once

#include <string>

#include "json.hpp"
#include "modelspace/arc.hpp"
#include "modelspace/embedding.hpp"
#include "modelspace/geometry.hpp"
#include "modelspace/inner.hpp"
#include "modelspace/measure.hpp"
#include "modelspace/modelspace.hpp"

// JSON schemas. Readers reject unknown keys and throw PreconditionError with a
// single-line message naming the offending key.
namespace modelspace::json_io {

using nlohmann::json;
using nlohmann::ordered_json;

/// number, [re, im] or {"re": .., "im": ..}.
Complex complex_from_json(const json& j, const std::string& key);
ordered_json to_json(Complex z);

/// {"start": .., "length": ..} or {"start": .., "end": ..}.
Arc arc_from_json(const json& j, const std::string& key);
ordered_json to_json(const Arc& arc);
std::vector<Arc> arcs_from_json(const json& j, const std::string& key);

/// {"phase": .., "zeros": [{"re", "im", "mult"}], "singular_atoms": [{"angle", "mass"}]}
InnerFunction inner_from_json(const json& j, const std::string& key = "inner");
ordered_json to_json(const InnerFunction& theta);

/// {"atoms": [{"re", "im", "mass"}], "density_pieces": [{"start", "end", "density"}]}
MeasureSpec measure_from_json(const json& j, const std::string& key = "measure");
ordered_json to_json(const MeasureSpec& mu);

/// {"generator": .., "coefficients": [complex]}
ModelElement element_from_json(const json& j, const std::string& key = "element");
ordered_json to_json(const ModelElement& f);

/// {"max_depth": int, "restriction": {"kind": .., ...}, "mode": "sup" | "inf"}
ScanConfig scan_from_json(const json& j, const std::string& key = "scan");
ordered_json to_json(const ScanConfig& config);

/// {"kind", "value", "witness", "parameters", "resolution"}, in that order.
/// Throws NumericalError when the value is not finite.
ordered_json to_json(const CertificateReport& report);
CertificateReport report_from_text(const std::string& text);

/// Pretty-printed report followed by a newline.
std::string dump(const CertificateReport& report);

/// Parses text, naming `key` in the diagnostic on failure.
json parse(const std::string& text, const std::string& key);

}  // namespace modelspace::json_io
