#pragma once

#include <ostream>
#include <string>

#include "json.hpp"
#include "modelspace/embedding.hpp"

namespace modelspace::cli {

struct JobOutput {
  CertificateReport report;
  std::string csv;  // grid export for sublevel and volberg, empty otherwise
};

/// Runs one job. `job` holds the command's keys (the same names as the
/// command-line flags, with '-' replaced by '_'). The volberg grid CSV is
/// only computed when `with_csv` is set.
JobOutput run_job(const std::string& command, const nlohmann::json& job, bool with_csv = false);

/// Full command line: parses, runs, writes the report (and CSV) and returns
/// the exit code: 0 computed, 2 precondition violation, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modelspace::cli
