#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qms/lab/config.hpp"
#include "qms/lab/suites.hpp"

namespace qms::lab {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"describe", "lipnorm", "mk-dist", "bridge", "bound",
                                              "s0",       "ideal-map", "fell", "verify"};
  return names;
}

enum ExitCode : int { kOk = 0, kViolation = 1, kConfigFailure = 2, kNumericFailure = 3 };

/// Rows of one command; throws qms::Error subclasses on failure.
Rows execute(const std::string& command, const ExperimentConfig& config);

struct ReportPaths {
  std::string csv;
  std::string json;
};

/// Writes <out>/<experiment>-<command>.csv and the JSON sidecar.
ReportPaths write_report(const std::string& command, const ExperimentConfig& config, const Rows& rows);

/// JSON sidecar body.
nlohmann::json sidecar(const std::string& command, const ExperimentConfig& config, const Rows& rows);

/// Loads, executes and writes; diagnostics go to `err`.  Returns an ExitCode.
int run(const std::string& command, const std::string& config_path, const Overrides& overrides, std::ostream& out,
        std::ostream& err);

}  // namespace qms::lab
