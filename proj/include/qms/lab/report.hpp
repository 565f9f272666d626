#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qms/algebra.hpp"

namespace qms::lab {

/// One line of a report.  Whenever `empirical` and `certified` are both present
/// the row claims empirical ≤ certified + tolerance.
struct ReportRow {
  std::string experiment;
  std::string quantity;
  std::optional<int> level;
  std::optional<double> certified;
  std::optional<double> empirical;
  std::optional<double> tolerance;
  double seconds = 0.0;
  nlohmann::json witness;  // sidecar only

  bool violated() const;
};

/// Deviation row: a measured defect that must stay below `tol`.
ReportRow defect_row(std::string experiment, std::string quantity, std::optional<int> level, double worst, double tol);

/// Bound row: an empirical estimate against a certified bound.
ReportRow bound_row(std::string experiment, std::string quantity, std::optional<int> level, double certified,
                    double empirical, double tol);

/// Row carrying a certified value only.
ReportRow value_row(std::string experiment, std::string quantity, std::optional<int> level, double certified);

inline constexpr const char* kCsvHeader = "experiment,quantity,level,certified,empirical,tolerance,seconds";

/// Shortest round-trip decimal form ("inf"/"nan" spelled out).
std::string format_real(double x);

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);
nlohmann::json rows_to_json(const std::vector<ReportRow>& rows);

/// Coordinates as [[re, im], …] plus block sizes.
nlohmann::json element_json(const Element& x);
/// FNV-1a over the shortest round-trip form of the coordinates.
std::string element_digest(const Element& x);

/// Wall-clock timer for the seconds column.
class Stopwatch {
 public:
  Stopwatch();
  double seconds() const;

 private:
  long long start_ns_;
};

}  // namespace qms::lab
