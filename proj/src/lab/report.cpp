#include "qms/lab/report.hpp"

#include <charconv>
#include <cstdio>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>

namespace qms::lab {

bool ReportRow::violated() const {
  if (!certified || !empirical) return false;
  if (std::isnan(*empirical) || std::isnan(*certified)) return true;
  return *empirical > *certified + tolerance.value_or(0.0);
}

ReportRow defect_row(std::string experiment, std::string quantity, std::optional<int> level, double worst, double tol) {
  ReportRow r;
  r.experiment = std::move(experiment);
  r.quantity = std::move(quantity);
  r.level = level;
  r.certified = 0.0;
  r.empirical = worst;
  r.tolerance = tol;
  return r;
}

ReportRow bound_row(std::string experiment, std::string quantity, std::optional<int> level, double certified,
                    double empirical, double tol) {
  ReportRow r = defect_row(std::move(experiment), std::move(quantity), level, empirical, tol);
  r.certified = certified;
  return r;
}

ReportRow value_row(std::string experiment, std::string quantity, std::optional<int> level, double certified) {
  ReportRow r;
  r.experiment = std::move(experiment);
  r.quantity = std::move(quantity);
  r.level = level;
  r.certified = certified;
  return r;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (!std::isfinite(*v)) return format_real(*v);
  return *v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.experiment) << ',' << csv_field(r.quantity) << ',' << (r.level ? std::to_string(*r.level) : "")
        << ',' << opt(r.certified) << ',' << opt(r.empirical) << ',' << opt(r.tolerance) << ','
        << format_real(r.seconds) << '\n';
  }
}

nlohmann::json rows_to_json(const std::vector<ReportRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["quantity"] = r.quantity;
    j["level"] = r.level ? nlohmann::json(*r.level) : nlohmann::json(nullptr);
    j["certified"] = opt_json(r.certified);
    j["empirical"] = opt_json(r.empirical);
    j["tolerance"] = opt_json(r.tolerance);
    j["seconds"] = r.seconds;
    j["ok"] = !r.violated();
    if (!r.witness.is_null()) j["witness"] = r.witness;
    out.push_back(std::move(j));
  }
  return out;
}

nlohmann::json element_json(const Element& x) {
  nlohmann::json coords = nlohmann::json::array();
  const Vector v = x.coordinates();
  for (Eigen::Index i = 0; i < v.size(); ++i) coords.push_back({v(i).real(), v(i).imag()});
  return {{"blocks", x.algebra().sizes()}, {"coordinates", coords}, {"digest", element_digest(x)}};
}

std::string element_digest(const Element& x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  const Vector v = x.coordinates();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    feed(format_real(v(i).real()));
    feed(";");
    feed(format_real(v(i).imag()));
    feed("|");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Stopwatch::Stopwatch()
    : start_ns_(std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now().time_since_epoch())
                    .count()) {}

double Stopwatch::seconds() const {
  const long long now =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch()).count();
  return static_cast<double>(now - start_ns_) * 1e-9;
}

}  // namespace qms::lab
