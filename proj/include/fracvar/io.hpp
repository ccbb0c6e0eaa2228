#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracvar/estimators.hpp"
#include "fracvar/fbm.hpp"
#include "fracvar/harness.hpp"
#include "fracvar/sde.hpp"

namespace fracvar::io {

/// Shortest round-trip independent form: 17 significant digits, '.' separator.
std::string format_double(double x);

/// Optional header fields of a path document.
struct PathMeta {
  std::optional<double> h;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> drift_kind;
  std::optional<double> sigma;
  std::optional<double> x0;
};

struct PathDocument {
  Path path;
  PathMeta meta;
};

/// "t,value" header, then one row per grid point with t = j * delta.
void write_path_csv(std::ostream& os, const Path& path);
/// Parses the CSV form; rejects a non-uniform time column.
Path read_path_csv(std::istream& is);

nlohmann::json path_to_json(const Path& path, const PathMeta& meta = {});
PathDocument path_from_json(const nlohmann::json& doc);

/// Reads either format, deciding on the first non-blank character.
PathDocument read_path(std::istream& is);
PathDocument read_path_file(const std::string& filename);

nlohmann::json estimate_to_json(const HurstEstimate& est);

nlohmann::json drift_to_json(const Drift& drift);
Drift drift_from_json(const nlohmann::json& doc);

nlohmann::json setting_to_json(const StudySetting& setting);
/// Field-for-field StudySetting; unknown fields raise SettingError.
StudySetting setting_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const McReport& report);
/// "setting,n,mse,bias,variance,failures"
void write_report_csv(std::ostream& os, const std::vector<McReport>& reports);
/// "setting,n,rep,estimate" with empty estimate for failed replications.
void write_reps_csv(std::ostream& os, const McReport& report);
/// Rows of n, one column of MSE per setting.
std::string format_mse_table(const std::vector<McReport>& reports);

nlohmann::json clt_report_to_json(const CltReport& report);

}  // namespace fracvar::io
