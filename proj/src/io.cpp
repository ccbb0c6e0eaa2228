#include "fracvar/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "fracvar/error.hpp"

namespace fracvar::io {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_path_csv(std::ostream& os, const Path& path) {
  os << "t,value\n";
  for (std::size_t j = 0; j < path.size(); ++j) {
    os << format_double(path.time(j)) << ',' << format_double(path.values[j]) << '\n';
  }
}

namespace {

double parse_field(const std::string& text, std::size_t row, const char* column) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (first < last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    throw ParseError("malformed CSV at row " + std::to_string(row) + ": bad " + column + " \"" + text + "\"");
  }
  return v;
}

Path from_times(const std::vector<double>& t, std::vector<double> values) {
  if (values.size() < 2) throw ParseError("path needs at least two rows");
  const double delta = t[1] - t[0];
  if (!(delta > 0.0)) throw ParseError("time column must be strictly increasing");
  for (std::size_t j = 1; j < t.size(); ++j) {
    const double expected = t[0] + static_cast<double>(j) * delta;
    if (std::abs(t[j] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw ParseError("malformed CSV at row " + std::to_string(j + 1) + ": time grid is not uniform");
    }
  }
  return Path{delta, std::move(values)};
}

template <class T>
std::optional<T> optional_field(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<T>();
}

}  // namespace

Path read_path_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty path file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,value") throw ParseError("malformed CSV at row 0: expected header \"t,value\"");
  std::vector<double> t;
  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError("malformed CSV at row " + std::to_string(row) + ": expected two columns");
    }
    t.push_back(parse_field(line.substr(0, comma), row, "time"));
    values.push_back(parse_field(line.substr(comma + 1), row, "value"));
  }
  return from_times(t, std::move(values));
}

json path_to_json(const Path& path, const PathMeta& meta) {
  json doc;
  doc["h"] = meta.h ? json(*meta.h) : json(nullptr);
  doc["delta"] = path.delta;
  doc["seed"] = meta.seed ? json(*meta.seed) : json(nullptr);
  doc["values"] = path.values;
  if (meta.drift_kind) doc["drift_kind"] = *meta.drift_kind;
  if (meta.sigma) doc["sigma"] = *meta.sigma;
  if (meta.x0) doc["x0"] = *meta.x0;
  return doc;
}

PathDocument path_from_json(const json& doc) {
  try {
    PathDocument out;
    out.path.delta = doc.at("delta").get<double>();
    out.path.values = doc.at("values").get<std::vector<double>>();
    if (!(out.path.delta > 0.0)) throw ParseError("path delta must be positive");
    if (out.path.values.size() < 2) throw ParseError("path needs at least two values");
    out.meta.h = optional_field<double>(doc, "h");
    out.meta.seed = optional_field<std::uint64_t>(doc, "seed");
    out.meta.drift_kind = optional_field<std::string>(doc, "drift_kind");
    out.meta.sigma = optional_field<double>(doc, "sigma");
    out.meta.x0 = optional_field<double>(doc, "x0");
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed path JSON: ") + e.what());
  }
}

PathDocument read_path(std::istream& is) {
  is >> std::ws;
  if (is.peek() == '{') {
    json doc;
    try {
      is >> doc;
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed path JSON: ") + e.what());
    }
    return path_from_json(doc);
  }
  return PathDocument{read_path_csv(is), {}};
}

PathDocument read_path_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw ParseError("cannot open \"" + filename + "\"");
  return read_path(in);
}

json estimate_to_json(const HurstEstimate& est) {
  json diag;
  diag["u_values"] = est.diagnostics.u_values;
  diag["d_hat"] = est.diagnostics.d_hat ? json(*est.diagnostics.d_hat) : json(nullptr);
  return json{{"estimator", std::string(to_string(est.kind))},
              {"value", est.value},
              {"warnings", est.diagnostics.warnings},
              {"diagnostics", diag}};
}

json drift_to_json(const Drift& drift) {
  return json{{"kind", drift.name()}, {"param", drift.param()}, {"bound_m", drift.bound_m()}};
}

Drift drift_from_json(const json& doc) {
  if (doc.is_string()) return Drift::parse(doc.get<std::string>());
  if (!doc.is_object()) throw SettingError("drift must be a string or an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "kind" && key != "param" && key != "bound_m") throw SettingError("unknown drift field \"" + key + "\"");
  }
  const auto kind = doc.at("kind").get<std::string>();
  const double param = doc.value("param", 0.0);
  const auto bound = optional_field<double>(doc, "bound_m");
  if (kind == "zero") return bound ? Drift::zero(*bound) : Drift::zero();
  if (kind == "constant") return bound ? Drift::constant(param, *bound) : Drift::constant(param);
  if (kind == "sine") return bound ? Drift::sine(*bound) : Drift::sine();
  if (kind == "scaled_tanh" || kind == "tanh") return bound ? Drift::scaled_tanh(param, *bound) : Drift::scaled_tanh(param);
  throw SettingError("unknown drift kind \"" + kind + "\"");
}

json setting_to_json(const StudySetting& s) {
  return json{{"label", s.label},
              {"h_true", s.h_true},
              {"interval_end", s.interval_end},
              {"estimator_kind", std::string(to_string(s.estimator_kind))},
              {"base_filter", std::vector<double>(s.base_filter.coeffs().begin(), s.base_filter.coeffs().end())},
              {"sigma", s.sigma},
              {"drift", drift_to_json(s.drift)},
              {"n_list", s.n_list},
              {"reps", s.reps},
              {"seed", s.seed}};
}

StudySetting setting_from_json(const json& doc) {
  static const std::set<std::string> known{"label", "h_true",  "interval_end", "estimator_kind", "base_filter",
                                           "sigma", "drift",   "n_list",       "reps",           "seed"};
  if (!doc.is_object()) throw SettingError("study setting must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw SettingError("unknown study setting field \"" + key + "\"");
  }
  try {
    StudySetting s;
    s.label = doc.at("label").get<std::string>();
    s.h_true = doc.at("h_true").get<double>();
    s.interval_end = doc.at("interval_end").get<double>();
    s.estimator_kind = parse_estimator_kind(doc.at("estimator_kind").get<std::string>());
    const auto& bf = doc.at("base_filter");
    s.base_filter = bf.is_string() ? Filter::parse(bf.get<std::string>()) : Filter(bf.get<std::vector<double>>());
    s.sigma = doc.at("sigma").get<double>();
    s.drift = drift_from_json(doc.at("drift"));
    s.n_list = doc.at("n_list").get<std::vector<std::size_t>>();
    s.reps = doc.value("reps", std::size_t{100});
    s.seed = doc.value("seed", kDefaultStudySeed);
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw SettingError(std::string("malformed study setting: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SettingError(std::string("invalid study setting: ") + e.what());
  }
}

json report_to_json(const McReport& report) {
  json rows = json::array();
  for (const auto& r : report.per_n) {
    rows.push_back(json{{"n", r.n},
                        {"mse", r.mse},
                        {"bias", r.bias},
                        {"variance", r.variance},
                        {"successes", r.successes},
                        {"failures", r.failures},
                        {"median_abs_error", r.median_abs_error}});
  }
  return json{{"setting", setting_to_json(report.setting)},
              {"per_n", rows},
              {"oversample", report.oversample},
              {"variance_convention", "sample variance (divisor k-1); mse = bias^2 + variance*(k-1)/k"},
              {"wall_seconds", report.wall_seconds}};
}

void write_report_csv(std::ostream& os, const std::vector<McReport>& reports) {
  os << "setting,n,mse,bias,variance,failures\n";
  for (const auto& rep : reports) {
    for (const auto& r : rep.per_n) {
      os << rep.setting.label << ',' << r.n << ',' << format_double(r.mse) << ',' << format_double(r.bias) << ','
         << format_double(r.variance) << ',' << r.failures << '\n';
    }
  }
}

void write_reps_csv(std::ostream& os, const McReport& report) {
  os << "setting,n,rep,estimate\n";
  for (std::size_t i = 0; i < report.per_n.size(); ++i) {
    for (std::size_t r = 0; r < report.estimates[i].size(); ++r) {
      const double e = report.estimates[i][r];
      os << report.setting.label << ',' << report.per_n[i].n << ',' << r << ',' << (std::isnan(e) ? "" : format_double(e))
         << '\n';
    }
  }
}

std::string format_mse_table(const std::vector<McReport>& reports) {
  std::ostringstream os;
  os << std::setw(8) << "n";
  for (const auto& rep : reports) os << " | " << std::setw(12) << rep.setting.label;
  os << '\n';
  std::set<std::size_t> ns;
  for (const auto& rep : reports) {
    for (const auto& r : rep.per_n) ns.insert(r.n);
  }
  for (std::size_t n : ns) {
    os << std::setw(8) << n;
    for (const auto& rep : reports) {
      std::string cell = "-";
      for (const auto& r : rep.per_n) {
        if (r.n == n) {
          std::ostringstream c;
          c << std::setprecision(3) << r.mse;
          cell = c.str();
        }
      }
      os << " | " << std::setw(12) << cell;
    }
    os << '\n';
  }
  return os.str();
}

json clt_report_to_json(const CltReport& r) {
  json constraints = json::array();
  for (const auto& c : r.verdict.constraints) {
    constraints.push_back(json{{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"satisfied", c.satisfied}});
  }
  json sigma = nullptr;
  if (r.sigma_h) {
    sigma = json{{"value", r.sigma_h->value}, {"tail_estimate", r.sigma_h->tail_estimate}, {"truncation", r.sigma_h->truncation}};
  }
  return json{{"n", r.n},
              {"reps", r.reps},
              {"alpha", r.alpha},
              {"mean", r.moments.mean},
              {"variance", r.moments.variance},
              {"skewness", r.moments.skewness},
              {"excess_kurtosis", r.moments.excess_kurtosis},
              {"asymptotic_variance", sigma},
              {"variance_ratio", r.sigma_h ? json(r.variance_ratio) : json(nullptr)},
              {"clt_applies", r.verdict.clt_applies},
              {"constraints", constraints}};
}

}  // namespace fracvar::io
