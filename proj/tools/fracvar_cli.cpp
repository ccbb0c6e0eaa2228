// fracvar: sample fBm, simulate fBm-driven SDEs, estimate Hurst indices and
// run Monte Carlo studies of the quadratic-variation estimators.
//
// Exit codes: 0 success, 1 domain or data error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fracvar/fracvar.hpp"

namespace {

using namespace fracvar;

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FRACVAR_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("FRACVAR_SEED is not an unsigned integer: ") + env);
    }
  }
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::cerr << "fracvar: no --seed or FRACVAR_SEED given, using seed " << seed << '\n';
  return seed;
}

// Writes to --out when set, standard output otherwise.
void emit(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw ParseError("cannot open \"" + out + "\" for writing");
  file << content;
}

std::string render_path(const Path& path, const std::string& format, const io::PathMeta& meta) {
  std::ostringstream os;
  if (format == "json") {
    os << io::path_to_json(path, meta).dump(2) << '\n';
  } else {
    io::write_path_csv(os, path);
  }
  return os.str();
}

struct FbmArgs {
  double h = 0.5;
  std::size_t n = 2;
  double delta = 1.0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

int run_fbm(const FbmArgs& a) {
  FbmSpec spec{a.h, a.n, a.delta, resolve_seed(a.seed)};
  const Path path = sample_fbm(spec);
  io::PathMeta meta;
  meta.h = a.h;
  meta.seed = spec.seed;
  emit(a.out, render_path(path, a.format, meta));
  return kOk;
}

struct SimulateArgs {
  double h = 0.5;
  std::size_t n = 1000;
  double horizon = 1.0;
  double sigma = 1.0;
  double x0 = 0.0;
  std::string drift = "sine";
  std::optional<std::size_t> oversample;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

int run_simulate(const SimulateArgs& a) {
  SdeSpec spec;
  spec.x0 = a.x0;
  spec.drift = Drift::parse(a.drift);
  spec.sigma = a.sigma;
  spec.horizon = a.horizon;
  spec.h = a.h;
  const std::uint64_t seed = resolve_seed(a.seed);
  const Path path = simulate_euler(spec, a.n, a.oversample.value_or(default_oversample(a.h)), seed);
  io::PathMeta meta;
  meta.h = a.h;
  meta.seed = seed;
  meta.drift_kind = spec.drift.name();
  meta.sigma = a.sigma;
  meta.x0 = a.x0;
  emit(a.out, render_path(path, a.format, meta));
  return kOk;
}

struct EstimateArgs {
  std::string input;
  std::string estimator = "standard";
  std::string filter = "-1,1";
  std::optional<double> delta;
  std::string out;
};

int run_estimate(const EstimateArgs& a) {
  const auto kind = parse_estimator_kind(a.estimator);
  const Filter base = Filter::parse(a.filter);
  const io::PathDocument doc = io::read_path_file(a.input);
  std::vector<std::string> notes;

  HurstEstimate est;
  switch (kind) {
    case EstimatorKind::standard:
      if (a.delta) notes.push_back("--delta ignored: the standard estimator assumes delta = 1/n");
      est = standard_estimator(doc.path);
      break;
    case EstimatorKind::ratio:
      if (a.delta) notes.push_back("--delta ignored: the ratio estimator does not use the mesh");
      est = ratio_estimator(doc.path, base);
      break;
    case EstimatorKind::regression_h1: {
      double delta = doc.path.delta;
      if (a.delta) {
        if (*a.delta != doc.path.delta) {
          notes.push_back("--delta " + io::format_double(*a.delta) + " overrides the file mesh " +
                          io::format_double(doc.path.delta));
        }
        delta = *a.delta;
      }
      est = h1_estimator(FilterFamily::thinned_pair(base), doc.path, delta);
      break;
    }
    case EstimatorKind::regression_h2:
      if (a.delta) notes.push_back("--delta ignored: the intercept regression does not use the mesh");
      est = h2_estimator(FilterFamily::thinned_pair(base), doc.path);
      break;
  }
  for (const auto& n : notes) std::cerr << "fracvar: " << n << '\n';
  est.diagnostics.warnings.insert(est.diagnostics.warnings.end(), notes.begin(), notes.end());
  emit(a.out, io::estimate_to_json(est).dump(2) + "\n");
  return kOk;
}

struct StudyArgs {
  std::string setting;
  std::optional<std::size_t> reps;
  std::size_t parallelism = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> oversample;
  std::string out;
  std::string format = "json";
  std::string dump_reps;
};

std::string builtin_labels() {
  std::string s;
  for (const auto& b : builtin_settings()) s += (s.empty() ? "" : ", ") + b.label;
  return s + ", all";
}

int run_study(const StudyArgs& a) {
  std::vector<StudySetting> settings;
  if (a.setting == "all") {
    settings = builtin_settings();
  } else if (auto b = find_builtin(a.setting)) {
    settings.push_back(*b);
  } else if (std::filesystem::is_regular_file(a.setting)) {
    std::ifstream in(a.setting);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw SettingError(std::string("malformed setting file: ") + e.what());
    }
    settings.push_back(io::setting_from_json(doc));
  } else {
    throw UsageError("unknown setting \"" + a.setting + "\"; builtin labels: " + builtin_labels());
  }

  std::vector<McReport> reports;
  RunOptions options;
  options.parallelism = a.parallelism;
  options.oversample = a.oversample;
  for (auto s : settings) {
    if (a.reps) s.reps = *a.reps;
    if (a.seed || std::getenv("FRACVAR_SEED") != nullptr) s.seed = resolve_seed(a.seed);
    reports.push_back(run_setting(s, options));
  }

  std::cout << io::format_mse_table(reports);

  std::ostringstream os;
  if (a.format == "csv") {
    io::write_report_csv(os, reports);
  } else {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : reports) doc.push_back(io::report_to_json(r));
    os << (reports.size() == 1 ? doc[0] : doc).dump(2) << '\n';
  }
  if (!a.out.empty()) emit(a.out, os.str());

  if (!a.dump_reps.empty()) {
    std::ostringstream reps;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      std::ostringstream one;
      io::write_reps_csv(one, reports[i]);
      std::string text = one.str();
      if (i > 0) text = text.substr(text.find('\n') + 1);  // single header
      reps << text;
    }
    emit(a.dump_reps, reps.str());
  }
  return kOk;
}

struct CltArgs {
  std::string filter = "-1,1";
  double h = 0.5;
  double alpha = 1.0;
  std::size_t n = 4096;
  std::size_t reps = 2000;
  bool sde = false;
  std::size_t parallelism = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_clt(const CltArgs& a) {
  CltOptions options;
  options.parallelism = a.parallelism;
  if (a.sde) options.sde_drift = Drift::sine();
  const auto report = clt_study(Filter::parse(a.filter), a.h, a.alpha, a.n, a.reps, resolve_seed(a.seed), options);
  emit(a.out, io::clt_report_to_json(report).dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hurst index estimation from filtered quadratic variations"};
  // Short -h would collide with the Hurst option.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  FbmArgs fbm;
  auto* c_fbm = app.add_subcommand("fbm", "Sample a fractional Brownian motion path");
  c_fbm->add_option("--h", fbm.h, "Hurst index in (0,1)")->required();
  c_fbm->add_option("--n", fbm.n, "Number of grid points (including t = 0)")->required();
  c_fbm->add_option("--delta", fbm.delta, "Grid mesh");
  c_fbm->add_option("--seed", fbm.seed, "Random seed (falls back to FRACVAR_SEED)");
  c_fbm->add_option("--out", fbm.out, "Output file (default: standard output)");
  c_fbm->add_option("--format", fbm.format)->check(CLI::IsMember({"csv", "json"}));

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate X = x0 + int f(s, X_s) ds + sigma B^H");
  c_sim->add_option("--h", sim.h, "Hurst index in (0,1)")->required();
  c_sim->add_option("--n", sim.n, "Number of observation steps")->required();
  c_sim->add_option("--horizon", sim.horizon, "Right end of the time interval");
  c_sim->add_option("--sigma", sim.sigma, "Noise scale");
  c_sim->add_option("--x0", sim.x0, "Initial state");
  c_sim->add_option("--drift", sim.drift, "zero | constant:<c> | sine | tanh:<theta>");
  c_sim->add_option("--oversample", sim.oversample, "Fine steps per observation step");
  c_sim->add_option("--seed", sim.seed, "Random seed (falls back to FRACVAR_SEED)");
  c_sim->add_option("--out", sim.out, "Output file (default: standard output)");
  c_sim->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "json"}));

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Estimate the Hurst index of an observed path");
  c_est->add_option("--input", est.input, "Path file (CSV t,value or JSON)")->required();
  c_est->add_option("--estimator", est.estimator, "standard | ratio | regression_h1 | regression_h2")
      ->check(CLI::IsMember({"standard", "ratio", "regression_h1", "regression_h2", "h1", "h2"}));
  c_est->add_option("--filter", est.filter, "Base filter, e.g. \"-1,1\" or \"1,-2,1\"");
  c_est->add_option("--delta", est.delta, "Mesh override for regression_h1");
  c_est->add_option("--out", est.out, "Output JSON file (default: standard output)");

  StudyArgs study;
  auto* c_study = app.add_subcommand("study", "Run a Monte Carlo MSE study");
  c_study->add_option("--setting", study.setting, "Builtin label (Study-S1 .. Study-S7, all) or setting JSON file")
      ->required();
  c_study->add_option("--reps", study.reps, "Replications per sample size (default 100)");
  c_study->add_option("--parallelism", study.parallelism, "Worker threads");
  c_study->add_option("--seed", study.seed, "Base seed override");
  c_study->add_option("--oversample", study.oversample, "Simulator oversample override");
  c_study->add_option("--out", study.out, "Report file");
  c_study->add_option("--format", study.format)->check(CLI::IsMember({"csv", "json"}));
  c_study->add_option("--dump-reps", study.dump_reps, "CSV file of per-replication estimates");

  CltArgs clt;
  auto* c_clt = app.add_subcommand("clt", "Moments of sqrt(n) V over replications");
  c_clt->add_option("--filter", clt.filter, "Filter coefficients");
  c_clt->add_option("--h", clt.h, "Hurst index in (0,1)")->required();
  c_clt->add_option("--alpha", clt.alpha, "Mesh exponent, delta = n^-alpha");
  c_clt->add_option("--n", clt.n, "Observations per path");
  c_clt->add_option("--reps", clt.reps, "Replications (>= 500)");
  c_clt->add_flag("--sde", clt.sde, "Use SDE paths with sine drift instead of pure fBm");
  c_clt->add_option("--parallelism", clt.parallelism, "Worker threads");
  c_clt->add_option("--seed", clt.seed, "Random seed (falls back to FRACVAR_SEED)");
  c_clt->add_option("--out", clt.out, "Output JSON file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*c_fbm) return run_fbm(fbm);
    if (*c_sim) return run_simulate(sim);
    if (*c_est) return run_estimate(est);
    if (*c_study) return run_study(study);
    if (*c_clt) return run_clt(clt);
  } catch (const UsageError& e) {
    std::cerr << "fracvar: " << e.what() << '\n';
    return kUsageError;
  } catch (const DegenerateDataError& e) {
    std::cerr << "fracvar: degenerate data: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "fracvar: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
