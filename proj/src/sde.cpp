#include "fracvar/sde.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "fracvar/error.hpp"
#include "fracvar/filter.hpp"

namespace fracvar {

namespace {

void require_bound(double norm_sum, double bound_m, const std::string& what) {
  if (!(bound_m > 0.0) || !std::isfinite(bound_m)) throw DomainError("drift bound M must be positive and finite");
  if (norm_sum > bound_m) {
    throw DomainError(what + " needs M >= " + std::to_string(norm_sum) + ", got M = " + std::to_string(bound_m));
  }
}

double parse_number(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw DomainError("bad number \"" + s + "\" in " + context);
  return v;
}

}  // namespace

Drift::Drift(DriftKind kind, double param, double bound_m, double norm_sum, std::string name, Function fn)
    : kind_(kind), param_(param), bound_m_(bound_m), custom_name_(std::move(name)), fn_(std::move(fn)) {
  require_bound(norm_sum, bound_m, this->name() + " drift");
}

Drift Drift::zero(double bound_m) { return Drift(DriftKind::zero, 0.0, bound_m, 0.0, {}, {}); }

Drift Drift::constant(double c, double bound_m) {
  return Drift(DriftKind::constant, c, bound_m, std::abs(c), {}, {});
}

Drift Drift::sine(double bound_m) { return Drift(DriftKind::sine, 0.0, bound_m, 2.0, {}, {}); }

Drift Drift::scaled_tanh(double theta, double bound_m) {
  return Drift(DriftKind::scaled_tanh, theta, bound_m, 1.0 + std::abs(theta), {}, {});
}

Drift Drift::custom(std::string name, Function fn, double sup_f, double sup_df, double bound_m) {
  if (!fn) throw DomainError("custom drift needs a callable");
  return Drift(DriftKind::custom, 0.0, bound_m, sup_f + sup_df, std::move(name), std::move(fn));
}

Drift Drift::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (head == "zero") return zero();
  if (head == "sine") return sine();
  if (head == "constant") return constant(parse_number(arg, "constant drift"));
  if (head == "tanh" || head == "scaled_tanh") return scaled_tanh(parse_number(arg, "tanh drift"));
  throw DomainError("unknown drift \"" + text + "\" (expected zero, constant:<c>, sine, tanh:<theta>)");
}

double Drift::operator()(double t, double x) const {
  switch (kind_) {
    case DriftKind::zero:
      return 0.0;
    case DriftKind::constant:
      return param_;
    case DriftKind::sine:
      return std::sin(x + t);
    case DriftKind::scaled_tanh:
      return std::tanh(param_ * x);
    case DriftKind::custom:
      return fn_(t, x);
  }
  return 0.0;
}

std::string Drift::name() const {
  switch (kind_) {
    case DriftKind::zero:
      return "zero";
    case DriftKind::constant:
      return "constant";
    case DriftKind::sine:
      return "sine";
    case DriftKind::scaled_tanh:
      return "scaled_tanh";
    case DriftKind::custom:
      return custom_name_.empty() ? "custom" : custom_name_;
  }
  return "unknown";
}

void SdeSpec::validate() const {
  require_hurst(h);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("noise scale sigma must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  if (!std::isfinite(x0)) throw DomainError("initial state must be finite");
}

std::size_t default_oversample(double h) { return h >= 0.5 ? 8 : 1; }

SdeTrajectory integrate(const SdeSpec& spec, const Path& fine_fbm, std::size_t oversample) {
  spec.validate();
  if (oversample == 0) throw DomainError("oversample must be at least 1");
  const std::size_t fine_steps = fine_fbm.size() - 1;
  if (fine_fbm.size() < 2 || fine_steps % oversample != 0) {
    throw ShapeError("fine fBm grid of " + std::to_string(fine_steps) + " steps is not a multiple of oversample " +
                     std::to_string(oversample));
  }
  const std::size_t n_obs = fine_steps / oversample;
  const double step = fine_fbm.delta;
  const double coarse = step * static_cast<double>(oversample);

  SdeTrajectory out;
  out.oversample = oversample;
  out.x = Path{coarse, std::vector<double>(n_obs + 1)};
  out.y = Path{coarse, std::vector<double>(n_obs + 1)};
  out.fbm = Path{coarse, std::vector<double>(n_obs + 1)};

  double y = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double noise = spec.sigma * fine_fbm.values[k];
    const double x = (spec.x0 + y) + noise;
    if (k % oversample == 0) {
      const std::size_t c = k / oversample;
      out.x.values[c] = x;
      out.y.values[c] = y;
      out.fbm.values[c] = fine_fbm.values[k];
    }
    if (k == fine_steps) break;
    const double f = spec.drift(static_cast<double>(k) * step, x);
    if (!std::isfinite(f)) {
      throw NumericalError("drift evaluation is not finite at fine step " + std::to_string(k));
    }
    y += f * step;
  }
  return out;
}

SdeTrajectory simulate(const SdeSpec& spec, std::size_t n_obs, std::size_t oversample, std::uint64_t seed,
                       const FgnGenerator* generator) {
  spec.validate();
  if (n_obs < 2) throw DomainError("simulation needs at least two observations");
  if (oversample == 0) throw DomainError("oversample must be at least 1");
  const std::size_t fine_steps = n_obs * oversample;
  const double step = spec.horizon / static_cast<double>(fine_steps);

  std::vector<double> increments;
  if (generator != nullptr) {
    if (generator->count() != fine_steps || generator->h() != spec.h) {
      throw ShapeError("fGn generator does not match the simulation grid");
    }
    increments = generator->sample(seed, step);
  } else {
    increments = FgnGenerator(fine_steps, spec.h).sample(seed, step);
  }
  return integrate(spec, cumulate(increments, step), oversample);
}

Path simulate_euler(const SdeSpec& spec, std::size_t n_obs, std::size_t oversample, std::uint64_t seed) {
  return simulate(spec, n_obs, oversample, seed).x;
}

Path drift_component(const Path& x_path, const Path& fbm_path, const SdeSpec& spec) {
  if (x_path.size() != fbm_path.size() || x_path.delta != fbm_path.delta) {
    throw ShapeError("state and noise paths differ in length or mesh");
  }
  Path y{x_path.delta, std::vector<double>(x_path.size())};
  for (std::size_t i = 0; i < x_path.size(); ++i) {
    y.values[i] = x_path.values[i] - spec.x0 - spec.sigma * fbm_path.values[i];
  }
  return y;
}

}  // namespace fracvar
