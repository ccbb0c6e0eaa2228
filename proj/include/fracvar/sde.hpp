#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "fracvar/fbm.hpp"

namespace fracvar {

enum class DriftKind { zero, constant, sine, scaled_tanh, custom };

/// Bounded drift f(t, x) with a declared constant M >= ||f||_inf + ||df/dx||_inf.
///
/// Registry drifts:
///   zero            f = 0
///   constant(c)     f = c,               needs M >= |c|
///   sine            f = sin(x + t),      needs M >= 2
///   scaled_tanh(th) f = tanh(th * x),    needs M >= 1 + |th|
class Drift {
 public:
  using Function = std::function<double(double t, double x)>;

  static Drift zero(double bound_m = 1.0);
  static Drift constant(double c, double bound_m);
  static Drift constant(double c) { return constant(c, std::max(std::abs(c), 1e-300)); }
  static Drift sine(double bound_m = 2.0);
  static Drift scaled_tanh(double theta, double bound_m);
  static Drift scaled_tanh(double theta) { return scaled_tanh(theta, 1.0 + std::abs(theta)); }
  /// Host-supplied drift. sup_f and sup_df are the caller's bounds on
  /// ||f||_inf and ||df/dx||_inf; their sum must not exceed bound_m.
  static Drift custom(std::string name, Function fn, double sup_f, double sup_df, double bound_m);

  /// Parses "zero", "constant:<c>", "sine", "tanh:<theta>".
  static Drift parse(const std::string& text);

  double operator()(double t, double x) const;

  DriftKind kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }
  double bound_m() const noexcept { return bound_m_; }
  std::string name() const;

 private:
  Drift(DriftKind kind, double param, double bound_m, double norm_sum, std::string name, Function fn);

  DriftKind kind_;
  double param_;
  double bound_m_;
  std::string custom_name_;
  Function fn_;
};

struct SdeSpec {
  double x0 = 0.0;
  Drift drift = Drift::zero();
  double sigma = 1.0;
  double horizon = 1.0;
  double h = 0.5;

  void validate() const;
};

/// Coarse-grid outputs of one simulation.
struct SdeTrajectory {
  Path x;    // X_t
  Path y;    // integral of the drift, Y_t
  Path fbm;  // driving B^H_t
  std::size_t oversample = 1;
};

/// 8 for H >= 1/2, 1 otherwise.
std::size_t default_oversample(double h);

/// Explicit Euler on the fine grid carried by `fine_fbm` (oversample steps
/// per coarse step), recording every oversample-th point. The state is kept
/// as X = x0 + Y + sigma * B with Y accumulated from f(t_k, X_k) * delta, so
/// the noise enters without discretization error.
SdeTrajectory integrate(const SdeSpec& spec, const Path& fine_fbm, std::size_t oversample);

/// Samples exact fBm increments on the fine grid of n_obs * oversample
/// steps over [0, horizon] and integrates. A generator of matching size may
/// be passed to reuse its embedding.
SdeTrajectory simulate(const SdeSpec& spec, std::size_t n_obs, std::size_t oversample, std::uint64_t seed,
                       const FgnGenerator* generator = nullptr);

/// Path of n_obs + 1 values with delta = horizon / n_obs.
Path simulate_euler(const SdeSpec& spec, std::size_t n_obs, std::size_t oversample, std::uint64_t seed);

/// Y = X - x0 - sigma * B, pointwise.
Path drift_component(const Path& x_path, const Path& fbm_path, const SdeSpec& spec);

}  // namespace fracvar
