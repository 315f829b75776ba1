#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pipescope/forward_sim.hpp"
#include "pipescope/network.hpp"

namespace pipescope {

using Rational = boost::multiprecision::cpp_rational;

/// One delta term c * delta(t - time) of a reflection kernel k_ij.
struct DeltaArrival {
  double time = 0.0;
  /// Head at the receiver per unit injected volume, in the same units as the
  /// direct coefficient a / (A g).
  double coeff = 0.0;
  /// coeff * g / a, exact: a rational function of the pipe areas only.
  Rational exact;
};

/// Delta-train impulse-response matrix of a network with piecewise-constant
/// areas. The direct term a / (A(x_i) g) delta_0 delta_ij is kept apart from
/// the reflection kernels k_ij.
struct AnalyticIRM {
  std::vector<std::string> leaves;
  double horizon = 0.0;
  std::vector<double> direct;
  std::vector<std::vector<DeltaArrival>> kernels;  // [i * N + j], sorted by time

  std::size_t leaf_count() const { return leaves.size(); }
  const std::vector<DeltaArrival>& at(std::size_t i, std::size_t j) const {
    return kernels.at(i * leaves.size() + j);
  }
};

/// Wavefront tracking through junction scattering, area steps and closed-end
/// reflections, with every accessible leaf and x0 closed.
///
/// Fronts are processed in arrival order; fronts sharing a pipe segment,
/// direction and arrival time are merged. Fronts below prune_eps times the
/// source amplitude, or arriving after the horizon, are dropped. Throws
/// NotPiecewiseConstant for tabulated areas and HorizonTooLarge once more than
/// max_events fronts have been processed.
AnalyticIRM oracle_irm(const Network& net, double horizon, double prune_eps = 1e-4,
                       std::size_t max_events = 5'000'000);

/// Uniformly sampled impulse-response matrix. Kernel sample n holds k_ij(n dt).
struct SampledIRM {
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<std::string> leaves;
  std::vector<double> direct;
  std::vector<std::vector<double>> k;  // [i * N + j]

  std::size_t leaf_count() const { return leaves.size(); }
  std::size_t samples() const { return k.empty() ? 0 : k.front().size(); }
  const std::vector<double>& kernel(std::size_t i, std::size_t j) const {
    return k.at(i * leaves.size() + j);
  }
  std::vector<double>& kernel(std::size_t i, std::size_t j) { return k.at(i * leaves.size() + j); }
};

/// Each delta becomes one box of height coeff / dt in the bin n with
/// n dt in [time - dt/2, time + dt/2). Coincident bins add.
SampledIRM sample_irm(const AnalyticIRM& irm, double dt);

/// Receiver head traces for a unit step injected at one accessible leaf.
struct StepResponseBundle {
  std::size_t source = 0;
  std::vector<double> t;
  std::vector<std::vector<double>> traces;  // per receiver slot
};

StepResponseBundle step_response(const Network& net, const SimConfig& cfg, std::size_t source);

/// Turns one step-response bundle into the kernel row k_source,j on the
/// simulation grid: direct-term removal on the self trace, running median over
/// floor(smooth_window_s / dt) samples, then time derivative.
std::vector<std::vector<double>> irm_row_from_step_response(const StepResponseBundle& bundle,
                                                            const Network& net,
                                                            double smooth_window_s);

struct MeasurementConfig {
  SimConfig sim;
  double resample_dt = 0.007;  // <= 0 keeps the simulation grid
  double smooth_window = 0.02;
  std::size_t jobs = 1;
};

/// Full synthetic measurement: one forward run per accessible leaf, the
/// per-row processing above, then linear resampling onto resample_dt.
SampledIRM simulate_irm(const Network& net, const MeasurementConfig& cfg);

}  // namespace pipescope
