#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pipescope/graph.hpp"
#include "pipescope/irm.hpp"
#include "pipescope/network.hpp"

namespace pipescope {

enum class KernelShift {
  OneSample,  // second kernel sampled at 2 tau - t - s + dt
  None,       // second kernel sampled at 2 tau - t - s
};

struct ReconConfig {
  double tau = 0.8;
  double h0 = 1.0;
  double dt = 0.01;
  double dx = 10.0;
  double lambda = 1e-5;
  KernelShift shift = KernelShift::OneSample;
};

/// Discretized boundary-control equation for one cut point.
///
/// Unknowns are Q(s_k, x_i) in pipe coordinates at s_k = k dt, k = 1..M,
/// stacked leaf by leaf. Row block j holds the head equation at leaf j.
struct BCSystem {
  std::size_t M = 0;
  std::size_t N = 0;
  double dt = 0.0;
  Eigen::MatrixXd H;                // (N M) x (N M), masked
  Eigen::VectorXd rhs;              // h0 on active rows, 0 elsewhere
  std::vector<bool> active;         // per (leaf, sample), leaf-major
  std::vector<double> normal;       // nu per leaf

  std::size_t active_count() const;
};

/// Throws GridMismatch when irm.dt != cfg.dt, HorizonTooShort when the IRM
/// does not reach 2 M dt, and ActionTimeExceedsTau when max f > tau + dt/4.
BCSystem assemble_system(const SampledIRM& irm, const ActionTimes& f, const ReconConfig& cfg,
                         const Network& net);

/// Boundary flows Q_p(t_l, x_i), l = 1..M, per leaf.
struct BoundaryFlows {
  double dt = 0.0;
  std::vector<std::vector<double>> q;
  std::vector<double> normal;
};

/// Tikhonov solve of the active subsystem, min |H q - rhs|^2 + lambda |q|^2,
/// as the stacked least-squares problem [H; sqrt(lambda) I] q = [rhs; 0].
/// Inactive samples come back as exact zeros. Throws SingularSystem when
/// lambda = 0 and the active subsystem is rank deficient.
BoundaryFlows solve_boundary_flows(const BCSystem& sys, double lambda);

/// V = a^2 / (h0 g) * sum_i sum_l nu_i Q(t_l, x_i) dt.
double volume(const BoundaryFlows& flows, const ReconConfig& cfg, const Network& net);

/// Volume cut off by the point `depth` metres into `pipe` from its far end.
double volume_at_depth(const Network& net, const SampledIRM& irm, std::size_t pipe, double depth,
                       const ReconConfig& cfg);

struct VolumeProfile {
  std::string pipe;
  std::vector<double> depth;   // m from the reconstruction start (the far end)
  std::vector<double> offset;  // same points in pipe coordinates
  std::vector<double> volume;  // m^3
};

struct AreaProfile {
  std::string pipe;
  std::vector<double> depth;   // start of each interval, from the far end
  std::vector<double> offset;  // same points in pipe coordinates
  std::vector<double> area;    // m^2
};

/// Deepest reachable point: min(length, a tau - max distance from the
/// boundary leaves behind the far end to that end).
double reachable_length(const Network& net, std::size_t pipe, double tau);

/// V at depth k dx, k = 1..floor(extent / dx), where extent defaults to the
/// reachable length. Points are independent and spread over `jobs` workers
/// (0 = hardware concurrency); results do not depend on the worker count.
VolumeProfile volume_profile(const Network& net, const SampledIRM& irm, std::size_t pipe,
                             const ReconConfig& cfg, std::size_t jobs = 1,
                             std::optional<double> extent = std::nullopt);

/// Forward difference quotient (V(k+1) - V(k)) / dx. Throws TooFewPoints.
AreaProfile area_profile(const VolumeProfile& vp, double dx);

void write_csv(std::ostream& os, const VolumeProfile& vp);
void write_csv(std::ostream& os, const AreaProfile& ap);

}  // namespace pipescope
