#pragma once

#include <cstddef>
#include <vector>

#include "pipescope/network.hpp"

namespace pipescope {

struct SimConfig {
  double dx = 5.0;          // target cell length, m
  double courant = 0.95;    // a dt / dx
  double duration = 1.9;    // s
};

/// Uniform time grid t_n = n dt, n = 0 .. samples - 1.
struct SimGrid {
  double dt = 0.0;
  std::size_t samples = 0;

  double time(std::size_t n) const { return static_cast<double>(n) * dt; }
  std::vector<double> times() const;
};

/// dt = courant dx / a. Throws UnstableConfig for courant outside (0, 1].
SimGrid make_grid(const SimConfig& cfg, double wave_speed);

/// Prescribed inflow nu(x) Q(t, x) at each accessible leaf (indexed by slot),
/// sampled on the simulation grid. An empty series keeps the leaf closed.
struct BoundaryFlow {
  std::vector<std::vector<double>> inflow;
};

BoundaryFlow closed_flow(const Network& net);
/// Unit step (1 m^3/s from t = 0) at leaf `slot`, every other leaf closed.
BoundaryFlow unit_step_flow(const Network& net, const SimGrid& grid, std::size_t slot);

/// Head and discharge on one pipe, nodes at the cell boundaries.
struct PipeField {
  double dx = 0.0;
  std::vector<double> x;          // node offsets from the pipe's from-vertex
  std::vector<double> cell_area;  // area sampled at cell centres
  std::vector<double> H;          // [step * nodes + node]
  std::vector<double> Q;

  std::size_t nodes() const { return x.size(); }
  std::size_t cells() const { return cell_area.size(); }
  double head(std::size_t step, std::size_t node) const { return H[step * nodes() + node]; }
  double flow(std::size_t step, std::size_t node) const { return Q[step * nodes() + node]; }
};

struct Histories {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<PipeField> pipes;
  /// Head trace H(t, x_j) at each accessible leaf slot.
  std::vector<std::vector<double>> leaf_head;
};

/// Frictionless waterhammer transient by the method of characteristics.
///
/// Each pipe is split into round(length / dx) equal cells with the area taken
/// at cell centres. Interior nodes couple the two adjacent cell impedances,
/// vertices solve for one shared head with exact flow balance, accessible
/// leaves take the prescribed inflow and x0 is a closed end (Q = 0). For
/// courant < 1 the characteristic feet are found by linear interpolation
/// along the space line.
Histories simulate(const Network& net, const BoundaryFlow& flows, const SimConfig& cfg);

/// Relative mismatch between the boundary volume injected over [0, tau] and
/// the volume stored in the head field at tau,
/// |sum_j int nu Q dt - int H g A / a^2 dx| / max(|lhs|, |rhs|).
///
/// tau is floored onto the simulation grid. The time integral is the
/// trapezoid rule on the sampled inflow with the zero sample at t = -dt
/// included; the space integral is the per-cell trapezoid rule.
double conservation_residual(const Histories& hist, const Network& net, double tau);

/// Largest |sum nu Q| over all junctions and steps, relative to max |Q|.
double kirchhoff_residual(const Histories& hist, const Network& net);

}  // namespace pipescope
