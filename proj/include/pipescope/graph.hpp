#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "pipescope/network.hpp"

namespace pipescope {

/// A point strictly inside a pipe, `offset` metres from its `from` vertex.
struct PointOnPipe {
  std::size_t pipe = 0;
  double offset = 0.0;
};

struct AtVertex {
  std::size_t vertex = 0;
};

using Location = std::variant<AtVertex, PointOnPipe>;

/// Length in metres of the unique tree path between two locations.
double path_length(const Network& net, const Location& u, const Location& v);

/// Path length divided by the wave speed.
double travel_time(const Network& net, const Location& u, const Location& v);

/// Activation durations of the accessible leaves for one cut point.
///
/// f[slot] is the travel time from the leaf to the cut when the cut separates
/// that leaf from x0, and zero otherwise.
struct ActionTimes {
  PointOnPipe cut;
  std::vector<double> f;

  double max() const;
};

/// Throws PointIsJunction unless 0 < p.offset < length.
ActionTimes action_times(const Network& net, const PointOnPipe& p);

/// Cut placed `depth` metres from the end of `pipe` that faces away from x0.
/// Accepts depth in (0, length]; depth == length is the limit at the x0-side
/// endpoint approached from inside the pipe.
ActionTimes action_times_at_depth(const Network& net, std::size_t pipe, double depth);

struct CoveredInterval {
  std::size_t pipe = 0;
  double lo = 0.0;
  double hi = 0.0;
};

/// The part of the network cut off from x0 by a point.
struct AdmissibleSet {
  PointOnPipe cut;
  std::vector<CoveredInterval> covered;
  std::vector<std::size_t> boundary_leaves;  // accessible slots

  bool contains(const PointOnPipe& q) const;
  /// Integral of the true area over the covered region, in m^3.
  double volume(const Network& net) const;
};

AdmissibleSet admissible_set(const Network& net, const PointOnPipe& p);

}  // namespace pipescope
