#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pipescope {

/// Subtracts a / (g A_leaf) times the unit step from a head trace.
std::vector<double> remove_initial_pulse(std::span<const double> head, std::span<const double> t,
                                         double wave_speed, double gravity, double leaf_area);

/// Centred running median over `window` samples. Near the ends the window is
/// clipped to the series. Even windows reach one sample further back and
/// average the two middle values.
std::vector<double> median_smooth(std::span<const double> series, std::size_t window);

/// Central differences inside, one-sided differences at both ends.
std::vector<double> differentiate(std::span<const double> series, std::span<const double> t);

/// Linear interpolation of (t_old, series) at t_new. Throws OutOfRange when a
/// query falls outside [t_old.front(), t_old.back()].
std::vector<double> resample(std::span<const double> series, std::span<const double> t_old,
                             std::span<const double> t_new);

/// 0, dt, 2 dt, ... up to `end` (inclusive, with a small tolerance).
std::vector<double> uniform_grid(double dt, double end);

}  // namespace pipescope
