#include "pipescope/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pipescope/error.hpp"

namespace pipescope {

std::vector<double> remove_initial_pulse(std::span<const double> head, std::span<const double> t,
                                         double wave_speed, double gravity, double leaf_area) {
  if (head.size() != t.size()) {
    throw Error(Errc::MismatchedSeriesLength, "head and time series differ in length");
  }
  const double z = wave_speed / (gravity * leaf_area);
  std::vector<double> out(head.begin(), head.end());
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (t[n] >= 0.0) out[n] -= z;
  }
  return out;
}

std::vector<double> median_smooth(std::span<const double> series, std::size_t window) {
  if (window == 0) throw Error(Errc::OutOfRange, "median window must be at least one sample");
  if (window > series.size()) {
    throw Error(Errc::WindowTooLarge, "median window of " + std::to_string(window) +
                                          " samples exceeds series of " +
                                          std::to_string(series.size()));
  }
  const std::size_t ahead = (window - 1) / 2;
  const std::size_t back = window - 1 - ahead;
  std::vector<double> out(series.size());
  std::vector<double> buf;
  buf.reserve(window);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t lo = i >= back ? i - back : 0;
    const std::size_t hi = std::min(series.size() - 1, i + ahead);
    buf.assign(series.begin() + static_cast<std::ptrdiff_t>(lo),
               series.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    std::sort(buf.begin(), buf.end());
    const std::size_t m = buf.size();
    out[i] = m % 2 == 1 ? buf[m / 2] : 0.5 * (buf[m / 2 - 1] + buf[m / 2]);
  }
  return out;
}

std::vector<double> differentiate(std::span<const double> series, std::span<const double> t) {
  if (series.size() != t.size()) {
    throw Error(Errc::MismatchedSeriesLength, "series and time grid differ in length");
  }
  const std::size_t n = series.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  out[0] = (series[1] - series[0]) / (t[1] - t[0]);
  out[n - 1] = (series[n - 1] - series[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (series[i + 1] - series[i - 1]) / (t[i + 1] - t[i - 1]);
  }
  return out;
}

std::vector<double> resample(std::span<const double> series, std::span<const double> t_old,
                             std::span<const double> t_new) {
  if (series.size() != t_old.size() || series.empty()) {
    throw Error(Errc::MismatchedSeriesLength, "series and time grid differ in length");
  }
  const double lo = t_old.front();
  const double hi = t_old.back();
  const double slack = 1e-9 * std::max(1.0, std::abs(hi - lo));
  std::vector<double> out(t_new.size());
  for (std::size_t k = 0; k < t_new.size(); ++k) {
    const double t = t_new[k];
    if (t < lo - slack || t > hi + slack) {
      throw Error(Errc::OutOfRange, "resample time " + std::to_string(t) + " outside [" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (t_old.size() == 1 || t <= lo) {
      out[k] = series.front();
      continue;
    }
    if (t >= hi) {
      out[k] = series.back();
      continue;
    }
    auto it = std::upper_bound(t_old.begin(), t_old.end(), t);
    const auto i = static_cast<std::size_t>(it - t_old.begin());
    const double w = (t - t_old[i - 1]) / (t_old[i] - t_old[i - 1]);
    out[k] = (1.0 - w) * series[i - 1] + w * series[i];
  }
  return out;
}

std::vector<double> uniform_grid(double dt, double end) {
  if (!(dt > 0.0) || end < 0.0) throw Error(Errc::OutOfRange, "grid needs dt > 0 and end >= 0");
  const auto n = static_cast<std::size_t>(std::floor(end / dt + 1e-9)) + 1;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * dt;
  return t;
}

}  // namespace pipescope
