#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pipescope {

/// Head pulse split at a vertex joining pipes with admittances Y_k = g A_k / a.
///
/// Continuity of head plus conservation of flow give a single transmission
/// coefficient T = 2 Y_m / sum(Y) onto every other pipe and reflection R = T - 1
/// back into the incident pipe m.
template <class Scalar>
struct ScatterCoefficients {
  Scalar reflection;
  Scalar transmission;
};

template <class Scalar>
ScatterCoefficients<Scalar> scatter_coefficients(std::size_t incident,
                                                 std::span<const Scalar> admittances) {
  Scalar total = admittances[0];
  for (std::size_t k = 1; k < admittances.size(); ++k) total += admittances[k];
  Scalar t = Scalar(2) * admittances[incident] / total;
  return {t - Scalar(1), t};
}

struct ScatterResult {
  double reflected = 0.0;
  /// Transmitted heads onto the non-incident pipes, in admittance order.
  std::vector<double> transmitted;
};

/// Requires at least two positive admittances and a valid incident index.
ScatterResult junction_scatter(double incident_head, std::size_t incident,
                               std::span<const double> admittances);

}  // namespace pipescope
