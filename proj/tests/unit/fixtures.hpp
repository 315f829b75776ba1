#pragma once

#include <random>
#include <string>
#include <vector>

#include "pipescope/network.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
  return std::string(PIPESCOPE_DATA_DIR) + "/" + name;
}

inline pipescope::Network example1() { return pipescope::load_network(data_path("example1.json")); }
inline pipescope::Network example2() { return pipescope::load_network(data_path("example2.json")); }

inline pipescope::PipeSpec pipe(std::string id, std::string from, std::string to, double length,
                                pipescope::AreaFunction area = pipescope::AreaFunction::constant(1.0)) {
  return {std::move(id), std::move(from), std::move(to), length, std::move(area)};
}

/// A single pipe A -> B with x0 = B.
inline pipescope::NetworkSpec single_pipe_spec(double length, double area = 1.0) {
  pipescope::NetworkSpec s;
  s.wave_speed = 1000.0;
  s.vertices = {"A", "B"};
  s.pipes = {pipe("AB", "A", "B", length, pipescope::AreaFunction::constant(area))};
  s.x0 = "B";
  s.accessible = {"A"};
  return s;
}

/// Example 2 topology with every area set to one.
inline pipescope::Network uniform_star() {
  pipescope::NetworkSpec s;
  s.wave_speed = 1000.0;
  s.vertices = {"A", "B", "C", "D", "E"};
  s.pipes = {pipe("AE", "A", "E", 300), pipe("BE", "B", "E", 400), pipe("CE", "C", "E", 400),
             pipe("ED", "E", "D", 500)};
  s.x0 = "D";
  s.accessible = {"A", "B", "C"};
  return pipescope::validate_network(s);
}

/// Random tree without degree-2 vertices: repeatedly splits a leaf into a
/// junction with two new leaves. Lengths are multiples of `unit`.
inline pipescope::Network random_tree(std::mt19937& rng, int splits, double unit = 10.0) {
  std::uniform_int_distribution<int> len(5, 40);
  std::uniform_real_distribution<double> area(0.5, 2.0);
  pipescope::NetworkSpec s;
  s.wave_speed = 1000.0;
  int next = 0;
  auto vertex = [&] {
    s.vertices.push_back("v" + std::to_string(next++));
    return s.vertices.back();
  };
  auto add_pipe = [&](const std::string& a, const std::string& b) {
    s.pipes.push_back(pipe("p" + std::to_string(s.pipes.size()), a, b, unit * len(rng),
                           pipescope::AreaFunction::constant(area(rng))));
  };
  const std::string hub = vertex();
  std::vector<std::string> leaves;
  for (int k = 0; k < 3; ++k) {
    leaves.push_back(vertex());
    // Alternate orientation so both normals occur.
    if (k % 2 == 0) {
      add_pipe(leaves.back(), hub);
    } else {
      add_pipe(hub, leaves.back());
    }
  }
  for (int k = 0; k < splits; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    const std::size_t at = pick(rng);
    const std::string junction = leaves[at];
    leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(at));
    for (int c = 0; c < 2; ++c) {
      leaves.push_back(vertex());
      if ((k + c) % 2 == 0) {
        add_pipe(leaves.back(), junction);
      } else {
        add_pipe(junction, leaves.back());
      }
    }
  }
  s.x0 = leaves.front();
  s.accessible.assign(leaves.begin() + 1, leaves.end());
  return pipescope::validate_network(s);
}

}  // namespace fixtures
