#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pipescope {

/// Rectangular perturbation of a pipe's area: `delta` is added on the open
/// interval (x0, x1), offsets measured from the pipe's `from` vertex.
struct AreaBlock {
  double x0 = 0.0;
  double x1 = 0.0;
  double delta = 0.0;
};

/// Cross-sectional area along one pipe, A(x) for x in [0, length].
///
/// Two representations are supported: a constant base with rectangular
/// perturbations (piecewise constant), or a sampled table with linear
/// interpolation (clamped outside the table range).
class AreaFunction {
public:
  AreaFunction() = default;

  static AreaFunction constant(double base);
  static AreaFunction with_blocks(double base, std::vector<AreaBlock> blocks);
  static AreaFunction table(std::vector<double> x, std::vector<double> area);

  double operator()(double x) const;

  /// Exact integral of A over [lo, hi].
  double integral(double lo, double hi) const;

  bool is_piecewise_constant() const { return table_x_.empty(); }

  /// Sorted, de-duplicated points in (0, length) where A may change.
  std::vector<double> breakpoints(double length) const;

  /// Smallest value of A on [0, length].
  double min_over(double length) const;

  /// True when A is constant on some neighbourhood of `x` inside [0, length].
  bool constant_near(double x, double length) const;

  /// Value of A just inside the pipe at end `x` (0 or length).
  double end_value(double x, double length) const;

  nlohmann::json to_json() const;

private:
  double base_ = 1.0;
  std::vector<AreaBlock> blocks_;
  std::vector<double> table_x_;
  std::vector<double> table_a_;
};

struct PipeSpec {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;
  AreaFunction area;
};

/// Unvalidated network description, as read from JSON or built in code.
struct NetworkSpec {
  double wave_speed = 1000.0;
  double gravity = 9.81;
  std::vector<std::string> vertices;
  std::vector<PipeSpec> pipes;
  std::string x0;
  std::vector<std::string> accessible;

  static NetworkSpec from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

struct Pipe {
  std::string id;
  std::size_t from = 0;
  std::size_t to = 0;
  double length = 0.0;
  AreaFunction area;
};

/// One pipe end attached to a vertex. `at_start` means the pipe's x = 0 end,
/// whose internal normal is +1; the x = length end has normal -1.
struct PipeEnd {
  std::size_t pipe = 0;
  bool at_start = true;

  double normal() const { return at_start ? 1.0 : -1.0; }
};

/// Validated, immutable tree network.
///
/// Accessible leaves are addressed by their position in `accessible()`; that
/// order drives every impulse-response and boundary-control index.
class Network {
public:
  const std::vector<std::string>& vertices() const { return vertex_ids_; }
  const std::vector<Pipe>& pipes() const { return pipes_; }
  const Pipe& pipe(std::size_t p) const { return pipes_.at(p); }

  double wave_speed() const { return wave_speed_; }
  double gravity() const { return gravity_; }

  std::size_t x0() const { return x0_; }
  const std::vector<std::size_t>& accessible() const { return accessible_; }
  std::size_t leaf_count() const { return accessible_.size(); }

  std::size_t vertex_index(const std::string& id) const;
  std::size_t pipe_index(const std::string& id) const;

  const std::vector<PipeEnd>& incident(std::size_t vertex) const { return incident_.at(vertex); }
  std::size_t degree(std::size_t vertex) const { return incident_.at(vertex).size(); }
  bool is_leaf(std::size_t vertex) const { return degree(vertex) == 1; }

  /// Position of `vertex` in the accessible list, if it is an accessible leaf.
  std::optional<std::size_t> leaf_slot(std::size_t vertex) const;

  /// The single pipe end at accessible leaf `slot`.
  PipeEnd leaf_end(std::size_t slot) const;
  /// Internal normal of the pipe at accessible leaf `slot`.
  double leaf_normal(std::size_t slot) const { return leaf_end(slot).normal(); }
  /// Area just inside the pipe at accessible leaf `slot`.
  double leaf_area(std::size_t slot) const;
  /// Characteristic impedance a / (g A) at accessible leaf `slot`.
  double leaf_impedance(std::size_t slot) const;

  /// Path length in metres between two vertices.
  double vertex_distance(std::size_t u, std::size_t v) const;

  /// Endpoint of pipe `p` that lies on the x0 side of the pipe.
  std::size_t x0_side_vertex(std::size_t p) const;
  /// Endpoint of pipe `p` that lies away from x0.
  std::size_t far_side_vertex(std::size_t p) const;

  /// Accessible-leaf slots whose path to x0 passes through `vertex`
  /// (including the vertex itself when it is a leaf).
  const std::vector<std::size_t>& leaves_behind(std::size_t vertex) const {
    return leaves_behind_.at(vertex);
  }

  nlohmann::json to_json() const;

private:
  friend Network validate_network(const NetworkSpec& spec);

  double wave_speed_ = 0.0;
  double gravity_ = 0.0;
  std::vector<std::string> vertex_ids_;
  std::vector<Pipe> pipes_;
  std::size_t x0_ = 0;
  std::vector<std::size_t> accessible_;
  std::vector<std::vector<PipeEnd>> incident_;
  std::vector<std::vector<double>> distance_;
  std::vector<std::size_t> parent_pipe_;  // towards x0; unused for x0 itself
  std::vector<std::vector<std::size_t>> leaves_behind_;
};

/// Checks the tree invariants and builds a Network. Throws pipescope::Error.
Network validate_network(const NetworkSpec& spec);

Network network_from_json(const nlohmann::json& doc);
Network load_network(const std::string& path);

}  // namespace pipescope
