#include "pipescope/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include "pipescope/error.hpp"

namespace pipescope {

// ---------------------------------------------------------------------------
// AreaFunction

AreaFunction AreaFunction::constant(double base) {
  AreaFunction a;
  a.base_ = base;
  return a;
}

AreaFunction AreaFunction::with_blocks(double base, std::vector<AreaBlock> blocks) {
  AreaFunction a;
  a.base_ = base;
  for (const auto& b : blocks) {
    if (!(b.x1 > b.x0)) {
      throw Error(Errc::InvalidNetwork, "area block needs x0 < x1");
    }
  }
  a.blocks_ = std::move(blocks);
  return a;
}

AreaFunction AreaFunction::table(std::vector<double> x, std::vector<double> area) {
  if (x.empty() || x.size() != area.size()) {
    throw Error(Errc::InvalidNetwork, "area table needs matching, non-empty x and A columns");
  }
  if (!std::is_sorted(x.begin(), x.end()) ||
      std::adjacent_find(x.begin(), x.end()) != x.end()) {
    throw Error(Errc::InvalidNetwork, "area table x must be strictly increasing");
  }
  AreaFunction a;
  a.base_ = area.front();
  a.table_x_ = std::move(x);
  a.table_a_ = std::move(area);
  return a;
}

double AreaFunction::operator()(double x) const {
  if (!table_x_.empty()) {
    if (x <= table_x_.front()) return table_a_.front();
    if (x >= table_x_.back()) return table_a_.back();
    auto it = std::upper_bound(table_x_.begin(), table_x_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - table_x_.begin()) - 1;
    double w = (x - table_x_[k]) / (table_x_[k + 1] - table_x_[k]);
    return (1.0 - w) * table_a_[k] + w * table_a_[k + 1];
  }
  double a = base_;
  for (const auto& b : blocks_) {
    if (x > b.x0 && x < b.x1) a += b.delta;
  }
  return a;
}

double AreaFunction::integral(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  if (!table_x_.empty()) {
    std::vector<double> cuts{lo};
    for (double x : table_x_) {
      if (x > lo && x < hi) cuts.push_back(x);
    }
    cuts.push_back(hi);
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      sum += 0.5 * ((*this)(cuts[k]) + (*this)(cuts[k + 1])) * (cuts[k + 1] - cuts[k]);
    }
    return sum;
  }
  double sum = base_ * (hi - lo);
  for (const auto& b : blocks_) {
    double overlap = std::min(hi, b.x1) - std::max(lo, b.x0);
    if (overlap > 0.0) sum += b.delta * overlap;
  }
  return sum;
}

std::vector<double> AreaFunction::breakpoints(double length) const {
  std::vector<double> pts;
  if (!table_x_.empty()) {
    for (double x : table_x_) {
      if (x > 0.0 && x < length) pts.push_back(x);
    }
  } else {
    for (const auto& b : blocks_) {
      if (b.x0 > 0.0 && b.x0 < length) pts.push_back(b.x0);
      if (b.x1 > 0.0 && b.x1 < length) pts.push_back(b.x1);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double AreaFunction::min_over(double length) const {
  std::vector<double> cuts{0.0};
  auto bps = breakpoints(length);
  cuts.insert(cuts.end(), bps.begin(), bps.end());
  cuts.push_back(length);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    lowest = std::min(lowest, (*this)(0.5 * (cuts[k] + cuts[k + 1])));
    if (!table_x_.empty()) {
      lowest = std::min({lowest, (*this)(cuts[k]), (*this)(cuts[k + 1])});
    }
  }
  return lowest;
}

bool AreaFunction::constant_near(double x, double length) const {
  if (table_x_.empty()) return true;  // piecewise constant
  if (x <= 0.0) {
    if (table_x_.front() > 0.0 || table_x_.back() <= 0.0) return true;
    auto it = std::upper_bound(table_x_.begin(), table_x_.end(), 0.0);
    std::size_t k = static_cast<std::size_t>(it - table_x_.begin()) - 1;
    return table_a_[k] == table_a_[k + 1];
  }
  if (table_x_.back() < length || table_x_.front() >= length) return true;
  auto it = std::lower_bound(table_x_.begin(), table_x_.end(), length);
  std::size_t k = static_cast<std::size_t>(it - table_x_.begin());
  return table_a_[k - 1] == table_a_[k];
}

double AreaFunction::end_value(double x, double length) const {
  auto bps = breakpoints(length);
  if (x <= 0.0) {
    double next = bps.empty() ? length : bps.front();
    return (*this)(table_x_.empty() ? 0.5 * next : 0.0);
  }
  double prev = bps.empty() ? 0.0 : bps.back();
  return (*this)(table_x_.empty() ? 0.5 * (prev + length) : length);
}

nlohmann::json AreaFunction::to_json() const {
  if (!table_x_.empty()) {
    return {{"table", {{"x", table_x_}, {"A", table_a_}}}};
  }
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : blocks_) {
    blocks.push_back({{"x0", b.x0}, {"x1", b.x1}, {"delta", b.delta}});
  }
  return {{"base", base_}, {"blocks", blocks}};
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string id_string(const nlohmann::json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(Errc::ParseError, std::string(what) + " must be a string or integer id");
}

AreaFunction area_from_json(const nlohmann::json& v) {
  if (v.is_number()) return AreaFunction::constant(v.get<double>());
  if (!v.is_object()) throw Error(Errc::ParseError, "pipe area must be a number or object");
  if (v.contains("table")) {
    const auto& t = v.at("table");
    return AreaFunction::table(t.at("x").get<std::vector<double>>(),
                               t.at("A").get<std::vector<double>>());
  }
  std::vector<AreaBlock> blocks;
  if (v.contains("blocks")) {
    for (const auto& b : v.at("blocks")) {
      blocks.push_back({b.at("x0").get<double>(), b.at("x1").get<double>(),
                        b.at("delta").get<double>()});
    }
  }
  return AreaFunction::with_blocks(v.at("base").get<double>(), std::move(blocks));
}

}  // namespace

NetworkSpec NetworkSpec::from_json(const nlohmann::json& doc) {
  NetworkSpec spec;
  try {
    spec.wave_speed = doc.at("wave_speed").get<double>();
    spec.gravity = doc.value("gravity", 9.81);
    for (const auto& v : doc.at("vertices")) spec.vertices.push_back(id_string(v, "vertex"));
    for (const auto& p : doc.at("pipes")) {
      PipeSpec ps;
      ps.id = id_string(p.at("id"), "pipe id");
      ps.from = id_string(p.at("from"), "pipe from");
      ps.to = id_string(p.at("to"), "pipe to");
      ps.length = p.at("length").get<double>();
      ps.area = p.contains("area") ? area_from_json(p.at("area")) : AreaFunction::constant(1.0);
      spec.pipes.push_back(std::move(ps));
    }
    spec.x0 = id_string(doc.at("x0"), "x0");
    for (const auto& v : doc.at("accessible")) spec.accessible.push_back(id_string(v, "leaf"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return spec;
}

nlohmann::json NetworkSpec::to_json() const {
  nlohmann::json pipes_json = nlohmann::json::array();
  for (const auto& p : pipes) {
    pipes_json.push_back({{"id", p.id},
                          {"from", p.from},
                          {"to", p.to},
                          {"length", p.length},
                          {"area", p.area.to_json()}});
  }
  return {{"wave_speed", wave_speed}, {"gravity", gravity}, {"vertices", vertices},
          {"pipes", pipes_json},      {"x0", x0},           {"accessible", accessible}};
}

// ---------------------------------------------------------------------------
// Network

std::size_t Network::vertex_index(const std::string& id) const {
  auto it = std::find(vertex_ids_.begin(), vertex_ids_.end(), id);
  if (it == vertex_ids_.end()) throw Error(Errc::UnknownVertex, "no vertex '" + id + "'");
  return static_cast<std::size_t>(it - vertex_ids_.begin());
}

std::size_t Network::pipe_index(const std::string& id) const {
  for (std::size_t p = 0; p < pipes_.size(); ++p) {
    if (pipes_[p].id == id) return p;
  }
  throw Error(Errc::UnknownPipe, "no pipe '" + id + "'");
}

std::optional<std::size_t> Network::leaf_slot(std::size_t vertex) const {
  auto it = std::find(accessible_.begin(), accessible_.end(), vertex);
  if (it == accessible_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - accessible_.begin());
}

PipeEnd Network::leaf_end(std::size_t slot) const {
  return incident_.at(accessible_.at(slot)).front();
}

double Network::leaf_area(std::size_t slot) const {
  PipeEnd end = leaf_end(slot);
  const Pipe& p = pipes_[end.pipe];
  return p.area.end_value(end.at_start ? 0.0 : p.length, p.length);
}

double Network::leaf_impedance(std::size_t slot) const {
  return wave_speed_ / (gravity_ * leaf_area(slot));
}

double Network::vertex_distance(std::size_t u, std::size_t v) const {
  return distance_.at(u).at(v);
}

std::size_t Network::x0_side_vertex(std::size_t p) const {
  const Pipe& pipe = pipes_.at(p);
  return distance_[pipe.from][x0_] < distance_[pipe.to][x0_] ? pipe.from : pipe.to;
}

std::size_t Network::far_side_vertex(std::size_t p) const {
  const Pipe& pipe = pipes_.at(p);
  return x0_side_vertex(p) == pipe.from ? pipe.to : pipe.from;
}

nlohmann::json Network::to_json() const {
  NetworkSpec spec;
  spec.wave_speed = wave_speed_;
  spec.gravity = gravity_;
  spec.vertices = vertex_ids_;
  for (const auto& p : pipes_) {
    spec.pipes.push_back({p.id, vertex_ids_[p.from], vertex_ids_[p.to], p.length, p.area});
  }
  spec.x0 = vertex_ids_[x0_];
  for (auto v : accessible_) spec.accessible.push_back(vertex_ids_[v]);
  return spec.to_json();
}

Network validate_network(const NetworkSpec& spec) {
  if (!(spec.wave_speed > 0.0) || !(spec.gravity > 0.0)) {
    throw Error(Errc::InvalidNetwork, "wave speed and gravity must be positive");
  }
  const std::size_t nv = spec.vertices.size();
  if (nv < 2 || spec.pipes.empty()) {
    throw Error(Errc::InvalidNetwork, "a network needs at least one pipe");
  }

  Network net;
  net.wave_speed_ = spec.wave_speed;
  net.gravity_ = spec.gravity;
  net.vertex_ids_ = spec.vertices;

  std::unordered_map<std::string, std::size_t> vindex;
  for (std::size_t v = 0; v < nv; ++v) {
    if (!vindex.emplace(spec.vertices[v], v).second) {
      throw Error(Errc::InvalidNetwork, "duplicate vertex '" + spec.vertices[v] + "'");
    }
  }
  auto lookup = [&](const std::string& id) {
    auto it = vindex.find(id);
    if (it == vindex.end()) throw Error(Errc::UnknownVertex, "no vertex '" + id + "'");
    return it->second;
  };

  // Union-find: an edge joining an already-connected pair closes a cycle.
  std::vector<std::size_t> root(nv);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };

  std::set<std::string> pipe_ids;
  net.incident_.assign(nv, {});
  for (const auto& ps : spec.pipes) {
    if (!pipe_ids.insert(ps.id).second) {
      throw Error(Errc::InvalidNetwork, "duplicate pipe '" + ps.id + "'");
    }
    if (!(ps.length > 0.0)) {
      throw Error(Errc::NonpositiveLength, "pipe '" + ps.id + "' has non-positive length");
    }
    if (!(ps.area.min_over(ps.length) > 0.0)) {
      throw Error(Errc::NonpositiveArea, "pipe '" + ps.id + "' has non-positive area");
    }
    Pipe p{ps.id, lookup(ps.from), lookup(ps.to), ps.length, ps.area};
    std::size_t a = find(p.from), b = find(p.to);
    if (a == b) throw Error(Errc::CycleDetected, "pipe '" + ps.id + "' closes a loop");
    root[a] = b;
    net.incident_[p.from].push_back({net.pipes_.size(), true});
    net.incident_[p.to].push_back({net.pipes_.size(), false});
    net.pipes_.push_back(std::move(p));
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (find(v) != find(0)) {
      throw Error(Errc::Disconnected, "vertex '" + spec.vertices[v] + "' is not reachable");
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (net.incident_[v].size() == 2) {
      throw Error(Errc::DegreeTwoVertex,
                  "vertex '" + spec.vertices[v] + "' joins exactly two pipes; merge them");
    }
  }

  net.x0_ = lookup(spec.x0);
  if (net.incident_[net.x0_].size() != 1) {
    throw Error(Errc::NonLeafX0, "x0 '" + spec.x0 + "' is not a leaf");
  }

  std::set<std::size_t> expected;
  for (std::size_t v = 0; v < nv; ++v) {
    if (v != net.x0_ && net.incident_[v].size() == 1) expected.insert(v);
  }
  std::set<std::size_t> listed;
  for (const auto& id : spec.accessible) {
    std::size_t v = lookup(id);
    if (!listed.insert(v).second) {
      throw Error(Errc::InvalidNetwork, "leaf '" + id + "' listed twice");
    }
    net.accessible_.push_back(v);
  }
  if (listed != expected) {
    throw Error(Errc::InvalidNetwork, "accessible list must contain every leaf except x0");
  }

  for (std::size_t v = 0; v < nv; ++v) {
    if (net.incident_[v].size() != 1) continue;
    const PipeEnd& end = net.incident_[v].front();
    const Pipe& p = net.pipes_[end.pipe];
    if (!p.area.constant_near(end.at_start ? 0.0 : p.length, p.length)) {
      throw Error(Errc::AreaNotConstantAtLeaf,
                  "pipe '" + p.id + "' area must be constant near leaf '" + spec.vertices[v] + "'");
    }
  }

  // All-pairs path lengths by traversal from every vertex.
  net.distance_.assign(nv, std::vector<double>(nv, 0.0));
  for (std::size_t s = 0; s < nv; ++s) {
    std::vector<bool> seen(nv, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& end : net.incident_[v]) {
        const Pipe& p = net.pipes_[end.pipe];
        std::size_t w = end.at_start ? p.to : p.from;
        if (seen[w]) continue;
        seen[w] = true;
        net.distance_[s][w] = net.distance_[s][v] + p.length;
        stack.push_back(w);
      }
    }
  }

  // Parent pipe towards x0, then the leaves hanging behind each vertex.
  net.parent_pipe_.assign(nv, 0);
  {
    std::vector<bool> seen(nv, false);
    std::queue<std::size_t> queue;
    queue.push(net.x0_);
    seen[net.x0_] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop();
      for (const auto& end : net.incident_[v]) {
        const Pipe& p = net.pipes_[end.pipe];
        std::size_t w = end.at_start ? p.to : p.from;
        if (seen[w]) continue;
        seen[w] = true;
        net.parent_pipe_[w] = end.pipe;
        queue.push(w);
      }
    }
  }
  net.leaves_behind_.assign(nv, {});
  for (std::size_t slot = 0; slot < net.accessible_.size(); ++slot) {
    std::size_t v = net.accessible_[slot];
    while (true) {
      net.leaves_behind_[v].push_back(slot);
      if (v == net.x0_) break;
      const Pipe& p = net.pipes_[net.parent_pipe_[v]];
      v = p.from == v ? p.to : p.from;
    }
  }
  return net;
}

Network network_from_json(const nlohmann::json& doc) {
  return validate_network(NetworkSpec::from_json(doc));
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open network file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
  return network_from_json(doc);
}

}  // namespace pipescope
