#include "pipescope/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pipescope/error.hpp"

namespace pipescope {

namespace {

void check_pipe(const Network& net, std::size_t pipe) {
  if (pipe >= net.pipes().size()) {
    throw Error(Errc::UnknownPipe, "pipe index " + std::to_string(pipe) + " out of range");
  }
}

void check_interior(const Network& net, const PointOnPipe& p) {
  check_pipe(net, p.pipe);
  const double len = net.pipe(p.pipe).length;
  if (p.offset < 0.0 || p.offset > len) {
    throw Error(Errc::OutOfRange, "offset " + std::to_string(p.offset) + " outside pipe '" +
                                      net.pipe(p.pipe).id + "'");
  }
  if (p.offset == 0.0 || p.offset == len) {
    throw Error(Errc::PointIsJunction,
                "point at an end of pipe '" + net.pipe(p.pipe).id + "' is a vertex");
  }
}

double point_to_vertex(const Network& net, const PointOnPipe& p, std::size_t v) {
  const Pipe& pipe = net.pipe(p.pipe);
  return std::min(p.offset + net.vertex_distance(pipe.from, v),
                  pipe.length - p.offset + net.vertex_distance(pipe.to, v));
}

struct LengthVisitor {
  const Network& net;

  double operator()(const AtVertex& a, const AtVertex& b) const {
    return net.vertex_distance(a.vertex, b.vertex);
  }
  double operator()(const AtVertex& a, const PointOnPipe& b) const {
    return point_to_vertex(net, b, a.vertex);
  }
  double operator()(const PointOnPipe& a, const AtVertex& b) const {
    return point_to_vertex(net, a, b.vertex);
  }
  double operator()(const PointOnPipe& a, const PointOnPipe& b) const {
    if (a.pipe == b.pipe) return std::abs(a.offset - b.offset);
    const Pipe& pb = net.pipe(b.pipe);
    return std::min(b.offset + point_to_vertex(net, a, pb.from),
                    pb.length - b.offset + point_to_vertex(net, a, pb.to));
  }
};

}  // namespace

double path_length(const Network& net, const Location& u, const Location& v) {
  auto check = [&](const Location& l) {
    if (const auto* p = std::get_if<PointOnPipe>(&l)) {
      check_pipe(net, p->pipe);
      if (p->offset < 0.0 || p->offset > net.pipe(p->pipe).length) {
        throw Error(Errc::OutOfRange, "offset outside pipe '" + net.pipe(p->pipe).id + "'");
      }
    } else if (std::get<AtVertex>(l).vertex >= net.vertices().size()) {
      throw Error(Errc::UnknownVertex, "vertex index out of range");
    }
  };
  check(u);
  check(v);
  return std::visit(LengthVisitor{net}, u, v);
}

double travel_time(const Network& net, const Location& u, const Location& v) {
  return path_length(net, u, v) / net.wave_speed();
}

double ActionTimes::max() const {
  return f.empty() ? 0.0 : *std::max_element(f.begin(), f.end());
}

ActionTimes action_times_at_depth(const Network& net, std::size_t pipe, double depth) {
  check_pipe(net, pipe);
  const Pipe& p = net.pipe(pipe);
  if (!(depth > 0.0) || depth > p.length) {
    throw Error(Errc::OutOfRange, "cut depth outside (0, length] of pipe '" + p.id + "'");
  }
  const std::size_t far = net.far_side_vertex(pipe);
  ActionTimes at;
  at.cut = {pipe, far == p.from ? depth : p.length - depth};
  at.f.assign(net.leaf_count(), 0.0);
  for (std::size_t slot : net.leaves_behind(far)) {
    at.f[slot] = (net.vertex_distance(net.accessible()[slot], far) + depth) / net.wave_speed();
  }
  return at;
}

ActionTimes action_times(const Network& net, const PointOnPipe& p) {
  check_interior(net, p);
  const Pipe& pipe = net.pipe(p.pipe);
  const double depth =
      net.far_side_vertex(p.pipe) == pipe.from ? p.offset : pipe.length - p.offset;
  ActionTimes at = action_times_at_depth(net, p.pipe, depth);
  at.cut = p;
  return at;
}

bool AdmissibleSet::contains(const PointOnPipe& q) const {
  return std::any_of(covered.begin(), covered.end(), [&](const CoveredInterval& c) {
    return c.pipe == q.pipe && q.offset >= c.lo && q.offset <= c.hi;
  });
}

double AdmissibleSet::volume(const Network& net) const {
  double v = 0.0;
  for (const auto& c : covered) v += net.pipe(c.pipe).area.integral(c.lo, c.hi);
  return v;
}

AdmissibleSet admissible_set(const Network& net, const PointOnPipe& p) {
  check_interior(net, p);
  const Pipe& cut_pipe = net.pipe(p.pipe);
  const std::size_t far = net.far_side_vertex(p.pipe);

  AdmissibleSet set;
  set.cut = p;
  set.boundary_leaves = net.leaves_behind(far);

  std::vector<bool> taken(net.pipes().size(), false);
  taken[p.pipe] = true;
  std::vector<std::size_t> stack{far};
  std::vector<bool> seen(net.vertices().size(), false);
  seen[far] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (const auto& end : net.incident(v)) {
      if (taken[end.pipe]) continue;
      taken[end.pipe] = true;
      const Pipe& q = net.pipe(end.pipe);
      set.covered.push_back({end.pipe, 0.0, q.length});
      std::size_t w = end.at_start ? q.to : q.from;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  if (far == cut_pipe.from) {
    set.covered.push_back({p.pipe, 0.0, p.offset});
  } else {
    set.covered.push_back({p.pipe, p.offset, cut_pipe.length});
  }
  std::sort(set.covered.begin(), set.covered.end(),
            [](const CoveredInterval& a, const CoveredInterval& b) { return a.pipe < b.pipe; });
  return set;
}

}  // namespace pipescope
