#include "pipescope/forward_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pipescope/error.hpp"
#include "pipescope/junction.hpp"

namespace pipescope {

ScatterResult junction_scatter(double incident_head, std::size_t incident,
                               std::span<const double> admittances) {
  if (admittances.size() < 2 || incident >= admittances.size()) {
    throw Error(Errc::OutOfRange, "junction needs two or more pipes and a valid incident index");
  }
  for (double y : admittances) {
    if (!(y > 0.0)) throw Error(Errc::OutOfRange, "admittances must be positive");
  }
  auto c = scatter_coefficients(incident, admittances);
  ScatterResult out;
  out.reflected = c.reflection * incident_head;
  for (std::size_t k = 0; k < admittances.size(); ++k) {
    if (k != incident) out.transmitted.push_back(c.transmission * incident_head);
  }
  return out;
}

std::vector<double> SimGrid::times() const {
  std::vector<double> t(samples);
  for (std::size_t n = 0; n < samples; ++n) t[n] = time(n);
  return t;
}

SimGrid make_grid(const SimConfig& cfg, double wave_speed) {
  if (!(cfg.courant > 0.0) || cfg.courant > 1.0) {
    throw Error(Errc::UnstableConfig,
                "courant number " + std::to_string(cfg.courant) + " outside (0, 1]");
  }
  if (!(cfg.dx > 0.0) || !(cfg.duration >= 0.0)) {
    throw Error(Errc::UnstableConfig, "dx must be positive and duration non-negative");
  }
  SimGrid grid;
  grid.dt = cfg.courant * cfg.dx / wave_speed;
  grid.samples = static_cast<std::size_t>(std::floor(cfg.duration / grid.dt + 1e-9)) + 1;
  return grid;
}

BoundaryFlow closed_flow(const Network& net) {
  BoundaryFlow f;
  f.inflow.assign(net.leaf_count(), {});
  return f;
}

BoundaryFlow unit_step_flow(const Network& net, const SimGrid& grid, std::size_t slot) {
  BoundaryFlow f = closed_flow(net);
  f.inflow.at(slot).assign(grid.samples, 1.0);
  return f;
}

namespace {

// One pipe end seen from its vertex: H = c + z u, with u the flow into the pipe.
struct EndRelation {
  double c = 0.0;
  double z = 0.0;
};

struct PipeState {
  double r = 1.0;                // a dt / dx_p
  std::vector<double> z;         // impedance per cell
  std::vector<double> h, q;      // current node values
  std::vector<double> h_new, q_new;
};

EndRelation end_relation(const PipeState& s, bool at_start) {
  const std::size_t last = s.h.size() - 1;
  if (at_start) {
    // C- characteristic through cell 0: H = Cm + Z Q, u = Q.
    double hb = (1.0 - s.r) * s.h[0] + s.r * s.h[1];
    double qb = (1.0 - s.r) * s.q[0] + s.r * s.q[1];
    return {hb - s.z.front() * qb, s.z.front()};
  }
  // C+ characteristic through the last cell: H = Cp - Z Q, u = -Q.
  double ha = (1.0 - s.r) * s.h[last] + s.r * s.h[last - 1];
  double qa = (1.0 - s.r) * s.q[last] + s.r * s.q[last - 1];
  return {ha + s.z.back() * qa, s.z.back()};
}

}  // namespace

Histories simulate(const Network& net, const BoundaryFlow& flows, const SimConfig& cfg) {
  const SimGrid grid = make_grid(cfg, net.wave_speed());
  const double a = net.wave_speed();
  const double g = net.gravity();

  if (flows.inflow.size() != net.leaf_count()) {
    throw Error(Errc::MismatchedSeriesLength, "boundary flow must list every accessible leaf");
  }
  for (const auto& series : flows.inflow) {
    if (!series.empty() && series.size() != grid.samples) {
      throw Error(Errc::MismatchedSeriesLength,
                  "inflow series has " + std::to_string(series.size()) + " samples, grid has " +
                      std::to_string(grid.samples));
    }
  }

  Histories hist;
  hist.dt = grid.dt;
  hist.t = grid.times();
  std::vector<PipeState> state(net.pipes().size());
  for (std::size_t p = 0; p < net.pipes().size(); ++p) {
    const Pipe& pipe = net.pipe(p);
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::round(pipe.length / cfg.dx)));
    PipeField field;
    field.dx = pipe.length / static_cast<double>(cells);
    for (std::size_t i = 0; i <= cells; ++i) field.x.push_back(field.dx * static_cast<double>(i));
    field.x.back() = pipe.length;
    PipeState& s = state[p];
    for (std::size_t i = 0; i < cells; ++i) {
      double area = pipe.area(field.dx * (static_cast<double>(i) + 0.5));
      field.cell_area.push_back(area);
      s.z.push_back(a / (g * area));
    }
    s.r = a * grid.dt / field.dx;
    if (std::abs(s.r - 1.0) < 1e-12) s.r = 1.0;
    if (s.r > 1.0) {
      throw Error(Errc::UnstableConfig, "pipe '" + pipe.id + "' cell " +
                                            std::to_string(field.dx) +
                                            " m is shorter than a dt; reduce courant or dx");
    }
    s.h.assign(cells + 1, 0.0);
    s.q.assign(cells + 1, 0.0);
    s.h_new = s.h;
    s.q_new = s.q;
    field.H.assign(grid.samples * (cells + 1), 0.0);
    field.Q.assign(grid.samples * (cells + 1), 0.0);
    hist.pipes.push_back(std::move(field));
  }
  hist.leaf_head.assign(net.leaf_count(), std::vector<double>(grid.samples, 0.0));

  std::vector<EndRelation> rel;
  for (std::size_t n = 0; n < grid.samples; ++n) {
    // Interior nodes. Stepping from the zero state reproduces it at n = 0, so
    // only the boundary inflow enters the first sample.
    for (auto& s : state) {
      const std::size_t last = s.h.size() - 1;
      for (std::size_t i = 1; i < last; ++i) {
        double ha = (1.0 - s.r) * s.h[i] + s.r * s.h[i - 1];
        double qa = (1.0 - s.r) * s.q[i] + s.r * s.q[i - 1];
        double hb = (1.0 - s.r) * s.h[i] + s.r * s.h[i + 1];
        double qb = (1.0 - s.r) * s.q[i] + s.r * s.q[i + 1];
        double zl = s.z[i - 1];
        double zr = s.z[i];
        double cp = ha + zl * qa;
        double cm = hb - zr * qb;
        double q = (cp - cm) / (zl + zr);
        s.q_new[i] = q;
        s.h_new[i] = cp - zl * q;
      }
    }

    // Vertices.
    for (std::size_t v = 0; v < net.vertices().size(); ++v) {
      const auto& ends = net.incident(v);
      rel.clear();
      for (const auto& end : ends) {
        rel.push_back(end_relation(state[end.pipe], end.at_start));
      }
      double head = 0.0;
      std::vector<double> inflow(ends.size(), 0.0);
      if (ends.size() == 1) {
        double u = 0.0;
        if (auto slot = net.leaf_slot(v)) {
          const auto& series = flows.inflow[*slot];
          if (!series.empty()) u = series[n];
        }
        head = rel[0].c + rel[0].z * u;
        inflow[0] = u;
      } else {
        double num = 0.0, den = 0.0;
        for (const auto& r : rel) {
          num += r.c / r.z;
          den += 1.0 / r.z;
        }
        head = num / den;
        for (std::size_t k = 0; k < ends.size(); ++k) inflow[k] = (head - rel[k].c) / rel[k].z;
      }
      for (std::size_t k = 0; k < ends.size(); ++k) {
        PipeState& s = state[ends[k].pipe];
        std::size_t node = ends[k].at_start ? 0 : s.h.size() - 1;
        s.h_new[node] = head;
        s.q_new[node] = ends[k].normal() * inflow[k];
      }
      if (auto slot = net.leaf_slot(v)) hist.leaf_head[*slot][n] = head;
    }

    for (std::size_t p = 0; p < state.size(); ++p) {
      PipeState& s = state[p];
      std::swap(s.h, s.h_new);
      std::swap(s.q, s.q_new);
      PipeField& field = hist.pipes[p];
      std::copy(s.h.begin(), s.h.end(), field.H.begin() + static_cast<std::ptrdiff_t>(n * s.h.size()));
      std::copy(s.q.begin(), s.q.end(), field.Q.begin() + static_cast<std::ptrdiff_t>(n * s.q.size()));
    }
  }
  return hist;
}

double conservation_residual(const Histories& hist, const Network& net, double tau) {
  if (tau < 0.0 || hist.t.empty()) throw Error(Errc::OutOfRange, "tau must be non-negative");
  const auto step = static_cast<std::size_t>(std::floor(tau / hist.dt + 1e-9));
  if (step >= hist.t.size()) {
    throw Error(Errc::OutOfRange, "tau beyond the simulated duration");
  }
  const double a = net.wave_speed();
  const double g = net.gravity();

  double injected = 0.0;
  for (std::size_t slot = 0; slot < net.leaf_count(); ++slot) {
    PipeEnd end = net.leaf_end(slot);
    const PipeField& f = hist.pipes[end.pipe];
    const std::size_t node = end.at_start ? 0 : f.nodes() - 1;
    double sum = 0.0;
    for (std::size_t n = 0; n <= step; ++n) sum += end.normal() * f.flow(n, node);
    sum -= 0.5 * end.normal() * f.flow(step, node);
    injected += sum * hist.dt;
  }

  double stored = 0.0;
  for (const auto& f : hist.pipes) {
    for (std::size_t i = 0; i < f.cells(); ++i) {
      double dx = f.x[i + 1] - f.x[i];
      stored += g * f.cell_area[i] / (a * a) * dx * 0.5 * (f.head(step, i) + f.head(step, i + 1));
    }
  }
  double scale = std::max({std::abs(injected), std::abs(stored), std::numeric_limits<double>::min()});
  return std::abs(injected - stored) / scale;
}

double kirchhoff_residual(const Histories& hist, const Network& net) {
  double worst = 0.0;
  double qmax = 0.0;
  for (const auto& f : hist.pipes) {
    for (double q : f.Q) qmax = std::max(qmax, std::abs(q));
  }
  for (std::size_t v = 0; v < net.vertices().size(); ++v) {
    if (net.degree(v) < 3) continue;
    for (std::size_t n = 0; n < hist.t.size(); ++n) {
      double sum = 0.0;
      for (const auto& end : net.incident(v)) {
        const PipeField& f = hist.pipes[end.pipe];
        sum += end.normal() * f.flow(n, end.at_start ? 0 : f.nodes() - 1);
      }
      worst = std::max(worst, std::abs(sum));
    }
  }
  return qmax > 0.0 ? worst / qmax : 0.0;
}

}  // namespace pipescope
