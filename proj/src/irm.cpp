#include "pipescope/irm.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "parallel.hpp"
#include "pipescope/error.hpp"
#include "pipescope/junction.hpp"
#include "pipescope/signal.hpp"

namespace pipescope {

namespace {

using boost::multiprecision::cpp_int;

constexpr double kTicksPerSecond = 1e12;

std::int64_t to_ticks(double seconds) { return std::llround(seconds * kTicksPerSecond); }

// Shortest decimal fraction that maps back onto the same double, so that
// areas such as 1.4 enter the scattering algebra as 7/5.
Rational decimal_rational(double x) {
  cpp_int scale = 1;
  for (int digits = 0; digits <= 15; ++digits) {
    const double scaled = x * static_cast<double>(scale);
    const double rounded = std::round(scaled);
    if (std::abs(rounded) < 9e15) {
      Rational r(cpp_int(static_cast<long long>(rounded)), scale);
      if (r.convert_to<double>() == x) return r;
    }
    scale *= 10;
  }
  return Rational(x);
}

struct Segment {
  std::size_t a = 0;  // node at the low-offset end
  std::size_t b = 0;
  std::int64_t ticks = 0;
  Rational area;
};

struct NodeEnd {
  std::size_t segment = 0;
  bool is_a = true;
};

struct SegmentGraph {
  std::vector<Segment> segments;
  std::vector<std::vector<NodeEnd>> ends;
  // Scattering per node and incident end: reflection and transmission.
  std::vector<std::vector<ScatterCoefficients<Rational>>> scatter;
};

SegmentGraph build_segments(const Network& net) {
  SegmentGraph sg;
  sg.ends.resize(net.vertices().size());
  const double a = net.wave_speed();
  for (const Pipe& pipe : net.pipes()) {
    if (!pipe.area.is_piecewise_constant()) {
      throw Error(Errc::NotPiecewiseConstant,
                  "pipe '" + pipe.id + "' has a tabulated area; the oracle needs steps");
    }
    std::vector<double> cuts{0.0};
    for (double x : pipe.area.breakpoints(pipe.length)) cuts.push_back(x);
    cuts.push_back(pipe.length);
    std::size_t prev = pipe.from;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      std::size_t next = pipe.to;
      if (k + 2 < cuts.size()) {
        next = sg.ends.size();
        sg.ends.emplace_back();
      }
      Segment s;
      s.a = prev;
      s.b = next;
      s.ticks = to_ticks((cuts[k + 1] - cuts[k]) / a);
      s.area = decimal_rational(pipe.area(0.5 * (cuts[k] + cuts[k + 1])));
      sg.ends[prev].push_back({sg.segments.size(), true});
      sg.ends[next].push_back({sg.segments.size(), false});
      sg.segments.push_back(std::move(s));
      prev = next;
    }
  }
  sg.scatter.resize(sg.ends.size());
  for (std::size_t node = 0; node < sg.ends.size(); ++node) {
    const auto& ends = sg.ends[node];
    if (ends.size() < 2) continue;
    std::vector<Rational> areas;
    for (const auto& e : ends) areas.push_back(sg.segments[e.segment].area);
    for (std::size_t m = 0; m < ends.size(); ++m) {
      sg.scatter[node].push_back(scatter_coefficients<Rational>(m, areas));
    }
  }
  return sg;
}

// A front travelling on `segment` towards its b end (to_b) or a end.
using FrontKey = std::tuple<std::int64_t, std::size_t, bool>;

}  // namespace

AnalyticIRM oracle_irm(const Network& net, double horizon, double prune_eps,
                       std::size_t max_events) {
  if (!(horizon >= 0.0)) throw Error(Errc::OutOfRange, "horizon must be non-negative");
  const SegmentGraph sg = build_segments(net);
  const std::size_t n_leaves = net.leaf_count();
  const double a = net.wave_speed();
  const double g = net.gravity();
  const std::int64_t horizon_ticks = to_ticks(horizon);

  AnalyticIRM out;
  out.horizon = horizon;
  for (std::size_t s = 0; s < n_leaves; ++s) {
    out.leaves.push_back(net.vertices()[net.accessible()[s]]);
    out.direct.push_back(net.leaf_impedance(s));
  }
  out.kernels.resize(n_leaves * n_leaves);

  std::size_t processed = 0;
  for (std::size_t src = 0; src < n_leaves; ++src) {
    const std::size_t src_node = net.accessible()[src];
    const NodeEnd& start = sg.ends[src_node].front();
    // Head per unit volume, in units of a / g.
    const Rational initial = Rational(1) / sg.segments[start.segment].area;
    const double threshold = prune_eps * std::abs(initial.convert_to<double>());

    std::map<FrontKey, Rational> fronts;
    auto launch = [&](std::int64_t now, const NodeEnd& from, const Rational& amp) {
      if (amp == 0) return;
      if (std::abs(amp.convert_to<double>()) < threshold) return;
      const Segment& seg = sg.segments[from.segment];
      const std::int64_t arrival = now + seg.ticks;
      if (arrival > horizon_ticks) return;
      fronts[{arrival, from.segment, from.is_a}] += amp;
    };
    launch(0, start, initial);

    while (!fronts.empty()) {
      auto it = fronts.begin();
      const auto [tick, seg_index, to_b] = it->first;
      const Rational amp = std::move(it->second);
      fronts.erase(it);
      if (++processed > max_events) {
        throw Error(Errc::HorizonTooLarge,
                    "more than " + std::to_string(max_events) +
                        " wavefront events; shorten the horizon or raise the prune threshold");
      }
      if (amp == 0) continue;
      const Segment& seg = sg.segments[seg_index];
      const std::size_t node = to_b ? seg.b : seg.a;
      const auto& ends = sg.ends[node];
      if (ends.size() == 1) {
        if (node < net.vertices().size()) {
          if (auto slot = net.leaf_slot(node)) {
            DeltaArrival d;
            d.time = static_cast<double>(tick) / kTicksPerSecond;
            d.exact = 2 * amp;
            d.coeff = d.exact.convert_to<double>() * a / g;
            out.kernels[src * n_leaves + *slot].push_back(std::move(d));
          }
        }
        // Closed end: full reflection with unchanged sign.
        launch(tick, ends.front(), amp);
        continue;
      }
      std::size_t incident = 0;
      while (ends[incident].segment != seg_index || ends[incident].is_a == to_b) ++incident;
      const auto& c = sg.scatter[node][incident];
      for (std::size_t k = 0; k < ends.size(); ++k) {
        launch(tick, ends[k], (k == incident ? c.reflection : c.transmission) * amp);
      }
    }
  }
  return out;
}

SampledIRM sample_irm(const AnalyticIRM& irm, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::OutOfRange, "sampling step must be positive");
  SampledIRM out;
  out.dt = dt;
  out.leaves = irm.leaves;
  out.direct = irm.direct;
  const auto samples = static_cast<std::size_t>(std::floor(irm.horizon / dt + 1e-9)) + 1;
  out.horizon = static_cast<double>(samples - 1) * dt;
  out.k.assign(irm.kernels.size(), std::vector<double>(samples, 0.0));
  for (std::size_t idx = 0; idx < irm.kernels.size(); ++idx) {
    for (const DeltaArrival& d : irm.kernels[idx]) {
      const auto guess = static_cast<std::int64_t>(std::floor(d.time / dt + 0.5));
      for (std::int64_t n = guess - 1; n <= guess + 1; ++n) {
        if (n < 0) continue;
        const double tn = static_cast<double>(n) * dt;
        if (tn >= d.time - 0.5 * dt && tn < d.time + 0.5 * dt) {
          if (static_cast<std::size_t>(n) < samples) {
            out.k[idx][static_cast<std::size_t>(n)] += d.coeff / dt;
          }
          break;
        }
      }
    }
  }
  return out;
}

StepResponseBundle step_response(const Network& net, const SimConfig& cfg, std::size_t source) {
  if (source >= net.leaf_count()) throw Error(Errc::OutOfRange, "source slot out of range");
  const SimGrid grid = make_grid(cfg, net.wave_speed());
  Histories hist = simulate(net, unit_step_flow(net, grid, source), cfg);
  StepResponseBundle b;
  b.source = source;
  b.t = std::move(hist.t);
  b.traces = std::move(hist.leaf_head);
  return b;
}

std::vector<std::vector<double>> irm_row_from_step_response(const StepResponseBundle& bundle,
                                                            const Network& net,
                                                            double smooth_window_s) {
  if (bundle.traces.size() != net.leaf_count()) {
    throw Error(Errc::MismatchedSeriesLength, "bundle must hold one trace per accessible leaf");
  }
  if (bundle.t.size() < 2) throw Error(Errc::MismatchedSeriesLength, "need two or more samples");
  const double dt = bundle.t[1] - bundle.t[0];
  auto window = static_cast<std::size_t>(std::floor(smooth_window_s / dt + 1e-9));
  if (window == 0) window = 1;

  std::vector<std::vector<double>> row;
  for (std::size_t j = 0; j < bundle.traces.size(); ++j) {
    std::vector<double> h = bundle.traces[j];
    if (h.size() != bundle.t.size()) {
      throw Error(Errc::MismatchedSeriesLength, "trace and time grid differ in length");
    }
    if (j == bundle.source) {
      h = remove_initial_pulse(h, bundle.t, net.wave_speed(), net.gravity(), net.leaf_area(j));
    }
    row.push_back(differentiate(median_smooth(h, window), bundle.t));
  }
  return row;
}

SampledIRM simulate_irm(const Network& net, const MeasurementConfig& cfg) {
  const std::size_t n_leaves = net.leaf_count();
  std::vector<std::vector<std::vector<double>>> rows(n_leaves);
  std::vector<double> t_sim;
  std::mutex t_mutex;
  detail::parallel_for(n_leaves, cfg.jobs, [&](std::size_t src) {
    StepResponseBundle b = step_response(net, cfg.sim, src);
    rows[src] = irm_row_from_step_response(b, net, cfg.smooth_window);
    if (src == 0) {
      std::lock_guard lock(t_mutex);
      t_sim = b.t;
    }
  });

  SampledIRM out;
  for (std::size_t s = 0; s < n_leaves; ++s) {
    out.leaves.push_back(net.vertices()[net.accessible()[s]]);
    out.direct.push_back(net.leaf_impedance(s));
  }
  std::vector<double> t_out = t_sim;
  out.dt = t_sim.size() > 1 ? t_sim[1] - t_sim[0] : 0.0;
  if (cfg.resample_dt > 0.0) {
    t_out = uniform_grid(cfg.resample_dt, t_sim.back());
    out.dt = cfg.resample_dt;
  }
  out.horizon = t_out.back();
  out.k.resize(n_leaves * n_leaves);
  for (std::size_t i = 0; i < n_leaves; ++i) {
    for (std::size_t j = 0; j < n_leaves; ++j) {
      out.k[i * n_leaves + j] =
          cfg.resample_dt > 0.0 ? resample(rows[i][j], t_sim, t_out) : rows[i][j];
    }
  }
  return out;
}

}  // namespace pipescope
