#include "pipescope/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "parallel.hpp"
#include "pipescope/error.hpp"
#include "pipescope/irm_io.hpp"

namespace pipescope {

std::size_t BCSystem::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

BCSystem assemble_system(const SampledIRM& irm, const ActionTimes& f, const ReconConfig& cfg,
                         const Network& net) {
  const std::size_t N = net.leaf_count();
  if (irm.leaf_count() != N || f.f.size() != N) {
    throw Error(Errc::MismatchedSeriesLength, "IRM, action times and network disagree on leaves");
  }
  const double dt = cfg.dt;
  const double tol = dt / 4.0;
  if (!(dt > 0.0) || std::abs(irm.dt - dt) > 1e-9 * dt) {
    throw Error(Errc::GridMismatch, "IRM step " + format_number(irm.dt) +
                                        " s differs from reconstruction step " +
                                        format_number(dt) + " s");
  }
  if (!(cfg.tau > 0.0) || !(cfg.lambda >= 0.0)) {
    throw Error(Errc::OutOfRange, "need tau > 0 and lambda >= 0");
  }
  const double fmax = f.max();
  if (fmax - cfg.tau > tol) {
    throw Error(Errc::ActionTimeExceedsTau, "action time " + format_number(fmax) +
                                                " s exceeds tau = " + format_number(cfg.tau) +
                                                " s at offset " + format_number(f.cut.offset) +
                                                " m of pipe '" + net.pipe(f.cut.pipe).id + "'");
  }
  const auto M = static_cast<std::size_t>(std::floor(cfg.tau / dt + 1e-9));
  if (M == 0) throw Error(Errc::OutOfRange, "tau is shorter than one time step");
  if (irm.samples() < 2 * M) {
    throw Error(Errc::HorizonTooShort, "IRM holds " + std::to_string(irm.samples()) +
                                           " samples, reconstruction needs " +
                                           std::to_string(2 * M) + " (horizon >= 2 tau)");
  }
  const std::size_t shift = cfg.shift == KernelShift::OneSample ? 1 : 0;

  BCSystem sys;
  sys.M = M;
  sys.N = N;
  sys.dt = dt;
  sys.H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N * M), static_cast<Eigen::Index>(N * M));
  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N * M));
  sys.active.assign(N * M, false);
  for (std::size_t i = 0; i < N; ++i) {
    sys.normal.push_back(net.leaf_normal(i));
    for (std::size_t k = 1; k <= M; ++k) {
      sys.active[i * M + k - 1] = static_cast<double>(k) * dt - (cfg.tau - f.f[i]) > tol;
    }
  }

  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t i = 0; i < N; ++i) {
      const auto& kern = irm.kernel(i, j);
      const double scale = 0.5 * dt * sys.normal[i];
      for (std::size_t l = 1; l <= M; ++l) {
        const std::size_t row = j * M + l - 1;
        if (!sys.active[row]) continue;
        for (std::size_t k = 1; k <= M; ++k) {
          const std::size_t col = i * M + k - 1;
          if (!sys.active[col]) continue;
          const std::size_t near = l > k ? l - k : k - l;
          const std::size_t mirror = 2 * M + shift - l - k;
          sys.H(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
              scale * (kern[near] + kern[mirror]);
        }
      }
    }
    const double direct = sys.normal[j] * net.leaf_impedance(j);
    for (std::size_t l = 0; l < M; ++l) {
      const auto d = static_cast<Eigen::Index>(j * M + l);
      sys.H(d, d) += direct;
      if (sys.active[j * M + l]) sys.rhs(d) = cfg.h0;
    }
  }
  return sys;
}

BoundaryFlows solve_boundary_flows(const BCSystem& sys, double lambda) {
  if (!(lambda >= 0.0)) throw Error(Errc::OutOfRange, "lambda must be non-negative");
  std::vector<Eigen::Index> idx;
  for (std::size_t r = 0; r < sys.active.size(); ++r) {
    if (sys.active[r]) idx.push_back(static_cast<Eigen::Index>(r));
  }
  const auto n = static_cast<Eigen::Index>(idx.size());

  BoundaryFlows out;
  out.dt = sys.dt;
  out.normal = sys.normal;
  out.q.assign(sys.N, std::vector<double>(sys.M, 0.0));
  if (n == 0) return out;

  const Eigen::Index rows = lambda > 0.0 ? 2 * n : n;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) A(r, c) = sys.H(idx[r], idx[c]);
    b(r) = sys.rhs(idx[r]);
  }
  if (lambda > 0.0) A.bottomRows(n).diagonal().setConstant(std::sqrt(lambda));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (lambda == 0.0 && qr.rank() < n) {
    throw Error(Errc::SingularSystem, "restricted system has rank " + std::to_string(qr.rank()) +
                                          " of " + std::to_string(n) +
                                          "; use lambda > 0");
  }
  const Eigen::VectorXd x = qr.solve(b);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto flat = static_cast<std::size_t>(idx[r]);
    out.q[flat / sys.M][flat % sys.M] = x(r);
  }
  return out;
}

double volume(const BoundaryFlows& flows, const ReconConfig& cfg, const Network& net) {
  const double a = net.wave_speed();
  const double g = net.gravity();
  double sum = 0.0;
  for (std::size_t i = 0; i < flows.q.size(); ++i) {
    double leaf = 0.0;
    for (double q : flows.q[i]) leaf += q;
    sum += flows.normal[i] * leaf * flows.dt;
  }
  return a * a / (cfg.h0 * g) * sum;
}

double volume_at_depth(const Network& net, const SampledIRM& irm, std::size_t pipe, double depth,
                       const ReconConfig& cfg) {
  const ActionTimes f = action_times_at_depth(net, pipe, depth);
  const BCSystem sys = assemble_system(irm, f, cfg, net);
  return volume(solve_boundary_flows(sys, cfg.lambda), cfg, net);
}

double reachable_length(const Network& net, std::size_t pipe, double tau) {
  const Pipe& p = net.pipe(pipe);
  const std::size_t far = net.far_side_vertex(pipe);
  double upstream = 0.0;
  for (std::size_t slot : net.leaves_behind(far)) {
    upstream = std::max(upstream, net.vertex_distance(net.accessible()[slot], far));
  }
  return std::max(0.0, std::min(p.length, tau * net.wave_speed() - upstream));
}

VolumeProfile volume_profile(const Network& net, const SampledIRM& irm, std::size_t pipe,
                             const ReconConfig& cfg, std::size_t jobs,
                             std::optional<double> extent) {
  if (!(cfg.dx > 0.0)) throw Error(Errc::OutOfRange, "reconstruction step dx must be positive");
  const Pipe& p = net.pipe(pipe);
  const bool from_start = net.far_side_vertex(pipe) == p.from;
  const double reach =
      extent ? std::min(p.length, *extent) : reachable_length(net, pipe, cfg.tau);
  const auto count = static_cast<std::size_t>(std::floor(reach / cfg.dx + 1e-9));

  VolumeProfile vp;
  vp.pipe = p.id;
  for (std::size_t k = 1; k <= count; ++k) {
    const double d = std::min(p.length, static_cast<double>(k) * cfg.dx);
    vp.depth.push_back(d);
    vp.offset.push_back(from_start ? d : p.length - d);
  }
  vp.volume.assign(count, 0.0);
  detail::parallel_for(count, jobs, [&](std::size_t k) {
    vp.volume[k] = volume_at_depth(net, irm, pipe, vp.depth[k], cfg);
  });
  return vp;
}

AreaProfile area_profile(const VolumeProfile& vp, double dx) {
  if (vp.volume.size() < 2) {
    throw Error(Errc::TooFewPoints, "pipe '" + vp.pipe + "' has " +
                                        std::to_string(vp.volume.size()) +
                                        " profile points; two are needed for an area");
  }
  if (!(dx > 0.0)) throw Error(Errc::OutOfRange, "dx must be positive");
  AreaProfile ap;
  ap.pipe = vp.pipe;
  for (std::size_t k = 0; k + 1 < vp.volume.size(); ++k) {
    ap.depth.push_back(vp.depth[k]);
    ap.offset.push_back(vp.offset[k]);
    ap.area.push_back((vp.volume[k + 1] - vp.volume[k]) / dx);
  }
  return ap;
}

void write_csv(std::ostream& os, const VolumeProfile& vp) {
  os << "pipe,x_m,V_m3\n";
  for (std::size_t k = 0; k < vp.volume.size(); ++k) {
    os << vp.pipe << ',' << format_number(vp.offset[k]) << ',' << format_number(vp.volume[k])
       << '\n';
  }
}

void write_csv(std::ostream& os, const AreaProfile& ap) {
  os << "pipe,x_m,A_m2\n";
  for (std::size_t k = 0; k < ap.area.size(); ++k) {
    os << ap.pipe << ',' << format_number(ap.offset[k]) << ',' << format_number(ap.area[k])
       << '\n';
  }
}

}  // namespace pipescope
