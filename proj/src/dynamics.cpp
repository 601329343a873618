#include "fwlab/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "fwlab/errors.hpp"
#include "fwlab/norms.hpp"
#include "fwlab/spectral.hpp"

namespace fwlab {

std::string to_string(HaltReason r) {
  switch (r) {
    case HaltReason::completed: return "completed";
    case HaltReason::gradient_blowup: return "gradient_blowup";
    case HaltReason::resolution_loss: return "resolution_loss";
    case HaltReason::nonfinite: return "nonfinite";
  }
  return "unknown";
}

std::pair<Field, Field> rhs(const SystemState& state, bool dealias_products) {
  const Field& u = state.u;
  const Field& eta = state.eta;
  Field uux = multiply(u, derivative(u));
  Field flux = multiply(eta, u);
  if (dealias_products) {
    uux = dealias(uux);
    flux = dealias(flux);
  }
  Field du = nonlocal_wave_operator(eta - u) - uux;
  Field deta = derivative(flux) * -1.0;
  if (!du.finite() || !deta.finite())
    throw NumericError("nonfinite right-hand side");
  return {std::move(du), std::move(deta)};
}

Rk4Stages rk4_step_stages(const SystemState& state, double dt,
                          bool dealias_products) {
  const double t = state.t;
  auto [k1u, k1e] = rhs(state, dealias_products);
  SystemState s2{state.u + k1u * (0.5 * dt), state.eta + k1e * (0.5 * dt),
                 t + 0.5 * dt};
  auto [k2u, k2e] = rhs(s2, dealias_products);
  SystemState s3{state.u + k2u * (0.5 * dt), state.eta + k2e * (0.5 * dt),
                 t + 0.5 * dt};
  auto [k3u, k3e] = rhs(s3, dealias_products);
  SystemState s4{state.u + k3u * dt, state.eta + k3e * dt, t + dt};
  auto [k4u, k4e] = rhs(s4, dealias_products);

  const double w = dt / 6.0;
  SystemState next{
      state.u + (k1u + (k2u + k3u) * 2.0 + k4u) * w,
      state.eta + (k1e + (k2e + k3e) * 2.0 + k4e) * w,
      t + dt};
  return Rk4Stages{{state.u, s2.u, s3.u, s4.u},
                   {state.eta, s2.eta, s3.eta, s4.eta},
                   std::move(next)};
}

SystemState rk4_step(const SystemState& state, double dt,
                     bool dealias_products) {
  return rk4_step_stages(state, dt, dealias_products).next;
}

CharacteristicSet::CharacteristicSet(const std::vector<double>& seeds,
                                     const Field& eta0) {
  points_.reserve(seeds.size());
  traces_.reserve(seeds.size());
  for (double x0 : seeds) {
    points_.push_back(Point{x0, 0.0, 1.0});
    CharacteristicTrace tr;
    tr.x0 = x0;
    tr.eta0_at_x0 = fourier_interpolate(eta0, x0);
    traces_.push_back(std::move(tr));
  }
}

void CharacteristicSet::step(const std::array<Field, 4>& u_stages, double dt) {
  std::array<Field, 4> ux = {derivative(u_stages[0]), derivative(u_stages[1]),
                             derivative(u_stages[2]), derivative(u_stages[3])};
  for (Point& pt : points_) {
    // Classical RK4 on (q, log q_x, q_x), velocities from the matching
    // field stage so the pair (field, characteristic) shares one time grid.
    double kq[4], kl[4], kv[4];
    const double offs[4] = {0.0, 0.5, 0.5, 1.0};
    double q = pt.q, lg = pt.log_qx, var = pt.qx_var;
    for (int i = 0; i < 4; ++i) {
      double qi = q, vi = var;
      if (i > 0) {
        qi = q + offs[i] * dt * kq[i - 1];
        vi = var + offs[i] * dt * kv[i - 1];
      }
      kq[i] = fourier_interpolate(u_stages[i], qi);
      kl[i] = fourier_interpolate(ux[i], qi);
      kv[i] = kl[i] * vi;
    }
    const double w = dt / 6.0;
    pt.q = q + w * (kq[0] + 2.0 * (kq[1] + kq[2]) + kq[3]);
    pt.log_qx = lg + w * (kl[0] + 2.0 * (kl[1] + kl[2]) + kl[3]);
    pt.qx_var = var + w * (kv[0] + 2.0 * (kv[1] + kv[2]) + kv[3]);
  }
}

void CharacteristicSet::record(double t, const Field& u, const Field& eta) {
  Field ux = derivative(u);
  for (size_t i = 0; i < points_.size(); ++i) {
    const Point& pt = points_[i];
    CharacteristicTrace& tr = traces_[i];
    tr.t.push_back(t);
    tr.q.push_back(pt.q);
    tr.qx_exp.push_back(std::exp(pt.log_qx));
    tr.qx_ode.push_back(pt.qx_var);
    tr.m.push_back(fourier_interpolate(ux, pt.q));
    tr.eta_times_qx.push_back(fourier_interpolate(eta, pt.q) *
                              std::exp(pt.log_qx));
  }
}

bool CharacteristicSet::jacobian_positive() const {
  for (const Point& pt : points_)
    if (!(pt.qx_var > 0.0)) return false;
  return true;
}

namespace {

double safe_tail(const Field& f) {
  if (f.max_abs() == 0.0) return 0.0;
  return spectral_tail_fraction(f);
}

MonitorSample take_sample(const SystemState& st, double norm_s) {
  MonitorSample m;
  m.t = st.t;
  m.hs_u = sobolev_norm(st.u, norm_s);
  m.hsm1_eta = sobolev_norm(st.eta, norm_s - 1.0);
  m.l2_u = lebesgue_norm(st.u, 2.0);
  m.linf_u = st.u.max_abs();
  m.l1_eta = lebesgue_norm(st.eta, 1.0);
  m.mass_u = mass(st.u);
  m.mass_eta = mass(st.eta);
  m.linf_ux = derivative(st.u).max_abs();
  const double inf = std::numeric_limits<double>::infinity();
  m.b32_u = besov_norm(st.u, 1.5, 2.0, inf);
  m.b0inf_eta = besov_norm(st.eta, 0.0, inf, inf);
  m.tail_u = safe_tail(st.u);
  m.tail_eta = safe_tail(st.eta);
  return m;
}

bool edge_activity(const Field& f) {
  const double scale = f.max_abs();
  if (scale == 0.0) return false;
  const int n = f.size();
  double edge = std::max(std::abs(f[0]), std::abs(f[n - 1]));
  return edge > 1e-6 * scale;
}

}  // namespace

const MonitorSample* RunRecord::last_resolved() const {
  for (auto it = monitors.rbegin(); it != monitors.rend(); ++it)
    if (it->resolved(config.halt.tail_frac)) return &*it;
  return nullptr;
}

RunRecord integrate(SystemState state, const SolverConfig& cfg,
                    const std::vector<double>& char_seeds) {
  if (!(cfg.t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (cfg.fixed_dt < 0.0) throw ConfigError("fixed_dt must be >= 0");
  if (!(cfg.cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (state.u.grid() != state.eta.grid())
    throw ConfigError("u and eta must share a grid");

  const auto wall_start = std::chrono::steady_clock::now();
  const PeriodicGrid grid = state.u.grid();
  const double h = grid.spacing();
  const double dt_max = cfg.dt_max_frac * cfg.t_final;
  const double t_end = state.t + cfg.t_final;

  auto pick_dt = [&](const SystemState& st) {
    double dt = cfg.fixed_dt > 0.0
                    ? cfg.fixed_dt
                    : std::min(cfg.cfl * h / std::max(1.0, st.u.max_abs()),
                               dt_max);
    return std::min(dt, t_end - st.t);
  };

  int stride = cfg.stride;
  if (stride <= 0) {
    const double est_steps = cfg.t_final / pick_dt(state);
    stride = std::max(1, static_cast<int>(est_steps / 200.0));
  }

  RunRecord rec{cfg, grid, {}, {}, {}};
  rec.boundary_warning = edge_activity(state.u) || edge_activity(state.eta);
  rec.snapshots.push_back(state);
  rec.monitors.push_back(take_sample(state, cfg.norm_s));

  CharacteristicSet chars(char_seeds, state.eta);
  chars.record(state.t, state.u, state.eta);

  const double ux0 = std::max(derivative(state.u).max_abs(), 1e-300);
  const double ux_limit = cfg.halt.ux_factor * ux0;

  while (state.t < t_end * (1.0 - 1e-14)) {
    const double dt = pick_dt(state);
    SystemState next{state.u, state.eta, state.t};
    try {
      if (char_seeds.empty()) {
        next = rk4_step(state, dt, cfg.dealias);
      } else {
        Rk4Stages st = rk4_step_stages(state, dt, cfg.dealias);
        chars.step(st.u, dt);
        next = std::move(st.next);
      }
    } catch (const NumericError&) {
      rec.halt = HaltReason::nonfinite;
      break;
    }
    if (!next.u.finite() || !next.eta.finite()) {
      rec.halt = HaltReason::nonfinite;
      break;
    }
    state = std::move(next);
    ++rec.steps;

    const double ux_now = derivative(state.u).max_abs();
    // Halt thresholds watch the velocity component: u is the field whose
    // gradient blows up, while eta forms a transported spike whose spectrum
    // saturates much earlier without destabilizing the run. Both tail
    // fractions are still recorded in the monitor table.
    const bool tail_bad = safe_tail(state.u) > cfg.halt.tail_frac;
    const bool sample_now = rec.steps % stride == 0;
    if (sample_now || tail_bad || ux_now > ux_limit) {
      rec.monitors.push_back(take_sample(state, cfg.norm_s));
      chars.record(state.t, state.u, state.eta);
    }
    if (ux_now > ux_limit && tail_bad) {
      rec.halt = HaltReason::gradient_blowup;
      break;
    }
    if (tail_bad) {
      rec.halt = HaltReason::resolution_loss;
      break;
    }
  }

  rec.t_halt = state.t;
  if (rec.monitors.back().t < state.t) {
    rec.monitors.push_back(take_sample(state, cfg.norm_s));
    chars.record(state.t, state.u, state.eta);
  }
  rec.boundary_warning = rec.boundary_warning || edge_activity(state.u) ||
                         edge_activity(state.eta);
  rec.snapshots.push_back(std::move(state));
  rec.traces = chars.take();
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    wall_start)
          .count();
  return rec;
}

DriftReport conservation_report(const RunRecord& rec) {
  DriftReport rep;
  if (rec.monitors.empty()) return rep;
  const MonitorSample& first = rec.monitors.front();
  // Odd data integrates to zero, so scale by the L1 norm instead of the
  // (possibly vanishing) conserved integral itself.
  const SystemState& init = rec.initial();
  const double denom_u =
      std::max(std::abs(first.mass_u), lebesgue_norm(init.u, 1.0));
  const double denom_eta =
      std::max(std::abs(first.mass_eta), lebesgue_norm(init.eta, 1.0));
  for (const MonitorSample& m : rec.monitors) {
    if (!m.resolved(rec.config.halt.tail_frac)) continue;
    ++rep.judged;
    rep.drift_u =
        std::max(rep.drift_u, std::abs(m.mass_u - first.mass_u) / denom_u);
    rep.drift_eta = std::max(rep.drift_eta,
                             std::abs(m.mass_eta - first.mass_eta) / denom_eta);
  }
  return rep;
}

BoundsReport apriori_bounds_report(const RunRecord& rec) {
  const SystemState& init = rec.initial();
  double eta_min = 0.0;
  for (double v : init.eta.samples()) eta_min = std::min(eta_min, v);
  if (eta_min < -1e-10 * std::max(1.0, init.eta.max_abs()))
    throw ConfigError(
        "a-priori growth bounds require nonnegative initial surface "
        "deviation");

  const double u0_l2 = lebesgue_norm(init.u, 2.0);
  const double u0_linf = init.u.max_abs();
  const double eta0_l1 = lebesgue_norm(init.eta, 1.0);
  const double t0 = init.t;

  BoundsReport rep;
  for (const MonitorSample& m : rec.monitors) {
    if (!m.resolved(rec.config.halt.tail_frac)) continue;
    ++rep.judged;
    const double t = m.t - t0;
    const double l2_bound = u0_l2 + 0.5 * eta0_l1 * t;
    const double linf_bound = u0_linf + (u0_l2 + 0.5 * eta0_l1) * t +
                              0.5 * eta0_l1 * t * t;
    rep.worst_l2_ratio = std::max(rep.worst_l2_ratio, m.l2_u / l2_bound);
    rep.worst_linf_ratio =
        std::max(rep.worst_linf_ratio, m.linf_u / linf_bound);
  }
  rep.ok = rep.judged > 0 && rep.worst_l2_ratio <= 1.0 + 1e-6 &&
           rep.worst_linf_ratio <= 1.0 + 1e-6;
  return rep;
}

TransportReport transport_identity_check(const RunRecord& rec) {
  TransportReport rep;
  const double scale = std::max(rec.initial().eta.max_abs(), 1e-300);
  for (const CharacteristicTrace& tr : rec.traces) {
    for (size_t i = 0; i < tr.t.size(); ++i) {
      ++rep.judged;
      rep.max_rel_error =
          std::max(rep.max_rel_error,
                   std::abs(tr.eta_times_qx[i] - tr.eta0_at_x0) / scale);
    }
  }
  return rep;
}

double slope_envelope(const RunRecord& rec, double t) {
  const SystemState& init = rec.initial();
  const double u0_l2 = lebesgue_norm(init.u, 2.0);
  const double u0_linf = init.u.max_abs();
  const double eta0_l1 = lebesgue_norm(init.eta, 1.0);
  return 0.5 * eta0_l1 + u0_l2 + u0_linf + (u0_l2 + eta0_l1) * t +
         0.5 * eta0_l1 * t * t;
}

void write_record_json(const RunRecord& rec, const std::string& path) {
  nlohmann::json doc;
  doc["config"] = {
      {"cfl", rec.config.cfl},
      {"fixed_dt", rec.config.fixed_dt},
      {"dt_max_frac", rec.config.dt_max_frac},
      {"t_final", rec.config.t_final},
      {"dealias", rec.config.dealias},
      {"halt", {{"ux_factor", rec.config.halt.ux_factor},
                {"tail_frac", rec.config.halt.tail_frac}}},
      {"stride", rec.config.stride},
      {"norm_s", rec.config.norm_s}};
  doc["grid"] = {{"L", rec.grid.length()}, {"N", rec.grid.size()}};
  doc["halt"] = {{"reason", to_string(rec.halt)},
                 {"t_halt", rec.t_halt},
                 {"steps", rec.steps},
                 {"wall_seconds", rec.wall_seconds},
                 {"boundary_warning", rec.boundary_warning}};

  nlohmann::json mons = nlohmann::json::array();
  for (const MonitorSample& m : rec.monitors) {
    mons.push_back({{"t", m.t}, {"Hs_u", m.hs_u}, {"Hsm1_eta", m.hsm1_eta},
                    {"L2_u", m.l2_u}, {"Linf_u", m.linf_u},
                    {"L1_eta", m.l1_eta}, {"mass_u", m.mass_u},
                    {"mass_eta", m.mass_eta}, {"Linf_ux", m.linf_ux},
                    {"B32_u", m.b32_u}, {"B0inf_eta", m.b0inf_eta},
                    {"tail_u", m.tail_u}, {"tail_eta", m.tail_eta}});
  }
  doc["monitors"] = std::move(mons);

  nlohmann::json traces = nlohmann::json::array();
  for (const CharacteristicTrace& tr : rec.traces) {
    traces.push_back({{"x0", tr.x0}, {"eta0_at_x0", tr.eta0_at_x0},
                      {"t", tr.t}, {"q", tr.q}, {"qx_exp", tr.qx_exp},
                      {"qx_ode", tr.qx_ode}, {"m", tr.m},
                      {"eta_times_qx", tr.eta_times_qx}});
  }
  doc["traces"] = std::move(traces);

  // Decimate the stored states to at most 2048 points each.
  auto decimate = [](const Field& f) {
    const int stride = std::max(1, f.size() / 2048);
    nlohmann::json out = nlohmann::json::array();
    for (int i = 0; i < f.size(); i += stride) out.push_back(f[i]);
    return out;
  };
  nlohmann::json states = nlohmann::json::array();
  for (const SystemState& st : rec.snapshots) {
    states.push_back({{"t", st.t},
                      {"u", decimate(st.u)},
                      {"eta", decimate(st.eta)}});
  }
  doc["states"] = std::move(states);

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << doc.dump(1) << '\n';
}

void write_monitor_csv(const RunRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out.precision(17);
  out << "t,Hs_u,Hsm1_eta,L2_u,Linf_u,L1_eta,mass_u,mass_eta,Linf_ux,"
         "B32_u,B0inf_eta,tail_u,tail_eta\n";
  for (const MonitorSample& m : rec.monitors) {
    out << m.t << ',' << m.hs_u << ',' << m.hsm1_eta << ',' << m.l2_u << ','
        << m.linf_u << ',' << m.l1_eta << ',' << m.mass_u << ','
        << m.mass_eta << ',' << m.linf_ux << ',' << m.b32_u << ','
        << m.b0inf_eta << ',' << m.tail_u << ',' << m.tail_eta << '\n';
  }
}

}  // namespace fwlab
