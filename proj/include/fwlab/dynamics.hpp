#pragma once

#include <array>
#include <string>
#include <vector>

#include "fwlab/field.hpp"
#include "fwlab/littlewood_paley.hpp"

namespace fwlab {

// One point on a trajectory of the coupled system
//   u_t + u u_x = d/dx (I - d2/dx2)^{-1} (eta - u),
//   eta_t + (eta u)_x = 0.
struct SystemState {
  Field u;
  Field eta;
  double t = 0.0;
};

struct HaltThresholds {
  double ux_factor = 1e3;   // halt when ||u_x||_inf exceeds this times initial
  double tail_frac = 0.1;   // and the spectral tail fraction exceeds this
};

struct SolverConfig {
  double cfl = 0.5;          // dt = cfl * h / max(1, ||u||_inf)
  double fixed_dt = 0.0;     // > 0 overrides the adaptive rule
  double dt_max_frac = 1e-3; // absolute cap dt <= dt_max_frac * t_final
  double t_final = 1.0;
  bool dealias = true;
  HaltThresholds halt;
  int stride = 0;            // monitor every this many steps; 0 = auto
  double norm_s = 2.0;       // s for the H^s / H^{s-1} monitor pair
};

enum class HaltReason { completed, gradient_blowup, resolution_loss, nonfinite };

std::string to_string(HaltReason r);

struct MonitorSample {
  double t = 0;
  double hs_u = 0, hsm1_eta = 0;
  double l2_u = 0, linf_u = 0, l1_eta = 0;
  double mass_u = 0, mass_eta = 0;
  double linf_ux = 0;
  double b32_u = 0;     // B^{3/2}_{2,inf}(u)
  double b0inf_eta = 0; // B^0_{inf,inf}(eta)
  double tail_u = 0, tail_eta = 0;
  bool resolved(double tail_threshold) const {
    return tail_u < tail_threshold && tail_eta < tail_threshold;
  }
};

// Trajectory of one tracked characteristic dq/dt = u(t,q), with the flow
// Jacobian carried two independent ways: q_x = exp(int u_x(s,q) ds) and the
// variational ODE dq_x/dt = u_x(t,q) q_x.
struct CharacteristicTrace {
  double x0 = 0.0;
  double eta0_at_x0 = 0.0;
  std::vector<double> t;
  std::vector<double> q;
  std::vector<double> qx_exp;
  std::vector<double> qx_ode;
  std::vector<double> m;            // u_x(t, q(t))
  std::vector<double> eta_times_qx; // eta(t,q) * q_x, transported quantity
};

struct RunRecord {
  SolverConfig config;
  PeriodicGrid grid;
  std::vector<MonitorSample> monitors;
  std::vector<CharacteristicTrace> traces;
  std::vector<SystemState> snapshots;  // initial and final state
  HaltReason halt = HaltReason::completed;
  double t_halt = 0.0;
  double wall_seconds = 0.0;
  bool boundary_warning = false;
  int steps = 0;

  const SystemState& initial() const { return snapshots.front(); }
  const SystemState& final_state() const { return snapshots.back(); }
  // Last monitor sample with both tail fractions below the halt threshold.
  const MonitorSample* last_resolved() const;
};

// Right-hand side of the method-of-lines system; quadratic products are
// dealiased (two-thirds rule), derivatives spectral. Throws NumericError on
// nonfinite output.
std::pair<Field, Field> rhs(const SystemState& state, bool dealias_products = true);

SystemState rk4_step(const SystemState& state, double dt,
                     bool dealias_products = true);

// The four stage states of a classical RK4 step, needed to advance
// characteristics in lockstep with the field.
struct Rk4Stages {
  std::array<Field, 4> u;    // stage velocity fields (t, t+dt/2, t+dt/2, t+dt)
  std::array<Field, 4> eta;
  SystemState next;
};
Rk4Stages rk4_step_stages(const SystemState& state, double dt,
                          bool dealias_products = true);

// RK4 on a set of characteristics coupled to the field stages.
class CharacteristicSet {
 public:
  explicit CharacteristicSet(const std::vector<double>& seeds,
                             const Field& eta0);
  void step(const std::array<Field, 4>& u_stages, double dt);
  void record(double t, const Field& u, const Field& eta);
  bool jacobian_positive() const;
  const std::vector<CharacteristicTrace>& traces() const { return traces_; }
  std::vector<CharacteristicTrace> take() { return std::move(traces_); }

 private:
  struct Point {
    double q;
    double log_qx;  // exponential-formula route
    double qx_var;  // variational-ODE route
  };
  std::vector<Point> points_;
  std::vector<CharacteristicTrace> traces_;
};

// Steps from the given state until t_final or a halt threshold fires.
// Characteristics seeded at char_seeds advance in lockstep. Numeric failures
// end the run with halt reason nonfinite, never an exception.
RunRecord integrate(SystemState state, const SolverConfig& cfg,
                    const std::vector<double>& char_seeds = {});

struct DriftReport {
  double drift_u = 0.0;    // max relative drift of the u integral
  double drift_eta = 0.0;
  int judged = 0;          // resolved samples entering the comparison
};
DriftReport conservation_report(const RunRecord& rec);

struct BoundsReport {
  double worst_l2_ratio = 0.0;    // max over samples of ||u||_2 / bound
  double worst_linf_ratio = 0.0;
  bool ok = false;                // both ratios <= 1 + 1e-6
  int judged = 0;
};
// Checks the growth bounds
//   ||u||_2 <= ||u0||_2 + t/2 ||eta0||_1,
//   ||u||_inf <= ||u0||_inf + (||u0||_2 + ||eta0||_1 / 2) t + ||eta0||_1 t^2 / 2
// at every resolved sample. Requires eta0 >= 0 (ConfigError otherwise).
BoundsReport apriori_bounds_report(const RunRecord& rec);

struct TransportReport {
  double max_rel_error = 0.0;  // |eta(t,q) q_x - eta0(x0)| / ||eta0||_inf
  int judged = 0;
};
TransportReport transport_identity_check(const RunRecord& rec);

// The polynomial envelope bounding d/dt u_x along a characteristic:
// M(t) = ||eta0||_1/2 + ||u0||_2 + ||u0||_inf + (||u0||_2 + ||eta0||_1) t
//        + ||eta0||_1 t^2 / 2, with quadrature norms of the stored data.
double slope_envelope(const RunRecord& rec, double t);

// Full record (config, monitor table, traces, halt metadata, decimated
// initial/final states) as a JSON document.
void write_record_json(const RunRecord& rec, const std::string& path);

// Monitor table as CSV with the fixed header
// t,Hs_u,Hsm1_eta,L2_u,Linf_u,L1_eta,mass_u,mass_eta,Linf_ux,B32_u,B0inf_eta,tail_u,tail_eta
void write_monitor_csv(const RunRecord& rec, const std::string& path);

}  // namespace fwlab
