#pragma once

#include <string>
#include <vector>

#include "fwlab/dynamics.hpp"

namespace fwlab {

enum class Outcome { pass, fail, inconclusive };

std::string to_string(Outcome o);

struct Verdict {
  std::string claim;
  double measured = 0.0;
  double threshold = 0.0;
  Outcome outcome = Outcome::fail;
  std::string detail;
  std::vector<std::string> artifacts;
};

struct ExperimentConfig {
  std::string experiment = "all";
  // grid (0 = auto-sized per experiment)
  double box_l = 0.0;
  int grid_n = 0;
  // family
  double s = 2.0;
  double delta = 0.75;
  double r = 1.0;
  std::vector<int> n_list;
  std::vector<double> epsilon_list;
  int shells = 8;
  double band_lo = 0.55;
  double band_hi = 0.65;
  // solver
  double cfl = 0.5;
  double t_final = 1.0;
  bool dealias = true;
  double ux_factor = 1e3;
  double tail_frac = 0.1;
  // output
  std::string out_dir = "results";
  int stride = 0;
  // harness
  unsigned long long seed = 12345;
  bool quick = false;
  // true when a config file or caller set t_final explicitly; experiments
  // with a different natural horizon use their own default otherwise
  bool t_final_set = false;

  void validate() const;
  SolverConfig solver(double t_final_override = 0.0) const;
};

// Strict parser: unknown keys at any level are errors. Recognized layout:
// experiment, grid{L,N}, family{s,delta,n_list,r,epsilon_list,shells,
// C_band[a,b]}, solver{cfl,t_final,dealias,halt{ux_factor,tail_frac}},
// output{dir,stride}.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
void write_config_echo(const ExperimentConfig& cfg, const std::string& path);

std::vector<Verdict> exp_verify_norms(const ExperimentConfig& cfg);
std::vector<Verdict> exp_residuals(const ExperimentConfig& cfg);
std::vector<Verdict> exp_nonuniform(const ExperimentConfig& cfg);
std::vector<Verdict> exp_holder(const ExperimentConfig& cfg);
std::vector<Verdict> exp_blowup(const ExperimentConfig& cfg);
std::vector<Verdict> exp_inflation(const ExperimentConfig& cfg);

// Time-stepper self-diagnostics: measured RK4 order, linearized-evolution
// oracle error, and resolution-doubling stability. Not a CLI subcommand;
// used by the test suite.
std::vector<Verdict> solver_self_checks(bool quick = false);

// Worker count for parameter sweeps: FWLAB_WORKERS if set, else one per
// available processor.
int worker_count();

// 0 all pass, 1 any fail, 2 any inconclusive (no fail), 64 usage error.
int cli_main(const std::vector<std::string>& args);

}  // namespace fwlab
