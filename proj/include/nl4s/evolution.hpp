#pragma once

#include <vector>

#include "nl4s/errors.hpp"
#include "nl4s/exponents.hpp"
#include "nl4s/field_io.hpp"
#include "nl4s/spectral.hpp"

namespace nl4s {

struct EvolveConfig {
  double dt0 = 1e-4;
  double t_end = 1.0;
  double phase_cap = 0.01;  // max nonlinear phase per step
  double dt_floor = 1e-14;
  double dt_max = 1e-3;
  double blowup_norm_factor = 2e3;  // on ||u||_{H2} relative to t = 0
  bool dealias = true;
  int snapshot_every = 0;  // 0: no snapshots
  bool nonlinear = true;

  void validate() const;
};

struct TrajectoryRecord {
  double t = 0, dt = 0;
  double mass = 0, energy = 0;
  double h_gamma_c = 0, h_2 = 0;
  double l_alpha2 = 0, l_alpha_c = 0;
  double max_amp = 0;
};

enum class RunStatus { Completed, BlowupDetected, StepFloor };
const char* status_name(RunStatus s);

struct EvolveResult {
  RunStatus status = RunStatus::Completed;
  std::vector<TrajectoryRecord> trajectory;
  std::vector<Snapshot> snapshots;
  Field final_field;
  double t_final = 0;
  int steps = 0;
};

// thrown by evolve; carries the rows recorded before the bad step
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::vector<TrajectoryRecord> rows)
      : Error(Errc::NonFinite, what), rows_(std::move(rows)) {}
  const std::vector<TrajectoryRecord>& trajectory() const { return rows_; }

 private:
  std::vector<TrajectoryRecord> rows_;
};

TrajectoryRecord measure(const Field& f, const ExponentSet& e, double t, double dt);

// half nonlinear phase, exact linear step exp(-i dt |xi|^4), half phase
Field step_strang(const Field& f, double dt, const ExponentSet& e, bool dealias = false, bool nonlinear = true);
void nonlinear_phase(CArray& v, double tau, double alpha);
void dealias_mask(const Grid& g, CArray& spec);

EvolveResult evolve(const Field& f0, const EvolveConfig& cfg, const ExponentSet& e);

struct BlowupFit {
  double T_est = 0;
  double rate = 0;
  double log_prefactor = 0;
  double rms = 0;
  int rows_used = 0;
  bool lower_bound_ok = false;
};

// log h2 = c - rate log(T - t) over the last decade of growth
BlowupFit fit_blowup(const std::vector<TrajectoryRecord>& rows, double rate_exp);

}  // namespace nl4s
