#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nl4s/exponents.hpp"
#include "nl4s/spectral.hpp"

namespace nl4s {

enum class Equation { Sobolev, Lebesgue };
const char* equation_name(Equation e);

// How the Sobolev iteration treats the xi = 0 mode, where |xi|^4 + |xi|^(2gc)
// vanishes. Zeta keeps the whole-line behaviour Q^(xi) ~ N^(0)|xi|^(-2gc) by
// giving the torus zero mode its zeta-regularized value (d = 1 only);
// Project drops the mode.
enum class ZeroMode { Zeta, Project };

struct GroundStateOptions {
  int max_iter = 5000;
  double tol = 0;  // 0: 1e-10 for the gamma = 0 model, 1e-8 otherwise
  double step_tol = 1e-10;
  double width = 0;  // 0: L/10
  double amplitude = 1;
  std::uint64_t seed = 0;  // nonzero: initial width jittered by up to +-20%
  ZeroMode zero_mode = ZeroMode::Zeta;
  double shift = 1.0;  // Lebesgue: L = Delta^2 + shift
  std::optional<Field> initial;
};

struct PohozaevDefects {
  double first = 0;     // ||Q||^2_{gc} vs (alpha/2)||Q||^2_{H2}
  double second = 0;    // (alpha/2)||Q||^2_{H2} vs alpha/(alpha+2)||Q||^{alpha+2}
  double equation = 0;  // tested equation: ||Q||^2_{gc} + ||Q||^2_{H2} vs ||Q||^{alpha+2}
};

struct GroundStateResult {
  Field field;
  Equation equation = Equation::Sobolev;
  double alpha = 0;
  double gamma = 0;  // power in the lower-order symbol
  double residual_l2 = 0;
  double mean_mode_defect = 0;
  double step_change = 0;
  double stabilizer = 0;  // final M_k
  int iterations = 0;
  std::vector<double> residual_history;
  LowMode low_mode;
  FunctionalReport norms;
  double pohozaev_defect_1 = 0;
  double pohozaev_defect_2 = 0;
  double pohozaev_equation = 0;
  double sharp_constant = 0;
};

GroundStateResult solve_sobolev_ground_state(const ExponentSet& e, const Grid& g, const GroundStateOptions& opts = {});
GroundStateResult solve_lebesgue_ground_state(const ExponentSet& e, const Grid& g, const GroundStateOptions& opts = {});

// Delta^2 Q + (-Delta)^gamma Q = |Q|^alpha Q with gamma = d/2 - 4/alpha >= 0.
// gamma = 0 is the mass-critical equation Delta^2 Q + Q = |Q|^(8/d) Q, which the
// ExponentSet path rejects.
GroundStateResult solve_sobolev_type(const Grid& g, double alpha, const GroundStateOptions& opts = {});

PohozaevDefects pohozaev_defects(const Field& g, const ExponentSet& e, Equation which, const LowMode& lm = {});
PohozaevDefects pohozaev_defects(const Field& g, double alpha, Equation which, const LowMode& lm = {});

double sharp_constants(const GroundStateResult& gs, const ExponentSet& e);

struct GnReport {
  int trials = 0;
  double a_gn = 0;
  double max_ratio = 0;
  int argmax_trial = -1;
  std::uint64_t seed = 0;
};

// randomized Gaussian mixture, deterministic in (seed, index)
Field random_mixture(const Grid& g, std::uint64_t seed, std::uint64_t index);
GnReport verify_gn_sharpness(double a_gn, const ExponentSet& e, const Grid& g, int trials, std::uint64_t seed);

}  // namespace nl4s
