#include <gtest/gtest.h>

#include <cmath>

#include "nl4s/errors.hpp"
#include "nl4s/evolution.hpp"
#include "oracles.hpp"

using namespace nl4s;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::Io;
}

const ExponentSet E1 = critical_exponents(1, 10.0);

EvolveConfig fixed_dt(double dt, double T) {
  EvolveConfig c;
  c.dt0 = dt;
  c.dt_max = dt;
  c.phase_cap = 1;
  c.t_end = T;
  c.dealias = false;
  return c;
}

// h2 = c (T - t)^(-rate) with T - t spanning `decades` decades below T
std::vector<TrajectoryRecord> synthetic(double T, double rate, double c, int n, double decades = 4) {
  std::vector<TrajectoryRecord> rows;
  for (int i = 0; i < n; ++i) {
    TrajectoryRecord r;
    r.t = T * (1 - std::pow(10.0, -decades * i / (n - 1)));
    r.h_2 = c * std::pow(T - r.t, -rate);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST(Config, Validation) {
  EvolveConfig c;
  EXPECT_NO_THROW(c.validate());
  c.phase_cap = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), Errc::InvalidArgument);
  c = {};
  c.dt_floor = 1;
  EXPECT_EQ(code_of([&] { c.validate(); }), Errc::InvalidArgument);
  c = {};
  c.phase_cap = 2;
  EXPECT_EQ(code_of([&] { c.validate(); }), Errc::InvalidArgument);
}

TEST(Strang, LinearSingleModeExact) {
  const Grid g = make_grid(1, {64}, {10});
  const int k = 3;
  const double xi = 2 * M_PI * k / 10;
  Field f(g);
  const RArray x = g.coord(0);
  for (int j = 0; j < 64; ++j) f.v[j] = std::polar(0.7, xi * x[j]);
  const double dt = 1e-3;
  Field u = f;
  for (int s = 0; s < 100; ++s) u = step_strang(u, dt, E1, false, false);
  const cplx ph = std::polar(1.0, -100 * dt * std::pow(xi, 4));
  EXPECT_LT((u.v - ph * f.v).abs().maxCoeff(), 1e-13);
}

TEST(Strang, LinearStepIsUnitary) {
  const Grid g = make_grid(1, {128}, {20});
  const Field f = oracle::random_bumps(g, 1);
  const Field u = step_strang(f, 0.01, E1, false, false);
  for (double gamma : {0.0, 0.5, 1.0, 2.0}) EXPECT_NEAR(sobolev_norm(u, gamma) / sobolev_norm(f, gamma), 1.0, 1e-12);
}

TEST(Strang, NonlinearPhasePreservesModulus) {
  const Grid g = make_grid(1, {128}, {20});
  const Field f = oracle::random_bumps(g, 2);
  CArray v = f.v;
  nonlinear_phase(v, 0.37, 10.0);
  EXPECT_LT((v.abs() - f.v.abs()).abs().maxCoeff(), 1e-15);
  // the phase is focusing: arg advances by tau |u|^alpha
  const Eigen::Index i = 64;
  EXPECT_NEAR(std::arg(v[i] / f.v[i]), std::remainder(0.37 * std::pow(std::abs(f.v[i]), 10), 2 * M_PI), 1e-12);
}

TEST(Strang, DealiasMaskZerosTopThird) {
  const Grid g = make_grid(1, {64}, {10});
  CArray s = CArray::Ones(64);
  dealias_mask(g, s);
  const RArray xi = g.xi(0);
  for (int k = 0; k < 64; ++k) {
    if (std::abs(xi[k]) > 2.0 / 3 * g.xi_nyquist(0) + 1e-12)
      EXPECT_EQ(s[k], cplx(0));
    else
      EXPECT_EQ(s[k], cplx(1));
  }
}

TEST(Strang, RejectsBadStep) {
  const Grid g = make_grid(1, {32}, {10});
  EXPECT_EQ(code_of([&] { step_strang(gaussian(g, 1, 1), 0, E1); }), Errc::InvalidArgument);
}

TEST(Evolve, ZeroData) {
  const Grid g = make_grid(1, {64}, {20});
  EvolveConfig c;
  c.t_end = 0.01;
  const EvolveResult r = evolve(Field(g), c, E1);
  EXPECT_EQ(r.status, RunStatus::Completed);
  for (const auto& row : r.trajectory) {
    EXPECT_EQ(row.mass, 0);
    EXPECT_EQ(row.h_2, 0);
    EXPECT_EQ(row.energy, 0);
  }
  EXPECT_DOUBLE_EQ(r.t_final, 0.01);
}

TEST(Evolve, MassConservedToRoundoff) {
  const Grid g = make_grid(1, {256}, {40});
  EvolveConfig c;
  c.t_end = 0.3;
  c.dealias = false;
  const EvolveResult r = evolve(gaussian(g, 1.0, 1.0), c, E1);
  EXPECT_EQ(r.status, RunStatus::Completed);
  for (const auto& row : r.trajectory) EXPECT_LT(std::abs(row.mass / r.trajectory[0].mass - 1), 1e-10);
}

TEST(Evolve, SubthresholdRunCompletes) {
  const Grid g = make_grid(1, {256}, {40});
  EvolveConfig c;
  c.t_end = 5;
  const EvolveResult r = evolve(gaussian(g, 0.4, 2.0), c, E1);
  EXPECT_EQ(r.status, RunStatus::Completed);
  double drift = 0, h2max = 0;
  for (const auto& row : r.trajectory) {
    drift = std::max(drift, std::abs(row.energy / r.trajectory[0].energy - 1));
    h2max = std::max(h2max, row.h_2);
  }
  EXPECT_LT(drift, 1e-6);
  EXPECT_LT(h2max, 2 * r.trajectory[0].h_2);
}

TEST(Evolve, EnergyDriftIsSecondOrder) {
  const Grid g = make_grid(1, {256}, {40});
  std::vector<double> drift;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    const EvolveResult r = evolve(gaussian(g, 0.6, 2.0), fixed_dt(dt, 0.2), E1);
    drift.push_back(std::abs(r.trajectory.back().energy - r.trajectory.front().energy));
  }
  for (int i = 0; i + 1 < 3; ++i) EXPECT_NEAR(std::log2(drift[i] / drift[i + 1]), 2.0, 0.2);
}

TEST(Evolve, SolutionSelfConvergenceIsSecondOrder) {
  const Grid g = make_grid(1, {256}, {40});
  std::vector<Field> u;
  for (double dt : {2e-3, 1e-3, 5e-4}) u.push_back(evolve(gaussian(g, 0.6, 2.0), fixed_dt(dt, 0.2), E1).final_field);
  const double a = std::sqrt(mass(u[0] - u[1])), b = std::sqrt(mass(u[1] - u[2]));
  EXPECT_NEAR(std::log2(a / b), 2.0, 0.2);
}

TEST(Evolve, SnapshotsAndSteps) {
  const Grid g = make_grid(1, {64}, {20});
  EvolveConfig c = fixed_dt(1e-3, 0.01);
  c.snapshot_every = 2;
  const EvolveResult r = evolve(gaussian(g, 0.5, 2), c, E1);
  EXPECT_EQ(r.steps, 10);
  EXPECT_EQ(r.trajectory.size(), 11u);
  EXPECT_EQ(r.snapshots.size(), 6u);
  EXPECT_EQ(r.snapshots.front().t, 0.0);
  EXPECT_NEAR(r.snapshots.back().t, 0.01, 1e-15);
}

TEST(Evolve, AdaptiveStepHonoursPhaseCap) {
  const Grid g = make_grid(1, {256}, {40});
  EvolveConfig c;
  c.t_end = 0.01;
  const EvolveResult r = evolve(gaussian(g, 1.3, 1), c, E1);
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    const double cap = c.phase_cap / std::pow(r.trajectory[i - 1].max_amp, 10);
    EXPECT_LE(r.trajectory[i].dt, std::min(cap, c.dt_max) * (1 + 1e-12));
  }
}

TEST(Evolve, RejectsNonFiniteData) {
  const Grid g = make_grid(1, {32}, {10});
  Field f = gaussian(g, 1, 1);
  f.v[3] = cplx(NAN, 0);
  EXPECT_EQ(code_of([&] { evolve(f, EvolveConfig{}, E1); }), Errc::InvalidArgument);
}

TEST(Evolve, MeasureMatchesFunctionals) {
  const Grid g = make_grid(1, {256}, {40});
  const Field f = gaussian(g, 0.9, 1.2);
  const TrajectoryRecord row = measure(f, E1, 0.5, 0.01);
  const FunctionalReport rep = functionals(f, E1);
  EXPECT_EQ(row.t, 0.5);
  EXPECT_EQ(row.dt, 0.01);
  EXPECT_EQ(row.energy, rep.energy);
  EXPECT_EQ(row.h_gamma_c, rep.sobolev_gamma_c);
  EXPECT_EQ(row.l_alpha_c, rep.lebesgue_alpha_c);
  EXPECT_NEAR(row.max_amp, 0.9, 1e-15);
}

TEST(FitBlowup, RecoversSyntheticLaw) {
  const BlowupFit f = fit_blowup(synthetic(1.0, 0.375, 2.0, 200), 0.375);
  EXPECT_NEAR(f.T_est, 1.0, 1e-3);
  EXPECT_NEAR(f.rate, 0.375, 1e-3);
  EXPECT_TRUE(f.lower_bound_ok);
  EXPECT_LT(f.rms, 1e-6);
}

TEST(FitBlowup, FlagsRateBelowBound) {
  const BlowupFit f = fit_blowup(synthetic(0.3, 0.2, 1.0, 200, 8), 0.475);
  EXPECT_NEAR(f.rate, 0.2, 1e-3);
  EXPECT_FALSE(f.lower_bound_ok);
}

TEST(FitBlowup, InsufficientGrowth) {
  auto rows = synthetic(1.0, 0.375, 1.0, 200);
  rows.resize(20);
  EXPECT_EQ(code_of([&] { fit_blowup(rows, 0.375); }), Errc::InsufficientGrowth);
  EXPECT_EQ(code_of([&] { fit_blowup({}, 0.375); }), Errc::InsufficientGrowth);
}

TEST(Status, Names) {
  EXPECT_STREQ(status_name(RunStatus::Completed), "Completed");
  EXPECT_STREQ(status_name(RunStatus::BlowupDetected), "BlowupDetected");
  EXPECT_STREQ(status_name(RunStatus::StepFloor), "StepFloor");
}
