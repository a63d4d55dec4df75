#include <gtest/gtest.h>

#include <cmath>

#include "nl4s/errors.hpp"
#include "nl4s/groundstate.hpp"
#include "nl4s/profiles.hpp"
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
const Grid G = make_grid(1, {2048}, {256});
const std::vector<double> CO{-0.375, 0, 0.375};

std::vector<Field> three_profiles() {
  return {gaussian(G, 1.0, 1.0), gaussian(G, 0.8, 0.7), gaussian(G, 0.6, 0.8)};
}

ShiftLaw spreading() {
  return [](int j, int n) { return std::vector<double>{CO[j] * n * n}; };
}

double rel_err(const Field& a, const Field& b, double gamma) {
  return sobolev_norm(a - b, gamma) / sobolev_norm(b, gamma);
}

// index of the recovered profile that sits at x = CO[k] n^2 on the last element
int match(const ProfileDecomposition& d, int k) {
  for (std::size_t j = 0; j < d.profiles.size(); ++j)
    if (std::abs(d.shifts[j].back()[0] - CO[k] * 256) < 1.0) return static_cast<int>(j);
  return -1;
}

}  // namespace

TEST(Synth, SingleProfileNoNoise) {
  const Field V = gaussian(G, 1, 1);
  const auto seq = synth_sequence(G, {V}, spreading(), 0, 8, 1);
  ASSERT_EQ(seq.size(), 8u);
  for (int n = 1; n <= 8; ++n) {
    // the center lands on a grid point, so translation is exact
    const Field want = gaussian(G, 1, 1, {CO[0] * n * n});
    EXPECT_LT((seq[n - 1].v - want.v).abs().maxCoeff(), 1e-12) << n;
  }
}

TEST(Synth, ZeroProfilesIsPureNoise) {
  const auto seq = synth_sequence(G, {}, spreading(), 1e-3, 8, 4, 1.0);
  for (const auto& f : seq) EXPECT_NEAR(f.v.abs().maxCoeff(), 1e-3, 1e-15);
  const auto again = synth_sequence(G, {}, spreading(), 1e-3, 8, 4, 1.0);
  EXPECT_EQ((seq[3].v - again[3].v).abs().maxCoeff(), 0.0);
}

TEST(Synth, Errors) {
  const Field V = gaussian(G, 1, 1);
  EXPECT_EQ(code_of([&] { synth_sequence(G, {V}, spreading(), 0, 40, 1); }), Errc::ShiftOutOfBox);
  EXPECT_EQ(code_of([&] { synth_sequence(G, {V}, spreading(), -1, 8, 1); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { synth_sequence(G, {V}, spreading(), 0, 0, 1); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { synth_sequence(G, {gaussian(make_grid(1, {64}, {8}), 1, 1)}, spreading(), 0, 8, 1); }),
            Errc::BadShape);
}

TEST(Decompose, NoiselessSingleProfile) {
  const Field V = gaussian(G, 1, 1);
  const auto seq = synth_sequence(G, {V}, spreading(), 0, 16, 1);
  const ProfileDecomposition d = decompose(seq, E1);
  ASSERT_EQ(d.profiles.size(), 1u);
  for (int n = 1; n <= 16; ++n) EXPECT_NEAR(d.shifts[0][n - 1][0], CO[0] * n * n, 1e-8);
  const Field back = translate(d.profiles[0], {d.shifts[0].back()[0] - CO[0] * 256});
  EXPECT_LT(rel_err(back, V, E1.gamma_c), 1e-6);
  EXPECT_LT(rel_err(back, V, 2), 1e-6);
  EXPECT_LT(d.residual_lq, 1e-6);
}

TEST(Decompose, NoisyThreeProfiles) {
  const auto prof = three_profiles();
  const auto seq = synth_sequence(G, prof, spreading(), 1e-3, 16, 5, 1.0);
  DecomposeOptions o;
  o.tol = 1e-2;
  const ProfileDecomposition d = decompose(seq, E1, o);
  ASSERT_EQ(d.profiles.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    const int j = match(d, k);
    ASSERT_GE(j, 0) << k;
    const Field back = translate(d.profiles[j], {d.shifts[j].back()[0] - CO[k] * 256});
    EXPECT_LT(rel_err(back, prof[k], E1.gamma_c), 5e-2) << k;
    EXPECT_LT(rel_err(back, prof[k], 2), 5e-2) << k;
  }
  EXPECT_LT(d.residual_lq, 1e-2);
}

TEST(Decompose, ZeroSequenceGivesNoProfiles) {
  const std::vector<Field> seq(10, Field(G));
  const ProfileDecomposition d = decompose(seq, E1);
  EXPECT_TRUE(d.profiles.empty());
  EXPECT_EQ(d.residual_lq, 0.0);
  EXPECT_EQ(d.defect_gamma_c, 0.0);
}

TEST(Decompose, Validation) {
  const std::vector<Field> seq(10, gaussian(G, 1, 1));
  EXPECT_EQ(code_of([&] { decompose(std::vector<Field>(5, Field(G)), E1); }), Errc::InvalidArgument);
  DecomposeOptions o;
  o.q = 2;
  EXPECT_EQ(code_of([&] { decompose(seq, E1, o); }), Errc::InvalidArgument);
  o = {};
  o.l_max = -1;
  EXPECT_EQ(code_of([&] { decompose(seq, E1, o); }), Errc::InvalidArgument);
  auto mixed = seq;
  mixed[2] = gaussian(make_grid(1, {1024}, {256}), 1, 1);
  EXPECT_EQ(code_of([&] { decompose(mixed, E1); }), Errc::BadShape);
}

TEST(Decompose, PythagoreanNoiseless) {
  const auto seq = synth_sequence(G, three_profiles(), spreading(), 0, 16, 1);
  const ProfileDecomposition d = decompose(seq, E1);
  ASSERT_EQ(d.profiles.size(), 3u);
  // H^2 is local, so separated bumps are orthogonal to roundoff
  EXPECT_LT(d.defect_2, 1e-10);
  // fractional norms have algebraic tails, so cross terms stay at the percent level
  EXPECT_LT(d.defect_gamma_c, 5e-2);
  EXPECT_GT(d.defect_gamma_c, 1e-4);
}

TEST(Decompose, PythagoreanNoisyIsSmall) {
  const auto seq = synth_sequence(G, three_profiles(), spreading(), 1e-3, 16, 5, 1.0);
  DecomposeOptions o;
  o.tol = 1e-2;
  const ProfileDecomposition d = decompose(seq, E1, o);
  for (double v : pythagorean_defects_by_index(d, seq, 2)) EXPECT_LT(v, 5e-2);
}

TEST(Decompose, CollidingProfilesRejected) {
  // the second bump wobbles around the first at a distance below the separation threshold
  const std::vector<Field> prof{gaussian(G, 1, 1), gaussian(G, 0.9, 1)};
  const ShiftLaw law = [](int j, int n) {
    return std::vector<double>{0.375 * n * n + (j ? 1.5 * (n % 2 ? 1 : -1) : 0.0)};
  };
  const auto seq = synth_sequence(G, prof, law, 0, 16, 1);
  EXPECT_EQ(code_of([&] { decompose(seq, E1); }), Errc::NoSeparation);
}

TEST(Decompose, TranslationEquivariance) {
  const auto seq = synth_sequence(G, three_profiles(), spreading(), 1e-3, 16, 5, 1.0);
  const double s = 3 * 0.125;
  std::vector<Field> moved;
  for (const auto& f : seq) moved.push_back(translate(f, {s}));
  DecomposeOptions o;
  o.tol = 1e-2;
  const ProfileDecomposition a = decompose(seq, E1, o), b = decompose(moved, E1, o);
  ASSERT_EQ(a.profiles.size(), b.profiles.size());
  for (std::size_t j = 0; j < a.profiles.size(); ++j) {
    for (std::size_t n = 0; n < seq.size(); ++n) EXPECT_NEAR(b.shifts[j][n][0] - a.shifts[j][n][0], s, 1e-10);
    EXPECT_LT((b.profiles[j].v - a.profiles[j].v).abs().maxCoeff(), 1e-10);
  }
}

TEST(Decompose, PhaseInvariance) {
  const auto seq = synth_sequence(G, three_profiles(), spreading(), 1e-3, 16, 5, 1.0);
  const cplx ph = std::polar(1.0, 0.9);
  std::vector<Field> rot;
  for (const auto& f : seq) rot.push_back(ph * f);
  DecomposeOptions o;
  o.tol = 1e-2;
  const ProfileDecomposition a = decompose(seq, E1, o), b = decompose(rot, E1, o);
  ASSERT_EQ(a.profiles.size(), b.profiles.size());
  for (std::size_t j = 0; j < a.profiles.size(); ++j) {
    EXPECT_EQ(a.shifts[j], b.shifts[j]);
    // the median acts on real and imaginary parts apart, so rotation commutes only up
    // to the recovery error of each run
    EXPECT_LT(rel_err(b.profiles[j], ph * a.profiles[j], 2), 1e-1);
  }
}

TEST(Decompose, SeparationGrows) {
  const auto seq = synth_sequence(G, three_profiles(), spreading(), 1e-3, 16, 5, 1.0);
  DecomposeOptions o;
  o.tol = 1e-2;
  const ProfileDecomposition d = decompose(seq, E1, o);
  ASSERT_EQ(d.profiles.size(), 3u);
  for (int j = 0; j < 3; ++j)
    for (int k = j + 1; k < 3; ++k) {
      double prev = 0;
      for (std::size_t n = d.tail_begin; n < seq.size(); ++n) {
        const double sep = std::abs(d.shifts[j][n][0] - d.shifts[k][n][0]);
        EXPECT_GT(sep, prev);
        prev = sep;
      }
      EXPECT_GT(min_tail_separation(d, G, j, k), d.separation);
    }
}

TEST(Compactness, ConstantGroundStateSequence) {
  const GroundStateResult q = solve_sobolev_ground_state(E1, make_grid(1, {1024}, {80}));
  const std::vector<Field> seq(12, q.field);
  const double m = lebesgue_norm(q.field, E1.alpha + 2), M = sobolev_norm(q.field, 2);
  const CompactnessResult r = compactness_extract(seq, m, M, q.norms.sobolev_gamma_c, E1);
  EXPECT_GE(r.ratio, 1.0);
  EXPECT_LT(r.ratio, 1.05);
  EXPECT_LT(rel_err(translate(r.profile, {r.decomposition.shifts[0].back()[0]}), q.field, 2), 1e-6);
}

TEST(Compactness, PreconditionsChecked) {
  const auto noise = synth_sequence(G, {}, spreading(), 1e-3, 12, 2, 1.0);
  EXPECT_EQ(code_of([&] { compactness_extract(noise, 0.5, 10, 1.5, E1); }), Errc::PreconditionFailed);
  const std::vector<Field> big(12, gaussian(G, 1, 1));
  EXPECT_EQ(code_of([&] { compactness_extract(big, 0.1, 1e-3, 1.5, E1); }), Errc::PreconditionFailed);
  EXPECT_EQ(code_of([&] { compactness_extract(big, -1, 1, 1.5, E1); }), Errc::InvalidArgument);
}
