#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nl4s/exponents.hpp"
#include "nl4s/spectral.hpp"

namespace nl4s {

// shift of profile j at sequence index n (n starts at 1)
using ShiftLaw = std::function<std::vector<double>(int j, int n)>;

// v_n = sum_j V^j(x - x_n^j) + noise, n = 1..count. Noise is a white field
// smoothed by a Gaussian of width noise_width (0: two grid spacings) and
// scaled to max amplitude noise_amp.
std::vector<Field> synth_sequence(const Grid& g, const std::vector<Field>& profiles, const ShiftLaw& shifts,
                                  double noise_amp, int count, std::uint64_t seed, double noise_width = 0);

struct DecomposeOptions {
  int l_max = 5;
  double q = 0;          // residual L^q exponent; 0: alpha + 2
  double tol = 1e-6;     // stop once ||v_n^l||_{L^q} of the last element is below tol
  double mollifier = 0;  // Gaussian width; 0: two grid spacings
  double separation = 0; // 0: eight mollifier widths
};

struct ProfileDecomposition {
  std::vector<Field> profiles;
  std::vector<std::vector<std::vector<double>>> shifts;  // [j][n] -> x_n^j
  std::vector<Field> residuals;                          // v_n^l for the final l
  int tail_begin = 0;                                    // tail = [tail_begin, count)
  double separation = 0;
  double residual_lq = 0;  // L^q norm of the last residual
  double defect_gamma_c = 0;
  double defect_2 = 0;
};

ProfileDecomposition decompose(const std::vector<Field>& seq, const ExponentSet& e, const DecomposeOptions& opts = {});

// max over tail n of | ||v_n||^2 - sum_j ||V^j||^2 - ||v_n^l||^2 | / ||v_n||^2 in H^gamma
double pythagorean_defect(const ProfileDecomposition& dec, const std::vector<Field>& seq, double gamma);
std::vector<double> pythagorean_defects_by_index(const ProfileDecomposition& dec, const std::vector<Field>& seq,
                                                 double gamma);

// min over tail n of |x_n^j - x_n^k| (minimal image)
double min_tail_separation(const ProfileDecomposition& dec, const Grid& g, int j, int k);

struct CompactnessResult {
  Field profile;
  double norm_gamma_c = 0;  // ||V||_{H^gc}
  double bound = 0;         // (2/(alpha+2)) (m^(alpha+2)/M^2) s_gs^alpha, compared with ||V||^alpha
  double ratio = 0;         // ||V||^alpha / bound
  ProfileDecomposition decomposition;
};

CompactnessResult compactness_extract(const std::vector<Field>& seq, double m, double M, double s_gs,
                                      const ExponentSet& e, const DecomposeOptions& opts = {});

}  // namespace nl4s
