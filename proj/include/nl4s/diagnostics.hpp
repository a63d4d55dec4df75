#pragma once

#include <vector>

#include "nl4s/evolution.hpp"

namespace nl4s {

// Radial profile theta with theta(r) = r^2 on [0, 1] and theta' = 0 on [2, inf).
// Smooth: theta'(r) = 2 r (1 - S(r - 1)), S the exp(-1/x) smooth step; C-infinity,
// constant past r = 2. Hermite7: the degree-7 Hermite bridge to theta(2) = 0,
// kept for comparison; it violates theta'' <= 2 and is rejected at construction.
enum class CutoffShape { Smooth, Hermite7 };

class ThetaProfile {
 public:
  explicit ThetaProfile(CutoffShape shape = CutoffShape::Smooth);
  CutoffShape shape() const { return shape_; }
  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  double d1_over_r(double r) const;  // theta'(r)/r, finite at 0
  double far_value() const { return tail_; }

 private:
  CutoffShape shape_;
  double herm_[8] = {};
  std::vector<double> table_;  // theta at 1 + k/K
  double tail_ = 0;
};

struct CutoffReport {
  double max_theta2 = 0;        // sup theta''
  double min_radial = 0;        // inf 2 - theta'/r
  double min_laplacian = 0;     // inf 2d - Delta phi
  double max_interior_err = 0;  // sup_{r<=1} |theta - r^2|
  double max_exterior_grad = 0; // sup_{r>=2} |theta'|
  bool ok = false;
};

// sweep of the four constraints on `points` radii in (0, 2.5]
CutoffReport check_theta(const ThetaProfile& th, int d, int points = 100000);

struct VirialCutoff {
  double R = 0;
  ThetaProfile theta;
  Field phi;
  std::vector<Field> grad_phi;
  Field laplacian_phi;
  Field bilaplacian_phi;
  Field trilaplacian_phi;
  CutoffReport report;

  double phi_at(double r) const { return R * R * theta.value(r / R); }
  double dphi_at(double r) const { return R * theta.d1(r / R); }
};

// throws CutoffTooLarge if 2R >= min L/2, ConstraintViolated if the sweep fails
VirialCutoff make_virial_cutoff(const Grid& g, double R, CutoffShape shape = CutoffShape::Smooth);

// 2 int grad phi . Im(conj(u) grad u)
double virial_action(const Field& f, const VirialCutoff& cut);
// 4 d alpha E - 2 (d alpha - 8) ||Delta u||^2, or 16 ||Delta u||^2 without the nonlinearity
double virial_rhs(const Field& f, const ExponentSet& e, bool nonlinear = true);

struct VirialCheck {
  double max_defect = 0;
  double max_exterior_mass = 0;  // fraction of the mass in |x| >= R
  std::vector<double> t, action, dMdt, rhs;
};

// snapshots at consecutive times; throws PreconditionFailed when the solution
// leaks past |x| = R (exterior mass fraction >= 1e-8)
VirialCheck check_virial_law(const std::vector<Snapshot>& snaps, const ExponentSet& e, const VirialCutoff& cut,
                             bool nonlinear = true);

// E - (1/2)(1 - (h_gc/s_gs)^alpha) h_2^2
double energy_trapping_slack(const TrajectoryRecord& row, double s_gs, const ExponentSet& e);

struct Concentration {
  std::vector<double> center;
  Eigen::Index index = 0;
  double value = 0;
};

// max over grid centers c of int_{|x - c| <= a} |(-Delta)^(gamma/2) f|^2; the ball
// weight of a cell at distance r is clamp((a - r)/h + 1/2, 0, 1)
Concentration concentration_scan(const Field& f, double gamma, double a);
// a(t) = (T - t)^(1/8)
double concentration_window(double T, double t);

// continuous argmax of |f| (grid argmax, then Newton on the interpolant)
std::vector<double> peak_location(const Field& f);

struct ProfileComparison {
  double lam = 0;
  std::vector<double> shift;
  double phase = 0;
  double dist_gamma_c = 0;
  double dist_2 = 0;
  Field aligned;  // e^(i phase) lam^(4/alpha) f(lam x + shift) on the grid of Q
};

ProfileComparison limiting_profile_compare(const Field& f, const Field& Q, const ExponentSet& e);

}  // namespace nl4s
