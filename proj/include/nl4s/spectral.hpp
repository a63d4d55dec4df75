#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "nl4s/exponents.hpp"

namespace nl4s {

using cplx = std::complex<double>;
using CArray = Eigen::ArrayXcd;
using RArray = Eigen::ArrayXd;

// Periodic box [-L/2, L/2)^d, N points per axis, row-major flattening
// (last axis fastest).
class Grid {
 public:
  Grid() = default;
  Grid(std::vector<int> n, std::vector<double> lengths);

  int dim() const { return static_cast<int>(n_.size()); }
  const std::vector<int>& n() const { return n_; }
  const std::vector<double>& lengths() const { return len_; }
  Eigen::Index size() const { return size_; }
  double h(int axis) const { return len_[axis] / n_[axis]; }
  double dxi(int axis) const;
  double cell() const { return cell_; }  // h^d
  double volume() const;

  // per-axis tables
  RArray x(int axis) const;   // -L/2 + j h
  RArray xi(int axis) const;  // 2 pi k / L, standard FFT order

  // flat tables, cached and shared between copies
  const RArray& xi2() const { return *xi2_; }
  const RArray& xi_abs() const { return *xi_abs_; }
  RArray coord(int axis) const;      // x_axis at every flat index
  RArray xi_flat(int axis) const;    // xi_axis at every flat index
  double xi_nyquist(int axis) const; // pi N / L

  bool operator==(const Grid& o) const { return n_ == o.n_ && len_ == o.len_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  std::vector<int> n_;
  std::vector<double> len_;
  Eigen::Index size_ = 0;
  double cell_ = 0;
  std::shared_ptr<const RArray> xi2_, xi_abs_;
};

Grid make_grid(int d, const std::vector<int>& n_points, const std::vector<double>& lengths);

struct Field {
  Grid grid;
  CArray v;

  Field() = default;
  Field(Grid g) : grid(std::move(g)), v(CArray::Zero(grid.size())) {}
  Field(Grid g, CArray values);

  bool finite() const { return v.allFinite(); }
  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx c) {
    v *= c;
    return *this;
  }
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx c, Field a);

// transforms on fields, unnormalized forward DFT
CArray spectrum(const Field& f);
Field from_spectrum(const Grid& g, CArray F);

using RadialSymbol = std::function<double(double)>;

// symbol evaluated at every grid frequency; throws SingularSymbol on non-finite
RArray radial_symbol(const Grid& g, const RadialSymbol& m);

Field apply_multiplier(const Field& f, const RadialSymbol& m);
Field apply_multiplier(const Field& f, const RArray& symbol);
Field apply_multiplier(const Field& f, const CArray& symbol);

// |xi|^p with the value at xi = 0 fixed to 0 for p > 0, 1 for p == 0
RArray power_symbol(const Grid& g, double p);

Field derivative(const Field& f, int axis);
Field frac_laplacian(const Field& f, double gamma);  // (-Delta)^gamma

double sobolev_norm_sq(const Field& f, double gamma);
double sobolev_norm(const Field& f, double gamma);
double lebesgue_norm(const Field& f, double q);  // q may be +inf
double mass(const Field& f);

// Low-frequency model F(xi) ~ a |xi|^-s + b of a field on the line, used to
// turn the torus Riemann sum of an H^gamma norm into a whole-line estimate.
// Regular (integrable, decaying) data has a = 0 and b is read off the zero
// mode. Ground states of the Sobolev equation carry a nonzero a.
struct LowMode {
  double s = 0;
  cplx a = 0;
  bool singular() const { return a != cplx(0); }
};

// Whole-space estimate of ||f||_{H^gamma}^2; identical to the torus value for
// integer gamma, d > 1, or gamma = 0.
double sobolev_norm_sq_rd(const Field& f, double gamma, const LowMode& lm = {});
double sobolev_norm_rd(const Field& f, double gamma, const LowMode& lm = {});

struct FunctionalReport {
  double mass = 0;
  double energy = 0;
  double sobolev_gamma_c = 0;
  double sobolev_2 = 0;
  double lebesgue_alpha2 = 0;
  double lebesgue_alpha_c = 0;
  std::optional<double> h_value;
  std::optional<double> k_value;
};

FunctionalReport functionals(const Field& f, const ExponentSet& e, const LowMode& lm = {});
double energy(const Field& f, double alpha);

// f_{mu,lam}(x) = mu f(lam x), resampled by trigonometric interpolation; f counts
// as zero outside its box, so lam > 1 does not pull in periodic copies
Field rescale(const Field& f, double mu, double lam);
// evaluates the trigonometric interpolant of f at x0 + lam * x_j on the same grid
Field resample_affine(const Field& f, double lam, const std::vector<double>& x0);
// trigonometric interpolant of f evaluated at x0 + lam * y_j, y_j the points of target
Field sample_affine(const Field& f, const Grid& target, double lam, const std::vector<double>& x0);
// change N at fixed L by spectral padding/truncation
Field resample(const Field& f, const Grid& target);

Field normalize_to_unit(const Field& f, const ExponentSet& e);

// f(x - shift)
Field translate(const Field& f, const std::vector<double>& shift);

// Re int (-Delta)^gamma f x.grad conj(f) - (gamma - d/2) ||f||^2_{H^gamma}
double pairing_residual(const Field& f, double gamma);

Field gaussian(const Grid& g, double amplitude, double width, const std::vector<double>& center = {},
               const std::vector<double>& velocity = {});

}  // namespace nl4s
