#pragma once

// Reference computations for the tests. 1d transforms are direct O(N^2) sums
// in long double, integrals are adaptive quadrature of closed forms.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "nl4s/spectral.hpp"

namespace oracle {

using cld = std::complex<long double>;
inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// integral of f over [a, b]; b may be +inf
inline double quad(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

// ||A exp(-|x|^2/(2w^2))||^2 in the whole-space H^gamma seminorm
inline double gaussian_hsq(double A, double w, int d, double gamma) {
  return A * A * std::pow(M_PI, d / 2.0) * std::tgamma(gamma + d / 2.0) / std::tgamma(d / 2.0) *
         std::pow(w, d - 2 * gamma);
}

// ||A exp(-|x|^2/(2w^2))||_{L^q}^q
inline double gaussian_lq_pow(double A, double w, int d, double q) {
  return std::pow(A, q) * std::pow(2 * M_PI / q, d / 2.0) * std::pow(w, d);
}

// signed integer frequency index of slot k in FFT order
inline int freq_index(int k, int N) { return k < N / 2 ? k : k - N; }

// unnormalized DFT coefficients of a 1d field by direct summation
inline std::vector<cld> dft1(const nl4s::Field& f) {
  const int N = f.grid.n()[0];
  std::vector<cld> F(N);
  for (int k = 0; k < N; ++k) {
    cld s = 0;
    for (int j = 0; j < N; ++j) {
      const long double ang = -2 * kPiL * static_cast<long double>((static_cast<long long>(k) * j) % N) / N;
      s += cld(f.v[j].real(), f.v[j].imag()) * cld(std::cos(ang), std::sin(ang));
    }
    F[k] = s;
  }
  return F;
}

// direct synthesis of m(|xi|) applied to a 1d field
inline std::vector<std::complex<double>> multiplier1(const nl4s::Field& f, const std::function<long double(long double)>& m) {
  const int N = f.grid.n()[0];
  const long double L = f.grid.lengths()[0];
  const auto F = dft1(f);
  std::vector<std::complex<double>> out(N);
  for (int j = 0; j < N; ++j) {
    cld s = 0;
    for (int k = 0; k < N; ++k) {
      const long double xi = 2 * kPiL * freq_index(k, N) / L;
      const long double ang = 2 * kPiL * static_cast<long double>((static_cast<long long>(k) * j) % N) / N;
      s += m(std::fabs(xi)) * F[k] * cld(std::cos(ang), std::sin(ang));
    }
    s /= static_cast<long double>(N);
    out[j] = {static_cast<double>(s.real()), static_cast<double>(s.imag())};
  }
  return out;
}

// torus H^gamma norm squared of a 1d field from the direct DFT
inline double hsq1(const nl4s::Field& f, double gamma) {
  const int N = f.grid.n()[0];
  const long double L = f.grid.lengths()[0];
  const auto F = dft1(f);
  long double s = 0;
  for (int k = 0; k < N; ++k) {
    const long double xi = std::fabs(2 * kPiL * freq_index(k, N) / L);
    const long double w = gamma == 0 ? 1.0L : (xi == 0 ? 0.0L : std::pow(xi, 2.0L * gamma));
    s += w * std::norm(F[k]);
  }
  return static_cast<double>(s * (L / N) / N);
}

inline double lq_pow(const nl4s::Field& f, double q) {
  long double s = 0;
  for (Eigen::Index i = 0; i < f.v.size(); ++i) s += std::pow(static_cast<long double>(std::abs(f.v[i])), q);
  return static_cast<double>(s * f.grid.cell());
}

// smooth random field: random Gaussian bumps with random phases
inline nl4s::Field random_bumps(const nl4s::Grid& g, std::uint64_t seed, int bumps = 4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  nl4s::Field f(g);
  for (int b = 0; b < bumps; ++b) {
    std::vector<double> c(g.dim()), v(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
      c[a] = (U(rng) - 0.5) * 0.6 * g.lengths()[a];
      v[a] = (U(rng) - 0.5) * 2;
    }
    nl4s::Field bump = nl4s::gaussian(g, 0.2 + U(rng), 0.5 + 1.5 * U(rng), c, v);
    f += std::polar(1.0, 2 * M_PI * U(rng)) * bump;
  }
  return f;
}

// value of the ball window integral at every center, by direct summation over
// the whole grid with minimal-image distances; same fractional boundary weight
inline std::vector<double> brute_concentration(const nl4s::Field& f, double gamma, double a) {
  const nl4s::Grid& g = f.grid;
  std::vector<double> dens(g.size());
  if (g.dim() == 1) {
    const auto lf = multiplier1(f, [gamma](long double r) { return gamma == 0 ? 1.0L : std::pow(r, gamma); });
    for (Eigen::Index i = 0; i < g.size(); ++i) dens[i] = std::norm(lf[i]);
  } else {
    const nl4s::Field lf = nl4s::apply_multiplier(f, nl4s::power_symbol(g, gamma));
    for (Eigen::Index i = 0; i < g.size(); ++i) dens[i] = std::norm(lf.v[i]);
  }
  double h = g.h(0);
  for (int ax = 1; ax < g.dim(); ++ax) h = std::min(h, g.h(ax));
  std::vector<std::vector<double>> X(g.dim());
  for (int ax = 0; ax < g.dim(); ++ax) {
    const nl4s::RArray c = g.coord(ax);
    X[ax].assign(c.data(), c.data() + c.size());
  }
  std::vector<double> out(g.size());
  for (Eigen::Index c = 0; c < g.size(); ++c) {
    long double s = 0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      double r2 = 0;
      for (int ax = 0; ax < g.dim(); ++ax) {
        const double L = g.lengths()[ax];
        double dx = std::abs(X[ax][i] - X[ax][c]);
        dx = std::min(dx, L - dx);
        r2 += dx * dx;
      }
      const double wgt = std::clamp((a - std::sqrt(r2)) / h + 0.5, 0.0, 1.0);
      s += wgt * dens[i];
    }
    out[c] = static_cast<double>(s * g.cell());
  }
  return out;
}

}  // namespace oracle
