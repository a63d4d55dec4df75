#include "nl4s/diagnostics.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "nl4s/fft.hpp"

namespace nl4s {

namespace {

constexpr int kThetaTable = 2048;

// S(x) = 1 / (1 + exp(1/x - 1/(1-x))) on (0, 1), with S' alongside
void smooth_step(double x, double& s, double& ds) {
  if (x <= 0) {
    s = 0;
    ds = 0;
    return;
  }
  if (x >= 1) {
    s = 1;
    ds = 0;
    return;
  }
  const double ex = 1 / x - 1 / (1 - x);
  if (ex > 700) {
    s = 0;
    ds = 0;
    return;
  }
  if (ex < -700) {
    s = 1;
    ds = 0;
    return;
  }
  s = 1 / (1 + std::exp(ex));
  ds = s * (1 - s) * (1 / (x * x) + 1 / ((1 - x) * (1 - x)));
}

double gauss_int(double a, double b, const ThetaProfile& th) {
  return boost::math::quadrature::gauss<double, 15>::integrate([&](double r) { return th.d1(r); }, a, b);
}

}  // namespace

// ---------------------------------------------------------------- theta

ThetaProfile::ThetaProfile(CutoffShape shape) : shape_(shape) {
  if (shape_ == CutoffShape::Hermite7) {
    // p(s) = 1 + 2s + s^2 + c4 s^4 + ... + c7 s^7, all derivatives to order 3 vanish at s = 1
    herm_[0] = 1;
    herm_[1] = 2;
    herm_[2] = 1;
    herm_[3] = 0;
    Eigen::Matrix4d A;
    Eigen::Vector4d b;
    for (int j = 0; j < 4; ++j) {
      double rhs = 0;
      for (int k = 0; k < 4; ++k) {
        double c = 1;
        for (int q = 0; q < j; ++q) c *= (k - q);
        rhs -= herm_[k] * c;
      }
      b[j] = rhs;
      for (int k = 4; k < 8; ++k) {
        double c = 1;
        for (int q = 0; q < j; ++q) c *= (k - q);
        A(j, k - 4) = c;
      }
    }
    const Eigen::Vector4d c = A.fullPivLu().solve(b);
    for (int k = 0; k < 4; ++k) herm_[4 + k] = c[k];
    tail_ = 0;
    return;
  }
  table_.assign(kThetaTable + 1, 0.0);
  table_[0] = 1;
  for (int k = 0; k < kThetaTable; ++k) {
    const double a = 1 + static_cast<double>(k) / kThetaTable, b = 1 + static_cast<double>(k + 1) / kThetaTable;
    table_[k + 1] = table_[k] + gauss_int(a, b, *this);
  }
  tail_ = table_.back();
}

double ThetaProfile::value(double r) const {
  if (r <= 1) return r * r;
  if (r >= 2) return tail_;
  if (shape_ == CutoffShape::Hermite7) {
    const double s = r - 1;
    double p = 0;
    for (int k = 7; k >= 0; --k) p = p * s + herm_[k];
    return p;
  }
  const int k = std::min(static_cast<int>((r - 1) * kThetaTable), kThetaTable - 1);
  const double a = 1 + static_cast<double>(k) / kThetaTable;
  return table_[k] + gauss_int(a, r, *this);
}

double ThetaProfile::d1(double r) const {
  if (r <= 1) return 2 * r;
  if (r >= 2) return 0;
  return r * d1_over_r(r);
}

double ThetaProfile::d1_over_r(double r) const {
  if (r <= 1) return 2;
  if (r >= 2) return 0;
  if (shape_ == CutoffShape::Hermite7) {
    const double s = r - 1;
    double p = 0;
    for (int k = 7; k >= 1; --k) p = p * s + k * herm_[k];
    return p / r;
  }
  double S, dS;
  smooth_step(r - 1, S, dS);
  return 2 * (1 - S);
}

double ThetaProfile::d2(double r) const {
  if (r <= 1) return 2;
  if (r >= 2) return 0;
  if (shape_ == CutoffShape::Hermite7) {
    const double s = r - 1;
    double p = 0;
    for (int k = 7; k >= 2; --k) p = p * s + k * (k - 1) * herm_[k];
    return p;
  }
  double S, dS;
  smooth_step(r - 1, S, dS);
  return 2 * (1 - S) - 2 * r * dS;
}

CutoffReport check_theta(const ThetaProfile& th, int d, int points) {
  CutoffReport rep;
  rep.max_theta2 = -1e300;
  rep.min_radial = 1e300;
  rep.min_laplacian = 1e300;
  for (int i = 1; i <= points; ++i) {
    const double r = 2.5 * i / points;
    const double t2 = th.d2(r), t1r = th.d1_over_r(r);
    rep.max_theta2 = std::max(rep.max_theta2, t2);
    rep.min_radial = std::min(rep.min_radial, 2 - t1r);
    rep.min_laplacian = std::min(rep.min_laplacian, 2.0 * d - (t2 + (d - 1) * t1r));
    if (r <= 1) rep.max_interior_err = std::max(rep.max_interior_err, std::abs(th.value(r) - r * r));
    if (r >= 2) rep.max_exterior_grad = std::max(rep.max_exterior_grad, std::abs(th.d1(r)));
  }
  rep.ok = rep.max_theta2 <= 2 + 1e-10 && rep.min_radial >= -1e-10 && rep.min_laplacian >= -1e-10 &&
           rep.max_interior_err <= 1e-10 && rep.max_exterior_grad <= 1e-10;
  return rep;
}

// ---------------------------------------------------------------- virial

VirialCutoff make_virial_cutoff(const Grid& g, double R, CutoffShape shape) {
  if (!(R > 0)) throw Error(Errc::InvalidArgument, "cutoff radius must be positive");
  double Lmin = g.lengths()[0];
  for (double L : g.lengths()) Lmin = std::min(Lmin, L);
  if (2 * R >= Lmin / 2) {
    std::ostringstream os;
    os << "2R = " << 2 * R << " does not fit inside half the box (" << Lmin / 2 << ")";
    throw Error(Errc::CutoffTooLarge, os.str());
  }
  VirialCutoff c{R, ThetaProfile(shape), {}, {}, {}, {}, {}, {}};
  c.report = check_theta(c.theta, g.dim());
  if (!c.report.ok) {
    std::ostringstream os;
    os << "cutoff constraints fail: sup theta'' = " << c.report.max_theta2 << ", inf 2 - theta'/r = "
       << c.report.min_radial << ", inf 2d - Delta phi = " << c.report.min_laplacian;
    throw Error(Errc::ConstraintViolated, os.str());
  }

  const int d = g.dim();
  RArray r2 = RArray::Zero(g.size());
  std::vector<RArray> xs;
  for (int a = 0; a < d; ++a) {
    xs.push_back(g.coord(a));
    r2 += xs.back().square();
  }
  RArray phi(g.size()), lap(g.size()), w(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double rho = std::sqrt(r2[i]) / R;
    phi[i] = R * R * c.theta.value(rho);
    w[i] = c.theta.d1_over_r(rho);
    lap[i] = c.theta.d2(rho) + (d - 1) * w[i];
  }
  c.phi = Field(g, phi.cast<cplx>());
  for (int a = 0; a < d; ++a) c.grad_phi.emplace_back(g, (w * xs[a]).cast<cplx>());
  c.laplacian_phi = Field(g, lap.cast<cplx>());
  c.bilaplacian_phi = apply_multiplier(c.laplacian_phi, RArray(-g.xi2()));
  c.trilaplacian_phi = apply_multiplier(c.bilaplacian_phi, RArray(-g.xi2()));
  for (Field* f : {&c.bilaplacian_phi, &c.trilaplacian_phi}) f->v = f->v.real().cast<cplx>();
  return c;
}

double virial_action(const Field& f, const VirialCutoff& cut) {
  if (f.grid != cut.phi.grid) throw Error(Errc::BadShape, "field and cutoff live on different grids");
  double s = 0;
  for (int a = 0; a < f.grid.dim(); ++a) {
    const Field da = derivative(f, a);
    s += (cut.grad_phi[a].v.real() * (f.v.conjugate() * da.v).imag()).sum();
  }
  return 2 * s * f.grid.cell();
}

double virial_rhs(const Field& f, const ExponentSet& e, bool nonlinear) {
  const double b = sobolev_norm_sq(f, 2);
  if (!nonlinear) return 16 * b;
  const double da = e.d * e.alpha;
  return 4 * da * energy(f, e.alpha) - 2 * (da - 8) * b;
}

VirialCheck check_virial_law(const std::vector<Snapshot>& snaps, const ExponentSet& e, const VirialCutoff& cut,
                             bool nonlinear) {
  if (snaps.size() < 3) throw Error(Errc::InvalidArgument, "need at least three snapshots");
  const Grid& g = cut.phi.grid;
  RArray r2 = RArray::Zero(g.size());
  for (int a = 0; a < g.dim(); ++a) r2 += g.coord(a).square();
  const auto outside = r2 >= cut.R * cut.R;

  VirialCheck out;
  for (const auto& s : snaps) {
    if (s.field.grid != g) throw Error(Errc::BadShape, "snapshot grid differs from the cutoff grid");
    const RArray m = s.field.v.abs2();
    const double tot = m.sum();
    const double ext = tot > 0 ? outside.select(m, 0.0).sum() / tot : 0.0;
    out.max_exterior_mass = std::max(out.max_exterior_mass, ext);
    if (!(ext < 1e-8)) {
      std::ostringstream os;
      os << "mass fraction " << ext << " outside |x| < R = " << cut.R << " at t = " << s.t;
      throw Error(Errc::PreconditionFailed, os.str());
    }
    out.t.push_back(s.t);
    out.action.push_back(virial_action(s.field, cut));
  }
  double scale = 0;
  for (std::size_t i = 1; i + 1 < snaps.size(); ++i) {
    const double h1 = out.t[i] - out.t[i - 1], h2 = out.t[i + 1] - out.t[i];
    if (!(h1 > 0 && h2 > 0)) throw Error(Errc::InvalidArgument, "snapshot times must increase");
    const double fd = -h2 / (h1 * (h1 + h2)) * out.action[i - 1] + (h2 - h1) / (h1 * h2) * out.action[i] +
                      h1 / (h2 * (h1 + h2)) * out.action[i + 1];
    out.dMdt.push_back(fd);
    out.rhs.push_back(virial_rhs(snaps[i].field, e, nonlinear));
    scale = std::max(scale, std::abs(out.rhs.back()));
  }
  double worst = 0;
  for (std::size_t i = 0; i < out.rhs.size(); ++i) worst = std::max(worst, std::abs(out.dMdt[i] - out.rhs[i]));
  out.max_defect = scale > 0 ? worst / scale : worst;
  return out;
}

double energy_trapping_slack(const TrajectoryRecord& row, double s_gs, const ExponentSet& e) {
  if (!(s_gs > 0)) throw Error(Errc::InvalidArgument, "ground-state norm must be positive");
  const double ratio = row.h_gamma_c / s_gs;
  return row.energy - 0.5 * (1 - std::pow(ratio, e.alpha)) * row.h_2 * row.h_2;
}

// ---------------------------------------------------------------- concentration

Concentration concentration_scan(const Field& f, double gamma, double a) {
  const Grid& g = f.grid;
  if (!(a > 0)) throw Error(Errc::InvalidArgument, "window radius must be positive");
  double Lmin = g.lengths()[0];
  for (double L : g.lengths()) Lmin = std::min(Lmin, L);
  if (a >= Lmin / 4) throw Error(Errc::WindowTooLarge, "window radius must stay below L/4");

  const Field lf = gamma == 0 ? f : frac_laplacian(f, gamma / 2);
  CArray w = lf.v.abs2().cast<cplx>();

  // ball around flat index 0 in minimal-image index distance
  RArray d2 = RArray::Zero(g.size());
  for (int ax = 0; ax < g.dim(); ++ax) {
    const int n = g.n()[ax];
    RArray dist(n);
    for (int j = 0; j < n; ++j) dist[j] = std::min(j, n - j) * g.h(ax);
    Eigen::Index stride = 1;
    for (int b = ax + 1; b < g.dim(); ++b) stride *= g.n()[b];
    for (Eigen::Index i = 0; i < g.size(); ++i) d2[i] += dist[(i / stride) % n] * dist[(i / stride) % n];
  }
  // boundary cells weighted by the fraction of their width inside the ball
  double h = g.h(0);
  for (int ax = 1; ax < g.dim(); ++ax) h = std::min(h, g.h(ax));
  CArray ind = ((a - d2.sqrt()) / h + 0.5).min(1.0).max(0.0).cast<cplx>();

  fft::forward_inplace(g.n(), w);
  fft::forward_inplace(g.n(), ind);
  w *= ind.conjugate();
  fft::inverse_inplace(g.n(), w);
  const RArray vals = w.real() * g.cell();

  Concentration c;
  c.value = vals.maxCoeff(&c.index);
  for (int ax = 0; ax < g.dim(); ++ax) c.center.push_back(g.coord(ax)[c.index]);
  return c;
}

double concentration_window(double T, double t) {
  if (!(T > t)) throw Error(Errc::InvalidArgument, "window needs t < T");
  return std::pow(T - t, 0.125);
}

// ---------------------------------------------------------------- limiting profile

namespace {

// value, gradient and Hessian of the trigonometric interpolant at y
struct Jet {
  cplx v;
  Eigen::VectorXcd g;
  Eigen::MatrixXcd H;
};

Jet interp_jet(const Grid& g, const CArray& F, const std::vector<double>& y) {
  const int d = g.dim();
  std::vector<Eigen::ArrayXcd> e0(d), e1(d), e2(d);
  for (int a = 0; a < d; ++a) {
    const int n = g.n()[a];
    const RArray xi = g.xi(a);
    const double arg0 = y[a] + g.lengths()[a] / 2;
    e0[a].resize(n);
    e1[a].resize(n);
    e2[a].resize(n);
    for (int k = 0; k < n; ++k) {
      cplx ph, dph, ddph;
      if (k == n / 2) {
        const double q = g.xi_nyquist(a);
        ph = std::cos(q * arg0);
        dph = -q * std::sin(q * arg0);
        ddph = -q * q * std::cos(q * arg0);
      } else {
        ph = std::polar(1.0, xi[k] * arg0);
        dph = cplx(0, xi[k]) * ph;
        ddph = -xi[k] * xi[k] * ph;
      }
      e0[a][k] = ph;
      e1[a][k] = dph;
      e2[a][k] = ddph;
    }
  }
  Jet j{0, Eigen::VectorXcd::Zero(d), Eigen::MatrixXcd::Zero(d, d)};
  std::vector<Eigen::Index> stride(d);
  Eigen::Index s = 1;
  for (int a = d - 1; a >= 0; --a) {
    stride[a] = s;
    s *= g.n()[a];
  }
  std::vector<int> idx(d);
  for (Eigen::Index i = 0; i < F.size(); ++i) {
    for (int a = 0; a < d; ++a) idx[a] = static_cast<int>((i / stride[a]) % g.n()[a]);
    cplx base = F[i];
    for (int a = 0; a < d; ++a) base *= e0[a][idx[a]];
    if (base == cplx(0)) continue;
    j.v += base;
    for (int a = 0; a < d; ++a) {
      const cplx r1 = e1[a][idx[a]] / e0[a][idx[a]];
      j.g[a] += base * r1;
      j.H(a, a) += base * e2[a][idx[a]] / e0[a][idx[a]];
      for (int b = a + 1; b < d; ++b) {
        const cplx m = base * r1 * e1[b][idx[b]] / e0[b][idx[b]];
        j.H(a, b) += m;
        j.H(b, a) += m;
      }
    }
  }
  return j;
}

}  // namespace

std::vector<double> peak_location(const Field& f) {
  const Grid& g = f.grid;
  const int d = g.dim();
  Eigen::Index imax;
  if (f.v.abs2().maxCoeff(&imax) == 0) throw Error(Errc::ZeroField, "zero field has no peak");
  std::vector<double> y(d);
  for (int a = 0; a < d; ++a) y[a] = g.coord(a)[imax];

  const CArray F = spectrum(f) / static_cast<double>(g.size());
  for (int it = 0; it < 30; ++it) {
    const Jet j = interp_jet(g, F, y);
    // |f|^2 / 2: gradient Re(conj f grad f), Hessian Re(grad conj f grad f^T + conj f Hess f)
    Eigen::VectorXd grad(d);
    Eigen::MatrixXd H(d, d);
    for (int a = 0; a < d; ++a) {
      grad[a] = std::real(std::conj(j.v) * j.g[a]);
      for (int b = 0; b < d; ++b) H(a, b) = std::real(std::conj(j.g[a]) * j.g[b] + std::conj(j.v) * j.H(a, b));
    }
    const Eigen::LDLT<Eigen::MatrixXd> ld(H);
    if (!(ld.vectorD().array() < 0).all()) break;
    Eigen::VectorXd step = -ld.solve(grad);
    bool small = true;
    for (int a = 0; a < d; ++a) {
      step[a] = std::clamp(step[a], -g.h(a), g.h(a));
      y[a] += step[a];
      small = small && std::abs(step[a]) < 1e-14 * std::max(1.0, g.lengths()[a]);
    }
    if (small) break;
  }
  return y;
}

ProfileComparison limiting_profile_compare(const Field& f, const Field& Q, const ExponentSet& e) {
  if (f.grid.dim() != Q.grid.dim() || Q.grid.dim() != e.d) throw Error(Errc::BadShape, "dimension mismatch");
  const double hf = sobolev_norm(f, 2), hq = sobolev_norm(Q, 2);
  if (!(hf > 0)) throw Error(Errc::ZeroField, "field has zero H2 norm");
  if (!(hq > 0)) throw Error(Errc::ZeroField, "reference profile has zero H2 norm");

  ProfileComparison c;
  c.lam = std::pow(hq / hf, 1 / (2 - e.gamma_c));
  c.shift = peak_location(f);
  Field v = sample_affine(f, Q.grid, c.lam, c.shift);
  v.v *= std::pow(c.lam, 4 / e.alpha);
  const cplx ip = (v.v * Q.v.conjugate()).sum();
  c.phase = ip == cplx(0) ? 0.0 : -std::arg(ip);
  v.v *= std::polar(1.0, c.phase);
  const Field diff = v - Q;
  c.dist_gamma_c = sobolev_norm(diff, e.gamma_c) / sobolev_norm(Q, e.gamma_c);
  c.dist_2 = sobolev_norm(diff, 2) / hq;
  c.aligned = std::move(v);
  return c;
}

}  // namespace nl4s
