#include "nl4s/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "nl4s/errors.hpp"
#include "nl4s/fft.hpp"

namespace nl4s {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::Index stride_of(const std::vector<int>& n, int axis) {
  Eigen::Index s = 1;
  for (int b = axis + 1; b < static_cast<int>(n.size()); ++b) s *= n[b];
  return s;
}

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid != b.grid) throw Error(Errc::BadShape, "fields live on different grids");
}

// Apply fn to every 1-D line along `axis`; fn maps a length-N line to a line of
// length n_out. Returns the new flat array and shape.
template <class Fn>
CArray map_lines(const CArray& v, const std::vector<int>& n, int axis, int n_out, Fn&& fn) {
  const Eigen::Index stride = stride_of(n, axis);
  const Eigen::Index len = n[axis];
  const Eigen::Index outer = v.size() / (len * stride);
  CArray out(outer * n_out * stride);
  CArray line(len);
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index i = 0; i < stride; ++i) {
      const Eigen::Index base = o * len * stride + i;
      for (Eigen::Index j = 0; j < len; ++j) line[j] = v[base + j * stride];
      CArray res = fn(line);
      const Eigen::Index obase = o * n_out * stride + i;
      for (Eigen::Index j = 0; j < n_out; ++j) out[obase + j * stride] = res[j];
    }
  }
  return out;
}

// exp(i pi r), r reduced mod 2 in extended precision
cplx unit_phase(long double r) {
  long double red = std::fmod(r, 2.0L);
  double th = static_cast<double>(kPi * red);
  return {std::cos(th), std::sin(th)};
}

// Evaluates the trigonometric interpolant of a length-N periodic line
// (samples at y = j L/N) at y0 + j*delta, j < M, via Bluestein's chirp-z.
// The Nyquist mode is split symmetrically between +-N/2.
class ChirpInterp {
 public:
  ChirpInterp(int N, double L, double y0, double delta, int M = 0) : N_(N), M_(M > 0 ? M : N), P_(1) {
    while (P_ < N_ + M_ + 1) P_ *= 2;
    const long double q = static_cast<long double>(delta) / L;  // z = exp(2 pi i q)
    const long double y0L = static_cast<long double>(y0) / L;
    pre_.resize(N + 1);
    for (int m = 0; m <= N; ++m) {
      const long double k = m - N / 2;
      const double w = (m == 0 || m == N) ? 0.5 : 1.0;
      pre_[m] = w / N * unit_phase(2.0L * k * y0L) * unit_phase(q * m * m);
    }
    post_.resize(M_);
    for (int j = 0; j < M_; ++j) post_[j] = unit_phase(q * j * j - q * j * N);
    CArray b = CArray::Zero(P_);
    for (int n = -N; n < M_; ++n) b[(n + P_) % P_] = unit_phase(-q * n * n);
    bhat_ = fft::forward({P_}, b);
  }

  CArray operator()(const CArray& line) const {
    CArray F = fft::forward({N_}, line);
    CArray a = CArray::Zero(P_);
    for (int m = 0; m <= N_; ++m) {
      const int k = m - N_ / 2;
      a[m] = F[(k + N_) % N_] * pre_[m];
    }
    fft::forward_inplace({P_}, a);
    a *= bhat_;
    fft::inverse_inplace({P_}, a);
    CArray out(M_);
    for (int j = 0; j < M_; ++j) out[j] = post_[j] * a[j];
    return out;
  }

 private:
  int N_, M_, P_;
  CArray pre_, post_, bhat_;
};

}  // namespace

// ---------------------------------------------------------------- Grid

Grid::Grid(std::vector<int> n, std::vector<double> lengths) : n_(std::move(n)), len_(std::move(lengths)) {
  size_ = 1;
  cell_ = 1;
  for (std::size_t a = 0; a < n_.size(); ++a) {
    size_ *= n_[a];
    cell_ *= len_[a] / n_[a];
  }
  auto xi2 = std::make_shared<RArray>(RArray::Zero(size_));
  for (int a = 0; a < dim(); ++a) *xi2 += xi_flat(a).square();
  xi_abs_ = std::make_shared<const RArray>(xi2->sqrt());
  xi2_ = xi2;
}

double Grid::dxi(int axis) const { return 2.0 * kPi / len_[axis]; }

double Grid::volume() const {
  double v = 1;
  for (double l : len_) v *= l;
  return v;
}

double Grid::xi_nyquist(int axis) const { return kPi * n_[axis] / len_[axis]; }

RArray Grid::x(int axis) const {
  return RArray::LinSpaced(n_[axis], 0, n_[axis] - 1) * h(axis) - len_[axis] / 2.0;
}

RArray Grid::xi(int axis) const {
  const int N = n_[axis];
  RArray k(N);
  for (int j = 0; j < N; ++j) k[j] = j < N / 2 ? j : j - N;
  return k * dxi(axis);
}

namespace {
RArray expand(const Grid& g, int axis, const RArray& t) {
  const Eigen::Index stride = stride_of(g.n(), axis);
  const Eigen::Index len = g.n()[axis];
  RArray out(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) out[i] = t[(i / stride) % len];
  return out;
}
}  // namespace

RArray Grid::coord(int axis) const { return expand(*this, axis, x(axis)); }
RArray Grid::xi_flat(int axis) const { return expand(*this, axis, xi(axis)); }

Grid make_grid(int d, const std::vector<int>& n_points, const std::vector<double>& lengths) {
  if (d < 1 || static_cast<int>(n_points.size()) != d || static_cast<int>(lengths.size()) != d)
    throw Error(Errc::BadShape, "axis count does not match dimension");
  for (int a = 0; a < d; ++a) {
    if (!is_pow2(n_points[a]) || n_points[a] < 8) {
      std::ostringstream os;
      os << "N = " << n_points[a] << " on axis " << a << " is not a power of two >= 8";
      throw Error(Errc::BadShape, os.str());
    }
    if (!(lengths[a] > 0) || !std::isfinite(lengths[a])) throw Error(Errc::BadShape, "box length must be positive");
  }
  return Grid(n_points, lengths);
}

// ---------------------------------------------------------------- Field

Field::Field(Grid g, CArray values) : grid(std::move(g)), v(std::move(values)) {
  if (v.size() != grid.size()) throw Error(Errc::BadShape, "value count does not match grid");
}

Field& Field::operator+=(const Field& o) {
  require_same_grid(*this, o);
  v += o.v;
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same_grid(*this, o);
  v -= o.v;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx c, Field a) { return a *= c; }

CArray spectrum(const Field& f) { return fft::forward(f.grid.n(), f.v); }

Field from_spectrum(const Grid& g, CArray F) {
  fft::inverse_inplace(g.n(), F);
  return Field(g, std::move(F));
}

// ---------------------------------------------------------------- multipliers

RArray radial_symbol(const Grid& g, const RadialSymbol& m) {
  const RArray& k = g.xi_abs();
  RArray s(k.size());
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    s[i] = m(k[i]);
    if (!std::isfinite(s[i])) {
      std::ostringstream os;
      os << "symbol undefined at |xi| = " << k[i];
      throw Error(Errc::SingularSymbol, os.str());
    }
  }
  return s;
}

RArray power_symbol(const Grid& g, double p) {
  if (p == 0) return RArray::Ones(g.size());
  if (p == 2) return g.xi2();
  if (p == 4) return g.xi2().square();
  const RArray& k = g.xi_abs();
  return (k > 0).select(k.pow(p), 0.0);
}

Field apply_multiplier(const Field& f, const RadialSymbol& m) { return apply_multiplier(f, radial_symbol(f.grid, m)); }

Field apply_multiplier(const Field& f, const RArray& symbol) {
  CArray F = spectrum(f);
  F *= symbol.cast<cplx>();
  return from_spectrum(f.grid, std::move(F));
}

Field apply_multiplier(const Field& f, const CArray& symbol) {
  CArray F = spectrum(f);
  F *= symbol;
  return from_spectrum(f.grid, std::move(F));
}

Field derivative(const Field& f, int axis) {
  CArray sym = f.grid.xi_flat(axis).cast<cplx>() * cplx(0, 1);
  return apply_multiplier(f, sym);
}

Field frac_laplacian(const Field& f, double gamma) { return apply_multiplier(f, power_symbol(f.grid, 2 * gamma)); }

// ---------------------------------------------------------------- norms

double sobolev_norm_sq(const Field& f, double gamma) {
  if (gamma < 0) throw Error(Errc::InvalidArgument, "negative Sobolev index");
  const CArray F = spectrum(f);
  return (power_symbol(f.grid, 2 * gamma) * F.abs2()).sum() * f.grid.cell() / f.grid.size();
}

double sobolev_norm(const Field& f, double gamma) { return std::sqrt(sobolev_norm_sq(f, gamma)); }

double mass(const Field& f) { return f.v.abs2().sum() * f.grid.cell(); }

double lebesgue_norm(const Field& f, double q) {
  if (!(q >= 1)) throw Error(Errc::InvalidArgument, "Lebesgue exponent must be >= 1");
  if (f.v.size() == 0) return 0;
  const RArray m = f.v.abs();
  if (std::isinf(q)) return m.maxCoeff();
  const double mx = m.maxCoeff();
  if (mx == 0) return 0;
  // scale out the max to keep large q from overflowing
  return mx * std::pow((m / mx).pow(q).sum() * f.grid.cell(), 1.0 / q);
}

double sobolev_norm_sq_rd(const Field& f, double gamma, const LowMode& lm) {
  if (f.grid.dim() != 1 || gamma == 0) return sobolev_norm_sq(f, gamma);
  const CArray F = spectrum(f);
  const double h = f.grid.h(0), dxi = f.grid.dxi(0);
  double val = (power_symbol(f.grid, 2 * gamma) * F.abs2()).sum() * f.grid.cell() / f.grid.size();

  // Riemann sum over k != 0 of c |xi|^beta exceeds the integral by
  // 2 zeta(-beta) c dxi^(1+beta).
  auto corr = [&](double c, double beta) {
    if (c == 0) return 0.0;
    if (beta <= -1) throw Error(Errc::InvalidArgument, "norm diverges at xi = 0 for this low-mode model");
    return 2.0 * std::riemann_zeta(-beta) * c * std::pow(dxi, 1.0 + beta);
  };
  double total = 0;
  if (lm.singular()) {
    cplx b = h * F[0];
    b += 2.0 * std::riemann_zeta(lm.s) * lm.a * std::pow(dxi, -lm.s);
    total += corr(std::norm(lm.a), 2 * gamma - 2 * lm.s);
    total += corr(2.0 * std::real(lm.a * std::conj(b)), 2 * gamma - lm.s);
    total += corr(std::norm(b), 2 * gamma);
  } else {
    // |f^|^2 = sum_m c_m xi^(2m) near the origin, c_m from the first modes
    const Eigen::Index N = f.grid.n()[0];
    const int M = 4;
    Eigen::Matrix4d V;
    Eigen::Vector4d y;
    for (int k = 0; k < M; ++k) {
      const double t = (k * dxi) * (k * dxi);
      for (int m = 0; m < M; ++m) V(k, m) = std::pow(t, m);
      y[k] = k == 0 ? h * h * std::norm(F[0]) : 0.5 * h * h * (std::norm(F[k]) + std::norm(F[N - k]));
    }
    const Eigen::Vector4d c = V.colPivHouseholderQr().solve(y);
    for (int m = 0; m < M; ++m) total += corr(c[m], 2 * gamma + 2 * m);
  }
  return val - total / (2 * kPi);
}

double sobolev_norm_rd(const Field& f, double gamma, const LowMode& lm) {
  return std::sqrt(std::max(0.0, sobolev_norm_sq_rd(f, gamma, lm)));
}

double energy(const Field& f, double alpha) {
  const double l = lebesgue_norm(f, alpha + 2);
  return 0.5 * sobolev_norm_sq(f, 2) - std::pow(l, alpha + 2) / (alpha + 2);
}

FunctionalReport functionals(const Field& f, const ExponentSet& e, const LowMode& lm) {
  FunctionalReport r;
  r.mass = mass(f);
  r.sobolev_gamma_c = sobolev_norm_rd(f, e.gamma_c, lm);
  r.sobolev_2 = sobolev_norm(f, 2);
  r.lebesgue_alpha2 = lebesgue_norm(f, e.alpha + 2);
  r.lebesgue_alpha_c = lebesgue_norm(f, e.alpha_c);
  r.energy = 0.5 * r.sobolev_2 * r.sobolev_2 - std::pow(r.lebesgue_alpha2, e.alpha + 2) / (e.alpha + 2);
  const double num = std::pow(r.lebesgue_alpha2, e.alpha + 2);
  const double h2sq = r.sobolev_2 * r.sobolev_2;
  if (num > 0 && h2sq > 0) {
    if (r.sobolev_gamma_c > 0) r.h_value = num / (std::pow(r.sobolev_gamma_c, e.alpha) * h2sq);
    if (r.lebesgue_alpha_c > 0) r.k_value = num / (std::pow(r.lebesgue_alpha_c, e.alpha) * h2sq);
  }
  return r;
}

// ---------------------------------------------------------------- resampling

Field sample_affine(const Field& f, const Grid& target, double lam, const std::vector<double>& x0) {
  const Grid& g = f.grid;
  if (!(lam > 0)) throw Error(Errc::InvalidArgument, "scale factor must be positive");
  if (target.dim() != g.dim()) throw Error(Errc::BadShape, "dimension mismatch");
  if (!x0.empty() && static_cast<int>(x0.size()) != g.dim()) throw Error(Errc::BadShape, "shift has wrong dimension");
  CArray v = f.v;
  std::vector<int> shape = g.n();
  for (int a = 0; a < g.dim(); ++a) {
    const double L = g.lengths()[a];
    const double start = -lam * target.lengths()[a] / 2 + (x0.empty() ? 0.0 : x0[a]);
    ChirpInterp ci(g.n()[a], L, start + L / 2, lam * target.h(a), target.n()[a]);
    v = map_lines(v, shape, a, target.n()[a], ci);
    shape[a] = target.n()[a];
  }
  return Field(target, std::move(v));
}

Field resample_affine(const Field& f, double lam, const std::vector<double>& x0) {
  return sample_affine(f, f.grid, lam, x0);
}

Field rescale(const Field& f, double mu, double lam) {
  if (!(mu > 0) || !(lam > 0)) throw Error(Errc::InvalidArgument, "mu and lambda must be positive");
  if (lam > 1) {
    const CArray F = spectrum(f);
    const RArray p = F.abs2();
    Eigen::Array<bool, Eigen::Dynamic, 1> out = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(p.size(), false);
    for (int a = 0; a < f.grid.dim(); ++a)
      out = out || (f.grid.xi_flat(a).abs() > f.grid.xi_nyquist(a) / lam);
    const double tail = out.select(p, 0.0).sum();
    const double tot = p.sum();
    if (tot > 0 && tail > 1e-8 * tot) {
      std::ostringstream os;
      os << "lambda = " << lam << " pushes " << tail / tot << " of the spectrum past Nyquist";
      throw Error(Errc::Underresolved, os.str());
    }
  }
  if (mu == 1 && lam == 1) return f;
  Field g = resample_affine(f, lam, {});
  g.v *= mu;
  if (lam > 1) {
    // f is taken as zero outside its box, not periodic
    for (int a = 0; a < g.grid.dim(); ++a) {
      const RArray x = g.grid.coord(a);
      const double half = g.grid.lengths()[a] / 2;
      g.v = ((lam * x).abs() > half).select(CArray::Zero(g.v.size()), g.v);
    }
  }
  return g;
}

Field resample(const Field& f, const Grid& target) {
  if (target.dim() != f.grid.dim()) throw Error(Errc::BadShape, "dimension mismatch");
  for (int a = 0; a < target.dim(); ++a)
    if (target.lengths()[a] != f.grid.lengths()[a]) throw Error(Errc::BadShape, "resample keeps the box length fixed");
  CArray v = f.v;
  std::vector<int> shape = f.grid.n();
  for (int a = 0; a < target.dim(); ++a) {
    const int N = shape[a], M = target.n()[a];
    auto pad = [N, M](const CArray& line) {
      CArray F = fft::forward({N}, line);
      CArray G = CArray::Zero(M);
      const int K = std::min(N, M) / 2;
      for (int k = -K + 1; k < K; ++k) G[(k + M) % M] = F[(k + N) % N];
      const cplx nyq = F[N / 2];
      if (M > N) {
        G[M - K] += 0.5 * nyq;
        G[K] += 0.5 * nyq;
      } else if (M == N) {
        G[M / 2] = nyq;
      }
      // +-K alias onto the coarse Nyquist slot
      else {
        G[M / 2] = F[K] + F[N - K];
      }
      G *= static_cast<double>(M) / N;
      fft::inverse_inplace({M}, G);
      return G;
    };
    v = map_lines(v, shape, a, M, pad);
    shape[a] = M;
  }
  return Field(target, std::move(v));
}

Field normalize_to_unit(const Field& f, const ExponentSet& e) {
  if (f.v.abs().maxCoeff() == 0) throw Error(Errc::ZeroField, "cannot normalize the zero field");
  const int d = f.grid.dim();
  Field g = f;
  for (int it = 0; it < 8; ++it) {
    const double A = sobolev_norm_rd(g, e.gamma_c), B = sobolev_norm(g, 2);
    if (!(A > 0) || !(B > 0)) throw Error(Errc::ZeroField, "field has vanishing homogeneous norms");
    if (std::abs(A - 1) < 1e-13 && std::abs(B - 1) < 1e-13) break;
    // mu^2 lam^(2gc-d) A^2 = 1 = mu^2 lam^(4-d) B^2
    const double lam = std::pow(A / B, 1.0 / (2 - e.gamma_c));
    const double mu = std::pow(lam, d / 2.0 - e.gamma_c) / A;
    g = rescale(g, mu, lam);
  }
  return g;
}

Field translate(const Field& f, const std::vector<double>& shift) {
  if (static_cast<int>(shift.size()) != f.grid.dim()) throw Error(Errc::BadShape, "shift has wrong dimension");
  RArray phase = RArray::Zero(f.grid.size());
  for (int a = 0; a < f.grid.dim(); ++a)
    if (shift[a] != 0) phase -= f.grid.xi_flat(a) * shift[a];
  CArray sym(phase.size());
  for (Eigen::Index i = 0; i < phase.size(); ++i) sym[i] = std::polar(1.0, phase[i]);
  return apply_multiplier(f, sym);
}

double pairing_residual(const Field& f, double gamma) {
  const Grid& g = f.grid;
  CArray xgrad = CArray::Zero(g.size());
  for (int a = 0; a < g.dim(); ++a) xgrad += g.coord(a).cast<cplx>() * derivative(f, a).v;
  const Field lf = frac_laplacian(f, gamma);
  const double lhs = (lf.v * xgrad.conjugate()).real().sum() * g.cell();
  return lhs - (gamma - g.dim() / 2.0) * sobolev_norm_sq(f, gamma);
}

Field gaussian(const Grid& g, double amplitude, double width, const std::vector<double>& center,
               const std::vector<double>& velocity) {
  RArray r2 = RArray::Zero(g.size());
  RArray ph = RArray::Zero(g.size());
  for (int a = 0; a < g.dim(); ++a) {
    const RArray x = g.coord(a);
    const double c = center.empty() ? 0.0 : center[a];
    r2 += (x - c).square();
    if (!velocity.empty()) ph += velocity[a] * x;
  }
  CArray v(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i)
    v[i] = std::polar(amplitude * std::exp(-r2[i] / (2 * width * width)), ph[i]);
  return Field(g, std::move(v));
}

}  // namespace nl4s
