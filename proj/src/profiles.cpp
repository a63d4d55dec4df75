#include "nl4s/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nl4s/errors.hpp"
#include "nl4s/parallel.hpp"

namespace nl4s {

namespace {

RArray gaussian_symbol(const Grid& g, double w) { return (-0.5 * w * w * g.xi2()).exp(); }

double min_image(const Grid& g, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (int ax = 0; ax < g.dim(); ++ax) {
    const double L = g.lengths()[ax];
    double dx = std::fmod(std::abs(a[ax] - b[ax]), L);
    dx = std::min(dx, L - dx);
    s += dx * dx;
  }
  return std::sqrt(s);
}

double median(std::vector<double>& a) {
  const std::size_t m = a.size() / 2;
  std::nth_element(a.begin(), a.begin() + m, a.end());
  const double hi = a[m];
  if (a.size() % 2) return hi;
  return 0.5 * (hi + *std::max_element(a.begin(), a.begin() + m));
}

std::vector<double> neg(std::vector<double> v) {
  for (double& x : v) x = -x;
  return v;
}

double hmin(const Grid& g) {
  double h = g.h(0);
  for (int a = 1; a < g.dim(); ++a) h = std::min(h, g.h(a));
  return h;
}

// grid argmax of |f| smoothed by a Gaussian of width w
std::vector<double> detect_shift(const Field& f, const RArray& mollifier) {
  const Grid& g = f.grid;
  const Field m = apply_multiplier(Field(g, f.v.abs().cast<cplx>()), mollifier);
  Eigen::Index imax;
  m.v.real().maxCoeff(&imax);
  std::vector<double> x(g.dim());
  for (int a = 0; a < g.dim(); ++a) x[a] = g.coord(a)[imax];
  return x;
}

}  // namespace

std::vector<Field> synth_sequence(const Grid& g, const std::vector<Field>& profiles, const ShiftLaw& shifts,
                                  double noise_amp, int count, std::uint64_t seed, double noise_width) {
  if (count < 1) throw Error(Errc::InvalidArgument, "count must be positive");
  if (noise_amp < 0) throw Error(Errc::InvalidArgument, "noise amplitude must be nonnegative");
  if (noise_width < 0) throw Error(Errc::InvalidArgument, "noise width must be nonnegative");
  for (const auto& p : profiles)
    if (p.grid != g) throw Error(Errc::BadShape, "profile lives on a different grid");

  std::vector<Field> seq;
  const RArray smooth = gaussian_symbol(g, noise_width > 0 ? noise_width : 2 * hmin(g));
  for (int n = 1; n <= count; ++n) {
    Field v(g);
    for (int j = 0; j < static_cast<int>(profiles.size()); ++j) {
      const std::vector<double> x = shifts(j, n);
      if (static_cast<int>(x.size()) != g.dim()) throw Error(Errc::BadShape, "shift law returned wrong dimension");
      for (int a = 0; a < g.dim(); ++a)
        if (!(std::abs(x[a]) <= g.lengths()[a] / 2)) {
          std::ostringstream os;
          os << "shift of profile " << j << " at n = " << n << " leaves the box";
          throw Error(Errc::ShiftOutOfBox, os.str());
        }
      v += translate(profiles[j], x);
    }
    if (noise_amp > 0) {
      std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(n)};
      std::mt19937_64 rng(ss);
      std::normal_distribution<double> N01;
      Field z(g);
      for (Eigen::Index i = 0; i < g.size(); ++i) z.v[i] = cplx(N01(rng), N01(rng));
      z = apply_multiplier(z, smooth);
      const double mx = z.v.abs().maxCoeff();
      if (mx > 0) v.v += (noise_amp / mx) * z.v;
    }
    seq.push_back(std::move(v));
  }
  return seq;
}

ProfileDecomposition decompose(const std::vector<Field>& seq, const ExponentSet& e, const DecomposeOptions& o) {
  if (seq.size() < 8) throw Error(Errc::InvalidArgument, "sequence needs at least 8 elements");
  const Grid& g = seq.front().grid;
  for (const auto& f : seq)
    if (f.grid != g) throw Error(Errc::BadShape, "sequence elements live on different grids");
  const double q = o.q > 0 ? o.q : e.alpha + 2;
  const double q_hi = e.two_star_high.is_inf() ? std::numeric_limits<double>::infinity() : 2 + e.two_star_high.value();
  if (!(q > e.alpha_c && q < q_hi)) {
    std::ostringstream os;
    os << "q = " << q << " outside (" << e.alpha_c << ", " << q_hi << ")";
    throw Error(Errc::InvalidArgument, os.str());
  }
  if (o.l_max < 0) throw Error(Errc::InvalidArgument, "l_max must be >= 0");

  const int count = static_cast<int>(seq.size());
  ProfileDecomposition dec;
  dec.tail_begin = count / 2;
  const double w = o.mollifier > 0 ? o.mollifier : 2 * hmin(g);
  dec.separation = o.separation > 0 ? o.separation : 8 * w;
  const RArray moll = gaussian_symbol(g, w);
  const int tail = count - dec.tail_begin;

  dec.residuals = seq;
  for (int l = 0; l < o.l_max; ++l) {
    if (lebesgue_norm(dec.residuals.back(), q) < o.tol) break;

    std::vector<std::vector<double>> x(count);
    parallel_for(count, [&](std::size_t n) { x[n] = detect_shift(dec.residuals[n], moll); });

    for (std::size_t k = 0; k < dec.shifts.size(); ++k) {
      int close = 0;
      for (int n = dec.tail_begin; n < count; ++n)
        if (min_image(g, x[n], dec.shifts[k][n]) < dec.separation) ++close;
      if (2 * close > tail) {
        std::ostringstream os;
        os << "profile " << l << " collides with profile " << k << " on " << close << " of " << tail
           << " tail indices";
        throw Error(Errc::NoSeparation, os.str());
      }
    }

    std::vector<Field> aligned(count);
    parallel_for(tail, [&](std::size_t i) {
      const int n = dec.tail_begin + static_cast<int>(i);
      aligned[n] = translate(dec.residuals[n], neg(x[n]));
    });
    // pointwise median of the aligned tail, real and imaginary parts apart;
    // other profiles cross any fixed point on only a few tail indices
    Field V(g);
    parallel_for(static_cast<std::size_t>(g.size()), [&](std::size_t p) {
      std::vector<double> re(tail), im(tail);
      for (int i = 0; i < tail; ++i) {
        re[i] = aligned[dec.tail_begin + i].v[p].real();
        im[i] = aligned[dec.tail_begin + i].v[p].imag();
      }
      V.v[p] = cplx(median(re), median(im));
    });

    parallel_for(count, [&](std::size_t n) { dec.residuals[n] -= translate(V, x[n]); });
    dec.profiles.push_back(std::move(V));
    dec.shifts.push_back(std::move(x));
  }
  dec.residual_lq = lebesgue_norm(dec.residuals.back(), q);
  dec.defect_gamma_c = pythagorean_defect(dec, seq, e.gamma_c);
  dec.defect_2 = pythagorean_defect(dec, seq, 2);
  return dec;
}

std::vector<double> pythagorean_defects_by_index(const ProfileDecomposition& dec, const std::vector<Field>& seq,
                                                 double gamma) {
  if (dec.residuals.size() != seq.size()) throw Error(Errc::BadShape, "decomposition does not match the sequence");
  double sum_p = 0;
  for (const auto& V : dec.profiles) sum_p += sobolev_norm_sq(V, gamma);
  std::vector<double> out;
  for (std::size_t n = dec.tail_begin; n < seq.size(); ++n) {
    const double vn = sobolev_norm_sq(seq[n], gamma);
    const double rn = sobolev_norm_sq(dec.residuals[n], gamma);
    out.push_back(vn > 0 ? std::abs(vn - sum_p - rn) / vn : std::abs(sum_p + rn));
  }
  return out;
}

double pythagorean_defect(const ProfileDecomposition& dec, const std::vector<Field>& seq, double gamma) {
  double m = 0;
  for (double v : pythagorean_defects_by_index(dec, seq, gamma)) m = std::max(m, v);
  return m;
}

double min_tail_separation(const ProfileDecomposition& dec, const Grid& g, int j, int k) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t n = dec.tail_begin; n < dec.shifts[j].size(); ++n)
    m = std::min(m, min_image(g, dec.shifts[j][n], dec.shifts[k][n]));
  return m;
}

CompactnessResult compactness_extract(const std::vector<Field>& seq, double m, double M, double s_gs,
                                      const ExponentSet& e, const DecomposeOptions& opts) {
  if (!(m > 0 && M > 0 && s_gs > 0)) throw Error(Errc::InvalidArgument, "m, M and s_gs must be positive");
  if (seq.size() < 8) throw Error(Errc::InvalidArgument, "sequence needs at least 8 elements");
  double h2max = 0, lqmax = 0;
  for (std::size_t n = seq.size() / 2; n < seq.size(); ++n) {
    h2max = std::max(h2max, sobolev_norm(seq[n], 2));
    lqmax = std::max(lqmax, lebesgue_norm(seq[n], e.alpha + 2));
  }
  if (h2max > M * (1 + 1e-6)) {
    std::ostringstream os;
    os << "tail H2 norm " << h2max << " exceeds M = " << M;
    throw Error(Errc::PreconditionFailed, os.str());
  }
  if (lqmax < m * (1 - 1e-6)) {
    std::ostringstream os;
    os << "tail L^(alpha+2) norm " << lqmax << " stays below m = " << m;
    throw Error(Errc::PreconditionFailed, os.str());
  }

  CompactnessResult r;
  r.decomposition = decompose(seq, e, opts);
  if (r.decomposition.profiles.empty()) throw Error(Errc::PreconditionFailed, "no profile extracted");
  double best = -1;
  for (const auto& V : r.decomposition.profiles) {
    const double nv = sobolev_norm_rd(V, e.gamma_c);
    if (nv > best) {
      best = nv;
      r.profile = V;
    }
  }
  r.norm_gamma_c = best;
  r.bound = 2 / (e.alpha + 2) * std::pow(m, e.alpha + 2) / (M * M) * std::pow(s_gs, e.alpha);
  r.ratio = std::pow(best, e.alpha) / r.bound;
  return r;
}

}  // namespace nl4s
