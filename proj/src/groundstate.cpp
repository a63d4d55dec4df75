#include "nl4s/groundstate.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nl4s/errors.hpp"
#include "nl4s/fft.hpp"
#include "nl4s/parallel.hpp"

namespace nl4s {

const char* equation_name(Equation e) { return e == Equation::Sobolev ? "sobolev" : "lebesgue"; }

namespace {

double rel_gap(double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  return m == 0 ? 0.0 : std::abs(a - b) / m;
}

// move the |Q| peak to the box center by an integer roll, then rotate the
// phase so the peak value is real positive
void fix_gauge(const Grid& g, CArray& v) {
  Eigen::Index imax;
  v.abs2().maxCoeff(&imax);
  const int d = g.dim();
  std::vector<Eigen::Index> stride(d), shift(d);
  Eigen::Index s = 1;
  for (int a = d - 1; a >= 0; --a) {
    stride[a] = s;
    s *= g.n()[a];
  }
  bool moved = false;
  for (int a = 0; a < d; ++a) {
    const Eigen::Index ia = (imax / stride[a]) % g.n()[a];
    shift[a] = g.n()[a] / 2 - ia;
    moved = moved || shift[a] != 0;
  }
  if (moved) {
    CArray out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      Eigen::Index j = 0;
      for (int a = 0; a < d; ++a) {
        const Eigen::Index n = g.n()[a];
        const Eigen::Index ia = (i / stride[a]) % n;
        j += ((ia + shift[a]) % n + n) % n * stride[a];
      }
      out[j] = v[i];
    }
    v.swap(out);
    v.abs2().maxCoeff(&imax);
  }
  const cplx peak = v[imax];
  if (std::abs(peak) > 0) v *= std::conj(peak) / std::abs(peak);
}

Field initial_guess(const Grid& g, const GroundStateOptions& o) {
  if (o.initial) {
    if (o.initial->grid != g) throw Error(Errc::BadShape, "initial guess lives on a different grid");
    return *o.initial;
  }
  double w = o.width > 0 ? o.width : g.lengths()[0] / 10.0;
  if (o.seed != 0) {
    std::mt19937_64 rng(o.seed);
    w *= 0.8 + 0.4 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
  return gaussian(g, o.amplitude, w);
}

struct Problem {
  RArray symbol;                          // L on the grid, Sobolev/Lebesgue with shift
  RArray residual_symbol;                 // operator in the unshifted equation
  std::function<CArray(const CArray&)> nonlinear;   // enters the iteration
  std::function<CArray(const CArray&)> residual_nl; // enters the residual
  bool skip_zero = false;                 // symbol vanishes at xi = 0
  bool zeta = false;
  double s = 0;                           // zero-mode singularity exponent
  double rho = 1;
  bool lebesgue = false;
};

struct IterState {
  CArray q;
  double M = 0;
  double residual = 0;
  double step = 0;
  cplx n0 = 0;  // DFT zero mode of the nonlinear term
};

GroundStateResult petviashvili(const Grid& g, const Problem& P, const GroundStateOptions& o) {
  const auto& dims = g.n();
  const double scale = g.cell() / g.size();
  CArray q = initial_guess(g, o).v;
  if (q.abs().maxCoeff() == 0) throw Error(Errc::NoConvergence, "zero initial guess is a trivial fixed point");

  GroundStateResult res;
  double dxi_s = 0, zfac = 0;
  if (P.zeta) {
    dxi_s = std::pow(g.dxi(0), -P.s);
    zfac = -2.0 * std::riemann_zeta(P.s);
  }

  RArray inv = P.symbol.inverse();
  if (P.skip_zero) inv[0] = 0;

  const double tol = o.tol > 0 ? o.tol : (P.s == 0 && !P.lebesgue ? 1e-10 : 1e-8);
  IterState st;
  int it = 0;
  for (; it < o.max_iter; ++it) {
    CArray Nq = P.nonlinear(q);
    CArray Qh = fft::forward(dims, q);
    CArray Nh = fft::forward(dims, Nq);
    double num = (P.symbol * Qh.abs2()).sum();
    double den = (Nh * Qh.conjugate()).real().sum();
    if (P.skip_zero) den -= (Nh[0] * std::conj(Qh[0])).real();
    if (!(den > 0) || !std::isfinite(num)) {
      if (q.abs().maxCoeff() == 0) throw Error(Errc::NoConvergence, "iterate collapsed to zero");
      std::ostringstream os;
      os << "stabilizer undefined at iteration " << it << " (<N(Q),Q> = " << den << ")";
      throw Error(Errc::DivergedIterate, os.str());
    }
    const double M = num / den;
    const double Mr = std::pow(M, P.rho);
    CArray next = Mr * Nh * inv.cast<cplx>();
    if (P.skip_zero) next[0] = P.zeta ? Mr * zfac * Nh[0] * dxi_s : cplx(0);
    fft::inverse_inplace(dims, next);
    fix_gauge(g, next);
    if (!next.allFinite() || next.abs().maxCoeff() > 1e12)
      throw Error(Errc::DivergedIterate, "iterate blew up at iteration " + std::to_string(it));

    // residual of the unshifted equation at the new iterate
    CArray Rh = P.residual_symbol.cast<cplx>() * fft::forward(dims, next) - fft::forward(dims, P.residual_nl(next));
    if (P.skip_zero) {
      st.n0 = -Rh[0];
      Rh[0] = 0;
    }
    st.residual = std::sqrt(Rh.abs2().sum() * scale);
    st.step = (next - q).abs().maxCoeff();
    st.M = M;
    q.swap(next);
    res.residual_history.push_back(st.residual);
    if (st.residual < tol && st.step < o.step_tol) {
      ++it;
      break;
    }
  }
  if (it >= o.max_iter && !(st.residual < tol && st.step < o.step_tol)) {
    std::ostringstream os;
    os << "no convergence after " << o.max_iter << " iterations (residual " << st.residual << ", step " << st.step
       << ")";
    throw Error(Errc::NoConvergence, os.str());
  }

  res.field = Field(g, std::move(q));
  res.iterations = it;
  res.residual_l2 = st.residual;
  res.step_change = st.step;
  res.stabilizer = st.M;
  // spatial mean of the nonlinear term: DFT zero mode / N
  res.mean_mode_defect = std::abs(st.n0) / g.size();
  if (P.zeta) {
    // continuous normalization: F = h * DFT; the converged M is ~1
    const cplx n0 = fft::forward(dims, P.residual_nl(res.field.v))[0];
    res.low_mode = {P.s, std::pow(st.M, P.rho) * g.cell() * n0};
  }
  return res;
}

void finish(GroundStateResult& r, double alpha, const ExponentSet* e) {
  const int d = r.field.grid.dim();
  if (e) {
    r.norms = functionals(r.field, *e, r.low_mode);
  } else {
    // mass-critical model: no ExponentSet; fill what is defined
    r.norms.mass = mass(r.field);
    r.norms.sobolev_gamma_c = std::sqrt(r.norms.mass);
    r.norms.sobolev_2 = sobolev_norm(r.field, 2);
    r.norms.lebesgue_alpha2 = lebesgue_norm(r.field, alpha + 2);
    r.norms.lebesgue_alpha_c = lebesgue_norm(r.field, d * alpha / 4);
    r.norms.energy = energy(r.field, alpha);
    const double num = std::pow(r.norms.lebesgue_alpha2, alpha + 2);
    r.norms.h_value = num / (std::pow(r.norms.sobolev_gamma_c, alpha) * r.norms.sobolev_2 * r.norms.sobolev_2);
  }
  const auto pd = pohozaev_defects(r.field, alpha, r.equation, r.low_mode);
  r.pohozaev_defect_1 = pd.first;
  r.pohozaev_defect_2 = pd.second;
  r.pohozaev_equation = pd.equation;
  const double base = r.equation == Equation::Sobolev ? r.norms.sobolev_gamma_c : r.norms.lebesgue_alpha_c;
  r.sharp_constant = (alpha + 2) / 2 * std::pow(base, -alpha);
}

GroundStateResult solve_sobolev_impl(const Grid& g, double alpha, double gamma, const GroundStateOptions& o) {
  if (!(gamma >= 0 && gamma < 2)) throw Error(Errc::InvalidArgument, "lower-order power outside [0, 2)");
  Problem P;
  P.symbol = power_symbol(g, 4) + power_symbol(g, 2 * gamma);
  P.residual_symbol = P.symbol;
  P.nonlinear = [alpha](const CArray& q) -> CArray { return q.abs().pow(alpha) * q; };
  P.residual_nl = P.nonlinear;
  P.skip_zero = gamma > 0;
  P.zeta = P.skip_zero && o.zero_mode == ZeroMode::Zeta && g.dim() == 1;
  P.s = 2 * gamma;
  P.rho = (alpha + 1) / alpha;
  GroundStateResult r = petviashvili(g, P, o);
  r.equation = Equation::Sobolev;
  r.alpha = alpha;
  r.gamma = gamma;
  return r;
}

}  // namespace

GroundStateResult solve_sobolev_type(const Grid& g, double alpha, const GroundStateOptions& opts) {
  const double gamma = g.dim() / 2.0 - 4.0 / alpha;
  if (std::abs(gamma) < kExpTol) {
    GroundStateResult r = solve_sobolev_impl(g, alpha, 0.0, opts);
    finish(r, alpha, nullptr);
    return r;
  }
  const ExponentSet e = critical_exponents(g.dim(), alpha);
  return solve_sobolev_ground_state(e, g, opts);
}

GroundStateResult solve_sobolev_ground_state(const ExponentSet& e, const Grid& g, const GroundStateOptions& opts) {
  if (g.dim() != e.d) throw Error(Errc::BadShape, "grid dimension differs from exponent set");
  GroundStateResult r = solve_sobolev_impl(g, e.alpha, e.gamma_c, opts);
  finish(r, e.alpha, &e);
  return r;
}

GroundStateResult solve_lebesgue_ground_state(const ExponentSet& e, const Grid& g, const GroundStateOptions& o) {
  if (g.dim() != e.d) throw Error(Errc::BadShape, "grid dimension differs from exponent set");
  if (!(o.shift > 0)) throw Error(Errc::InvalidArgument, "Lebesgue shift must be positive");
  const double alpha = e.alpha, p = e.alpha_c - 2, c = o.shift;
  Problem P;
  P.residual_symbol = power_symbol(g, 4);
  P.symbol = P.residual_symbol + c;
  P.residual_nl = [alpha, p](const CArray& q) -> CArray {
    const RArray m = q.abs();
    return (m.pow(alpha) - m.pow(p)).cast<cplx>() * q;
  };
  P.nonlinear = [f = P.residual_nl, c](const CArray& q) -> CArray { return f(q) + c * q; };
  P.rho = (alpha + 1) / alpha;
  P.lebesgue = true;
  GroundStateResult r = petviashvili(g, P, o);
  r.equation = Equation::Lebesgue;
  r.alpha = alpha;
  r.gamma = 0;
  finish(r, alpha, &e);
  return r;
}

PohozaevDefects pohozaev_defects(const Field& g, const ExponentSet& e, Equation which, const LowMode& lm) {
  return pohozaev_defects(g, e.alpha, which, lm);
}

PohozaevDefects pohozaev_defects(const Field& g, double alpha, Equation which, const LowMode& lm) {
  if (g.v.abs().maxCoeff() == 0) throw Error(Errc::ZeroField, "Pohozaev identities are trivial on the zero field");
  const int d = g.grid.dim();
  const double B = sobolev_norm_sq(g, 2);
  const double C = std::pow(lebesgue_norm(g, alpha + 2), alpha + 2);
  double A;
  if (which == Equation::Sobolev) {
    const double gamma = d / 2.0 - 4.0 / alpha;
    A = std::abs(gamma) < kExpTol ? mass(g) : sobolev_norm_sq_rd(g, gamma, lm);
  } else {
    const double ac = d * alpha / 4.0;
    A = std::pow(lebesgue_norm(g, ac), ac);
  }
  PohozaevDefects p;
  p.first = rel_gap(A, alpha / 2 * B);
  p.second = rel_gap(alpha / 2 * B, alpha / (alpha + 2) * C);
  p.equation = rel_gap(A + B, C);
  return p;
}

double sharp_constants(const GroundStateResult& gs, const ExponentSet& e) {
  const double base = gs.equation == Equation::Sobolev ? sobolev_norm_rd(gs.field, e.gamma_c, gs.low_mode)
                                                       : lebesgue_norm(gs.field, e.alpha_c);
  if (!(base > 0)) throw Error(Errc::ZeroField, "ground state has zero norm");
  return (e.alpha + 2) / 2 * std::pow(base, -e.alpha);
}

Field random_mixture(const Grid& g, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double Lmin = g.lengths()[0];
  for (double L : g.lengths()) Lmin = std::min(Lmin, L);
  const int terms = 1 + static_cast<int>(U(rng) * 4);
  Field f(g);
  for (int t = 0; t < terms; ++t) {
    std::vector<double> c(g.dim()), v(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
      c[a] = (U(rng) - 0.5) * Lmin / 4;
      v[a] = (U(rng) - 0.5) * 2.0;
    }
    const double w = Lmin / 200 * std::pow(10.0, U(rng));
    const cplx amp = std::polar(0.2 + 2.0 * U(rng), 2 * std::numbers::pi * U(rng));
    Field gt = gaussian(g, 1.0, w, c, v);
    f.v += amp * gt.v;
  }
  return f;
}

GnReport verify_gn_sharpness(double a_gn, const ExponentSet& e, const Grid& g, int trials, std::uint64_t seed) {
  if (!(a_gn > 0)) throw Error(Errc::InvalidArgument, "sharp constant must be positive");
  if (trials < 1) throw Error(Errc::InvalidArgument, "need at least one trial");
  std::vector<double> ratio(trials, 0.0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
    const Field f = random_mixture(g, seed, i);
    const auto r = functionals(f, e);
    ratio[i] = r.h_value.value_or(0.0) / a_gn;
  });
  GnReport rep;
  rep.trials = trials;
  rep.a_gn = a_gn;
  rep.seed = seed;
  for (int i = 0; i < trials; ++i)
    if (ratio[i] > rep.max_ratio) {
      rep.max_ratio = ratio[i];
      rep.argmax_trial = i;
    }
  return rep;
}

}  // namespace nl4s
