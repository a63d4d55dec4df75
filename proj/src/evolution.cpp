#include "nl4s/evolution.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "nl4s/fft.hpp"

namespace nl4s {

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::BlowupDetected: return "BlowupDetected";
    case RunStatus::StepFloor: return "StepFloor";
  }
  return "Unknown";
}

void EvolveConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(Errc::InvalidArgument, m); };
  if (!(dt_floor > 0)) bad("dt_floor must be positive");
  if (!(dt0 > dt_floor)) bad("dt0 must exceed dt_floor");
  if (!(dt_max >= dt0)) bad("dt_max must be at least dt0");
  if (!(phase_cap > 0 && phase_cap <= 1)) bad("phase_cap must lie in (0, 1]");
  if (!(t_end > 0) || !std::isfinite(t_end)) bad("t_end must be positive and finite");
  if (!(blowup_norm_factor > 1)) bad("blowup_norm_factor must exceed 1");
  if (snapshot_every < 0) bad("snapshot_every must be >= 0");
}

TrajectoryRecord measure(const Field& f, const ExponentSet& e, double t, double dt) {
  const FunctionalReport r = functionals(f, e);
  TrajectoryRecord row;
  row.t = t;
  row.dt = dt;
  row.mass = r.mass;
  row.energy = r.energy;
  row.h_gamma_c = r.sobolev_gamma_c;
  row.h_2 = r.sobolev_2;
  row.l_alpha2 = r.lebesgue_alpha2;
  row.l_alpha_c = r.lebesgue_alpha_c;
  row.max_amp = f.v.size() ? f.v.abs().maxCoeff() : 0.0;
  return row;
}

void nonlinear_phase(CArray& v, double tau, double alpha) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]);
    if (m > 0) v[i] *= std::polar(1.0, tau * std::pow(m, alpha));
  }
}

// zero every mode with |xi_a| > (2/3) xi_nyquist on some axis
void dealias_mask(const Grid& g, CArray& spec) {
  for (int a = 0; a < g.dim(); ++a) {
    const RArray xa = g.xi_flat(a).abs();
    const double cut = 2.0 / 3.0 * g.xi_nyquist(a);
    spec = (xa > cut).select(cplx(0), spec);
  }
}

namespace {

class LinearStep {
 public:
  explicit LinearStep(const Grid& g) : xi4_(g.xi2().square()) {}
  const CArray& operator()(double dt) {
    if (dt != dt_) {
      mult_.resize(xi4_.size());
      for (Eigen::Index i = 0; i < xi4_.size(); ++i) mult_[i] = std::polar(1.0, -dt * xi4_[i]);
      dt_ = dt;
    }
    return mult_;
  }

 private:
  RArray xi4_;
  CArray mult_;
  double dt_ = std::numeric_limits<double>::quiet_NaN();
};

void strang(const Grid& g, CArray& v, double dt, double alpha, bool dealias, bool nonlinear, LinearStep& lin) {
  if (nonlinear) nonlinear_phase(v, dt / 2, alpha);
  fft::forward_inplace(g.n(), v);
  v *= lin(dt);
  if (dealias) dealias_mask(g, v);
  fft::inverse_inplace(g.n(), v);
  if (nonlinear) nonlinear_phase(v, dt / 2, alpha);
}

}  // namespace

Field step_strang(const Field& f, double dt, const ExponentSet& e, bool dealias, bool nonlinear) {
  if (!(dt > 0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  LinearStep lin(f.grid);
  Field out = f;
  strang(f.grid, out.v, dt, e.alpha, dealias, nonlinear, lin);
  if (!out.finite()) throw Error(Errc::NonFinite, "non-finite entry after a Strang step");
  return out;
}

EvolveResult evolve(const Field& f0, const EvolveConfig& cfg, const ExponentSet& e) {
  cfg.validate();
  if (!f0.finite()) throw Error(Errc::InvalidArgument, "initial data is not finite");
  if (f0.grid.dim() != e.d) throw Error(Errc::BadShape, "grid dimension differs from exponent set");

  EvolveResult res;
  const Grid& g = f0.grid;
  LinearStep lin(g);
  Field u = f0;
  double t = 0;
  res.trajectory.push_back(measure(u, e, 0.0, 0.0));
  if (cfg.snapshot_every > 0) res.snapshots.push_back({u, 0.0});
  const double h2_0 = res.trajectory.front().h_2;

  auto cap_dt = [&](double want) {
    const double amax = u.v.abs().maxCoeff();
    if (cfg.nonlinear && amax > 0) want = std::min(want, cfg.phase_cap / std::pow(amax, e.alpha));
    return std::min(want, cfg.dt_max);
  };

  double dt = cap_dt(cfg.dt0);
  int step = 0;
  res.status = RunStatus::Completed;
  while (t < cfg.t_end) {
    const double rem = cfg.t_end - t;
    const bool last = dt >= rem;
    if (last) dt = rem;
    if (!last && dt < cfg.dt_floor) {
      const auto& tr = res.trajectory;
      const bool growing = tr.size() >= 2 && tr.back().h_2 > tr[tr.size() - 2].h_2;
      res.status = growing ? RunStatus::BlowupDetected : RunStatus::StepFloor;
      break;
    }
    strang(g, u.v, dt, e.alpha, cfg.dealias, cfg.nonlinear, lin);
    if (!u.finite()) {
      std::ostringstream os;
      os << "non-finite field at t = " << t << " (step " << step << ", dt = " << dt << ")";
      throw NonFiniteError(os.str(), std::move(res.trajectory));
    }
    t = last ? cfg.t_end : t + dt;
    ++step;
    res.trajectory.push_back(measure(u, e, t, dt));
    if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0) res.snapshots.push_back({u, t});
    if (h2_0 > 0 && res.trajectory.back().h_2 > cfg.blowup_norm_factor * h2_0) {
      res.status = RunStatus::BlowupDetected;
      break;
    }
    dt = cap_dt(1.1 * dt);
  }
  res.steps = step;
  res.t_final = t;
  res.final_field = std::move(u);
  return res;
}

// ---------------------------------------------------------------- rate fit

namespace {

struct LineFit {
  double slope = 0, intercept = 0, sse = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.sse += r * r;
  }
  return f;
}

}  // namespace

BlowupFit fit_blowup(const std::vector<TrajectoryRecord>& rows, double rate_exp) {
  if (rows.size() < 4) throw Error(Errc::InsufficientGrowth, "need at least four trajectory rows");
  const double h_end = rows.back().h_2, h_start = rows.front().h_2;
  if (!(h_start > 0) || !(h_end >= 10 * h_start))
    throw Error(Errc::InsufficientGrowth, "less than one decade of H2 growth");

  // contiguous tail with h2 >= h_end / 10
  std::size_t first = rows.size() - 1;
  while (first > 0 && rows[first - 1].h_2 >= h_end / 10) --first;
  std::vector<double> t, y;
  for (std::size_t i = first; i < rows.size(); ++i) {
    if (i > first && !(rows[i].t > rows[i - 1].t)) continue;
    t.push_back(rows[i].t);
    y.push_back(std::log(rows[i].h_2));
  }
  if (t.size() < 4) throw Error(Errc::InsufficientGrowth, "fewer than four rows in the last decade");

  const double t_last = t.back();
  const double span = t_last - t.front();
  if (!(span > 0)) throw Error(Errc::InsufficientGrowth, "last decade spans no time");

  std::vector<double> x(t.size());
  auto sse_at = [&](double s) {
    const double T = t_last + std::exp(s);
    for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::log(T - t[i]);
    return fit_line(x, y);
  };

  const double lo = std::log(span * 1e-10), hi = std::log(span * 1e3);
  const int M = 400;
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= M; ++k) {
    const double s = lo + (hi - lo) * k / M;
    const double v = sse_at(s).sse;
    if (v < best_sse) {
      best_sse = v;
      best = k;
    }
  }
  const double a = lo + (hi - lo) * std::max(best - 1, 0) / M;
  const double b = lo + (hi - lo) * std::min(best + 1, M) / M;
  const auto mn = boost::math::tools::brent_find_minima([&](double s) { return sse_at(s).sse; }, a, b, 50);

  const LineFit lf = sse_at(mn.first);
  BlowupFit out;
  out.T_est = t_last + std::exp(mn.first);
  out.rate = -lf.slope;
  out.log_prefactor = lf.intercept;
  out.rms = std::sqrt(lf.sse / static_cast<double>(t.size()));
  out.rows_used = static_cast<int>(t.size());
  out.lower_bound_ok = out.rate >= rate_exp * (1 - 0.25);
  return out;
}

}  // namespace nl4s
