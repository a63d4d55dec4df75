#include "nl4s/exponents.hpp"

#include <cmath>
#include <sstream>

#include "nl4s/errors.hpp"

namespace nl4s {

double ExtReal::value() const {
  if (inf_) throw Error(Errc::InvalidArgument, "value() of infinite exponent");
  return v_;
}

ExtReal ExtReal::recip() const {
  if (inf_) return ExtReal(0.0);
  if (v_ == 0.0) return infinity();
  return ExtReal(1.0 / v_);
}

std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
  if (x.is_inf()) return os << "inf";
  return os << x.value();
}

namespace {

// 1/x for a formula of the form num/den, with den == 0 meaning infinity
ExtReal ratio(double num, double den) {
  if (std::abs(den) < kExpTol) return ExtReal::infinity();
  return ExtReal(num / den);
}

double inv(const ExtReal& x) { return x.recip().as_double(); }

}  // namespace

double alpha_c_from_gamma(int d, double gamma_c) { return 2.0 * d / (d - 2.0 * gamma_c); }

double sigma_from_alpha(int d, double alpha) { return (8.0 - (d - 4.0) * alpha) / (d * alpha - 8.0); }

ExponentSet critical_exponents(int d, double alpha) {
  if (d < 1) throw Error(Errc::InvalidArgument, "dimension must be >= 1");
  if (!(alpha > 0) || !std::isfinite(alpha)) throw Error(Errc::InvalidArgument, "alpha must be positive");

  ExponentSet e;
  e.d = d;
  e.alpha = alpha;
  e.two_star_low = 8.0 / d;
  e.two_star_high = d <= 4 ? ExtReal::infinity() : ExtReal(8.0 / (d - 4));

  if (std::abs(alpha - e.two_star_low) <= kExpTol) {
    std::ostringstream os;
    os << "alpha = 8/d = " << e.two_star_low << " gives gamma_c = 0";
    throw Error(Errc::MassCritical, os.str());
  }
  if (alpha < e.two_star_low || (!e.two_star_high.is_inf() && alpha >= e.two_star_high.value() - kExpTol)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " outside (" << e.two_star_low << ", " << e.two_star_high << ")";
    throw Error(Errc::OutOfWindow, os.str());
  }

  e.gamma_c = d / 2.0 - 4.0 / alpha;
  e.alpha_c = d * alpha / 4.0;
  e.sigma = (2.0 - e.gamma_c) / e.gamma_c;
  e.rate_exp = (2.0 - e.gamma_c) / 4.0;
  return e;
}

PairClassification classify_pair(ExtReal p, ExtReal q, int d) {
  if (d < 1) throw Error(Errc::InvalidArgument, "dimension must be >= 1");
  PairClassification c;
  c.p = p;
  c.q = q;
  const double ip = inv(p), iq = inv(q);
  c.gamma_pq = d / 2.0 - d * iq - 4.0 * ip;

  const bool in_box = p.in_range(2.0) && q.in_range(2.0);
  const bool endpoint = !p.is_inf() && p.value() == 2.0 && q.is_inf() && d == 2;
  c.schrodinger_admissible = in_box && !endpoint && (2.0 * ip + d * iq <= d / 2.0 + kExpTol);
  c.biharmonic_admissible = c.schrodinger_admissible && std::abs(c.gamma_pq) <= kExpTol;
  return c;
}

LwpExponents lwp_exponents(int d, double alpha) {
  if (d <= 4) throw Error(Errc::UnsupportedDimension, "local theory in H^gc cap H^2 needs d >= 5");
  (void)critical_exponents(d, alpha);

  LwpExponents l;
  const double a4 = (d - 4.0) * alpha;
  l.n = ratio(2.0 * d, d + 2.0 - a4);
  l.n_star = ratio(2.0 * d, d + 4.0 - a4);
  l.m_star = ratio(8.0, a4 - 4.0);
  l.theta = 1.0 - a4 / 8.0;
  l.p = ratio(8.0 * (alpha + 2.0), alpha * (d - 4.0));
  l.q = ratio(d * (alpha + 2.0), d + 2.0 * alpha);
  // 1/p' = 1/m + alpha/p
  const double im = 1.0 - (alpha + 1.0) * inv(l.p);
  l.m = ratio(1.0, im);

  l.m_n_admissible = l.m_star.in_range(2.0) && l.n_star.in_range(2.0);
  l.pq_admissible = l.p.in_range(2.0) && l.q.in_range(2.0);
  return l;
}

}  // namespace nl4s
