#pragma once

#include <limits>
#include <ostream>

namespace nl4s {

// Extended nonnegative real: finite value or +inf, tagged.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : v_(v) {}  // NOLINT implicit on purpose
  static constexpr ExtReal infinity() {
    ExtReal r;
    r.inf_ = true;
    return r;
  }
  constexpr bool is_inf() const { return inf_; }
  // throws on inf; callers check is_inf first
  double value() const;
  // 1/inf = 0 exactly, 1/0 = inf
  ExtReal recip() const;
  double as_double() const { return inf_ ? std::numeric_limits<double>::infinity() : v_; }
  bool in_range(double lo) const { return inf_ || v_ >= lo; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }

 private:
  double v_ = 0.0;
  bool inf_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtReal& x);

inline constexpr double kExpTol = 1e-12;

struct ExponentSet {
  int d = 0;
  double alpha = 0;
  double gamma_c = 0;
  double alpha_c = 0;
  double two_star_low = 0;
  ExtReal two_star_high;
  double sigma = 0;
  double rate_exp = 0;
};

struct PairClassification {
  ExtReal p, q;
  double gamma_pq = 0;
  bool schrodinger_admissible = false;
  bool biharmonic_admissible = false;
};

struct LwpExponents {
  ExtReal n, n_star, m_star;
  double theta = 0;
  ExtReal p, q, m;
  bool m_n_admissible = false;
  bool pq_admissible = false;
};

ExponentSet critical_exponents(int d, double alpha);
PairClassification classify_pair(ExtReal p, ExtReal q, int d);
LwpExponents lwp_exponents(int d, double alpha);

// alternative closed forms, kept separate so callers can cross-check
double alpha_c_from_gamma(int d, double gamma_c);
double sigma_from_alpha(int d, double alpha);

}  // namespace nl4s
