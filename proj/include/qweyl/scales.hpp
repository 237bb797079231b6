#pragma once

#include "qweyl/hamiltonian.hpp"

namespace qweyl {

// r-ring_eta(t) = eta / (2 sqrt(omega1 omega2)),  r-hat_eta(t) = eta / (2 sqrt(det Omega)).
// Both computed in the log domain so they survive t deep inside the model.

inline double log_r_ring(const HamiltonianModel& m, double t, double eta = 2.0) {
  double lp = log_omega1omega2(m, t);
  if (lp == -kInf) return kInf;
  return std::log(eta / 2.0) - 0.5 * lp;
}

inline double log_r_hat(const HamiltonianModel& m, double t, double eta = 2.0) {
  double ld = log_det_omega(m, t);
  if (ld == -kInf) return kInf;
  return std::log(eta / 2.0) - 0.5 * ld;
}

inline double r_ring(const HamiltonianModel& m, double t, double eta = 2.0) {
  return std::exp(log_r_ring(m, t, eta));
}

inline double r_hat(const HamiltonianModel& m, double t, double eta = 2.0) {
  return std::exp(log_r_hat(m, t, eta));
}

namespace detail {
// Leftmost t with F(t) <= target, where F is non-increasing in t (log r-scale
// functions).  Bracket by geometric expansion from t_scale, then bisect in
// log(t - a).
template <class F>
inline double invert_decreasing(const HamiltonianModel& m, const F& f, double target,
                                const char* who) {
  const double a = m.a;
  double hi = std::max(m.t_scale, m.t_min_resolved * 2.0 + 1e-300);
  if (!(hi > a)) hi = (m.b == kInf) ? 1.0 : 0.5 * (a + m.b);
  if (m.b != kInf) hi = std::min(hi, a + 0.5 * (m.b - a));
  int k = 0;
  for (; k < 1100; ++k) {
    if (f(hi) <= target) break;
    double next = (m.b == kInf) ? a + 2.0 * (hi - a) : m.b - 0.5 * (m.b - hi);
    if (!(next > hi) || !(next < m.b))
      throw BracketFailure(std::string(who) + ": no t with value <= target below b");
    hi = next;
  }
  if (k == 1100)
    throw BracketFailure(std::string(who) + ": bracket expansion exhausted");
  double lo = std::max(m.t_min_resolved, a);
  bool have_lo = false;
  if (lo > a && lo < hi) {
    if (f(lo) > target) have_lo = true;
    else return lo;  // already past target at the resolved edge
  }
  if (!have_lo) {
    lo = hi;
    for (int j = 0; j < 1100; ++j) {
      double next = a + 0.5 * (lo - a);
      if (!(next > a) || next <= std::max(m.t_min_resolved, a) * (1 + 1e-15)) {
        lo = std::max(m.t_min_resolved, a);
        if (lo <= a) lo = std::nextafter(a, kInf);
        break;
      }
      lo = next;
      if (f(lo) > target) break;
    }
    if (f(lo) <= target) return lo;
  }
  // Bisect in log(t - a) for uniform relative resolution near a.
  double llo = std::log(lo - a), lhi = std::log(hi - a);
  for (int i = 0; i < 200 && lhi - llo > 1e-14; ++i) {
    double mid = 0.5 * (llo + lhi);
    double t = a + std::exp(mid);
    (f(t) <= target ? lhi : llo) = mid;
  }
  return a + std::exp(lhi);
}
}  // namespace detail

// t-hat_eta(r): leftmost t with r-hat_eta(t) <= r, i.e. det Omega(t) >= (eta/2r)^2.
inline double t_hat(const HamiltonianModel& m, double r, double eta = 2.0) {
  if (!(r > 0)) throw OutOfDomain("t_hat: r must be positive");
  const double lr = std::log(r);
  return detail::invert_decreasing(
      m, [&](double t) { return log_r_hat(m, t, eta); }, lr, "t_hat");
}

inline double t_ring(const HamiltonianModel& m, double r, double eta = 2.0) {
  if (!(r > 0)) throw OutOfDomain("t_ring: r must be positive");
  const double lr = std::log(r);
  return detail::invert_decreasing(
      m, [&](double t) { return log_r_ring(m, t, eta); }, lr, "t_ring");
}

struct Envelopes {
  double r = 0;
  double t_ring = 0;  // t-ring_eta(r) at the default eta
  double A = 0;       // upper envelope for Im q(ir)
  double L = 0;       // lower envelope
  double log_A = 0;
  double log_L = 0;
};

// A(r) = sqrt(omega1/omega2)(t-ring(r));  L(r) = A(r) * (det Omega / omega1 omega2)(t-ring(r)).
inline Envelopes envelopes(const HamiltonianModel& m, double r, double eta = 2.0) {
  Envelopes e;
  e.r = r;
  e.t_ring = t_ring(m, r, eta);
  double lw12, lratio;  // log(omega1) - log(omega2), log(detOmega/(omega1*omega2))
  if (m.log_primitive && e.t_ring <= m.log_valid_to) {
    LogOmega lo = m.log_primitive(e.t_ring);
    lw12 = lo.log_omega1 - lo.log_omega2;
  } else {
    Omega o = omega(m, e.t_ring);
    lw12 = std::log(o.omega1) - std::log(o.omega2);
  }
  if (m.one_minus_f_sq) {
    lratio = std::log(m.one_minus_f_sq(e.t_ring));
  } else {
    lratio = log_det_omega(m, e.t_ring) - log_omega1omega2(m, e.t_ring);
  }
  e.log_A = 0.5 * lw12;
  e.log_L = e.log_A + lratio;
  e.A = std::exp(e.log_A);
  e.L = std::exp(e.log_L);
  return e;
}

}  // namespace qweyl
