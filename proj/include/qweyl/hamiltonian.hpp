#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qweyl/common.hpp"
#include "qweyl/numerics.hpp"

namespace qweyl {

// A maximal interval on which H has constant direction (rank one with fixed
// angle, scalar factor free) or is constant; the transfer matrix across any
// sub-interval is then a single closed-form exponential of Delta Omega.
struct Piece {
  double t0 = 0;
  double t1 = 0;
  bool rank_one = false;  // det(Delta Omega) == 0 exactly on sub-intervals
  double sign3 = 0;       // sign of the off-diagonal increment when rank_one
};

struct HamiltonianModel {
  std::string name;
  double a = 0.0;
  double b = kInf;
  std::function<Density(double)> density;

  // Optional closed-form ingredients (null when absent).
  std::function<Omega(double)> primitive;
  std::function<LogOmega(double)> log_primitive;
  std::function<double(double)> one_minus_f_sq;  // stable 1 - f(t)^2
  double log_valid_to = kInf;                    // log_primitive valid on (a, log_valid_to]

  std::vector<double> breakpoints;  // density-formula changes, strictly inside (a,b)
  std::vector<Piece> pieces;        // sorted, disjoint; may cover all of (a,b)

  bool singular_left = false;
  bool limit_point = true;
  double t_min_resolved = 0.0;  // computations below this are out of domain
  double t_scale = 1.0;         // representative interior point for searches
  double quad_reltol = 1e-10;
};

struct IndivisibleInfo {
  double a_ring = 0;
  double a_hat = 0;
  std::optional<double> leading_type;  // angle in [0, pi) of the prefix, if any
};

namespace detail {
inline void check_domain(const HamiltonianModel& m, double t, const char* who) {
  if (!(t >= m.a) || !(t < m.b))
    throw OutOfDomain(std::string(who) + ": t outside [a, b) for model " + m.name);
  if (t < m.t_min_resolved)
    throw OutOfDomain(std::string(who) + ": t below resolved depth of model " + m.name);
}
}  // namespace detail

inline Density eval_density(const HamiltonianModel& m, double t) {
  detail::check_domain(m, t, "eval_density");
  Density d = m.density(t);
  const double scale = d.h1 * d.h2 + d.h3 * d.h3 + 1e-300;
  if (d.h1 < 0 || d.h2 < 0 || d.h1 * d.h2 - d.h3 * d.h3 < -1e-9 * scale)
    throw NonPSD("eval_density: H(t) not PSD at t=" + std::to_string(t) +
                 " for model " + m.name);
  return d;
}

inline Omega omega(const HamiltonianModel& m, double t) {
  detail::check_domain(m, t, "omega");
  if (m.primitive) return m.primitive(t);
  auto f = [&](double s) -> Vec3 {
    Density d = m.density(s);
    return {d.h1, d.h2, d.h3};
  };
  Vec3 total{};
  double lo = m.a;
  std::vector<double> cuts;
  for (double bp : m.breakpoints)
    if (bp > m.a && bp < t) cuts.push_back(bp);
  cuts.push_back(t);
  for (size_t i = 0; i < cuts.size(); ++i) {
    if (i == 0 && m.singular_left)
      total += integrate_singular_left(f, lo, cuts[i], m.quad_reltol);
    else
      total += integrate_adaptive(f, lo, cuts[i], m.quad_reltol,
                                  m.quad_reltol * total.norm());
    lo = cuts[i];
  }
  return {t, total.a, total.b, total.c};
}

// Increment Omega(tb) - Omega(ta), computed stably from the log primitive
// when available (expm1 on log differences) to avoid cancellation.
inline Omega delta_omega(const HamiltonianModel& m, double ta, double tb) {
  if (tb < ta) throw OutOfDomain("delta_omega: tb < ta");
  if (m.log_primitive && tb <= m.log_valid_to && ta > m.a) {
    LogOmega la = m.log_primitive(ta), lb = m.log_primitive(tb);
    const double d1 = -std::exp(lb.log_omega1) * std::expm1(la.log_omega1 - lb.log_omega1);
    const double d2 = -std::exp(lb.log_omega2) * std::expm1(la.log_omega2 - lb.log_omega2);
    const double w3a = std::exp(0.5 * (la.log_omega1 + la.log_omega2)) * la.f;
    const double w3b = std::exp(0.5 * (lb.log_omega1 + lb.log_omega2)) * lb.f;
    return {tb, d1, d2, w3b - w3a};
  }
  Omega oa = omega(m, ta), ob = omega(m, tb);
  return {tb, ob.omega1 - oa.omega1, ob.omega2 - oa.omega2, ob.omega3 - oa.omega3};
}

inline double det_omega(const HamiltonianModel& m, double t) {
  detail::check_domain(m, t, "det_omega");
  if (m.log_primitive && m.one_minus_f_sq && t <= m.log_valid_to) {
    LogOmega lo = m.log_primitive(t);
    return std::exp(lo.log_omega1 + lo.log_omega2) * m.one_minus_f_sq(t);
  }
  Omega o = omega(m, t);
  if (m.one_minus_f_sq && o.omega1 > 0 && o.omega2 > 0)
    return o.omega1 * o.omega2 * m.one_minus_f_sq(t);
  return std::fma(o.omega1, o.omega2, -o.omega3 * o.omega3);
}

// log(det Omega(t)); usable even where det Omega would underflow a double.
inline double log_det_omega(const HamiltonianModel& m, double t) {
  detail::check_domain(m, t, "log_det_omega");
  if (m.log_primitive && m.one_minus_f_sq && t <= m.log_valid_to) {
    LogOmega lo = m.log_primitive(t);
    double omf2 = m.one_minus_f_sq(t);
    if (!(omf2 > 0)) return -kInf;
    return lo.log_omega1 + lo.log_omega2 + std::log(omf2);
  }
  double d = det_omega(m, t);
  return d > 0 ? std::log(d) : -kInf;
}

inline double log_omega1omega2(const HamiltonianModel& m, double t) {
  detail::check_domain(m, t, "log_omega1omega2");
  if (m.log_primitive && t <= m.log_valid_to) {
    LogOmega lo = m.log_primitive(t);
    return lo.log_omega1 + lo.log_omega2;
  }
  Omega o = omega(m, t);
  double p = o.omega1 * o.omega2;
  return p > 0 ? std::log(p) : -kInf;
}

namespace detail {
// Find an interior point where pred holds, expanding geometrically up from
// t_scale toward b.
template <class Pred>
inline double expand_up(const HamiltonianModel& m, const Pred& pred, const char* who) {
  double t = std::min(m.t_scale, m.b == kInf ? m.t_scale : m.a + 0.5 * (m.b - m.a));
  if (!(t > m.a)) t = m.b == kInf ? 1.0 : 0.5 * (m.a + m.b);
  for (int k = 0; k < 1100; ++k) {
    if (t > m.t_min_resolved && pred(t)) return t;
    t = (m.b == kInf) ? m.a + 2.0 * (t - m.a) : m.b - 0.5 * (m.b - t);
    if (!(t < m.b) || !(t > m.a)) break;
  }
  throw DegenerateModel(std::string(who) + ": predicate never satisfied up to b for " +
                        m.name);
}
}  // namespace detail

inline IndivisibleInfo indivisible_info(const HamiltonianModel& m) {
  IndivisibleInfo info;
  auto pos_o1o2 = [&](double t) { return log_omega1omega2(m, t) > -kInf; };
  auto pos_det = [&](double t) { return log_det_omega(m, t) > -kInf; };
  double hi = detail::expand_up(m, pos_det, "indivisible_info");
  // Leftmost positivity points by boolean bisection on monotone predicates.
  auto leftmost = [&](auto pred, double hi0) {
    double lo = std::max(m.a, m.t_min_resolved), h = hi0;
    if (lo > m.a && pred(lo)) return lo;  // positive already at the resolved edge
    for (int i = 0; i < 200 && h - lo > 1e-12 * std::max(std::abs(h), 1e-30); ++i) {
      double mid = lo + 0.5 * (h - lo);
      if (mid <= lo || mid >= h) break;
      (pred(mid) ? h : lo) = mid;
    }
    return h;
  };
  info.a_hat = leftmost(pos_det, hi);
  info.a_ring = leftmost(pos_o1o2, info.a_hat);
  if (info.a_hat > m.a + 1e-12 * std::max(1.0, std::abs(info.a_hat))) {
    double t_probe = m.a + 0.5 * (info.a_hat - m.a);
    Omega o = omega(m, std::max(t_probe, m.t_min_resolved));
    double phi;
    if (o.omega1 <= 1e-14 * (o.omega1 + o.omega2))
      phi = kPi / 2;
    else if (o.omega2 <= 1e-14 * (o.omega1 + o.omega2))
      phi = 0.0;
    else {
      phi = std::atan2(o.omega3, o.omega1);
      if (phi < 0) phi += kPi;
    }
    info.leading_type = phi;
  }
  return info;
}

// ---------------------------------------------------------------------------
// Model surgery helpers (pure wrappers; originals are captured by value).
// ---------------------------------------------------------------------------

inline HamiltonianModel restrict_model(const HamiltonianModel& m, double new_a) {
  if (!(new_a >= m.a) || !(new_a < m.b))
    throw OutOfDomain("restrict_model: new left endpoint outside [a, b)");
  HamiltonianModel r = m;
  r.name = m.name + "|[" + std::to_string(new_a) + ",b)";
  r.a = new_a;
  r.t_min_resolved = new_a;
  r.singular_left = false;
  r.t_scale = std::max(m.t_scale, new_a + std::max(1.0, std::abs(new_a)));
  if (m.primitive) {
    Omega base = m.primitive(new_a);
    r.primitive = [base, orig = m.primitive](double t) -> Omega {
      Omega o = orig(t);
      return {t, o.omega1 - base.omega1, o.omega2 - base.omega2, o.omega3 - base.omega3};
    };
  }
  r.log_primitive = nullptr;
  r.one_minus_f_sq = nullptr;
  std::vector<double> bps;
  for (double bp : m.breakpoints)
    if (bp > new_a) bps.push_back(bp);
  r.breakpoints = bps;
  std::vector<Piece> ps;
  for (const Piece& p : m.pieces) {
    if (p.t1 <= new_a) continue;
    Piece q = p;
    q.t0 = std::max(p.t0, new_a);
    ps.push_back(q);
  }
  r.pieces = ps;
  return r;
}

inline HamiltonianModel diagonal_part(const HamiltonianModel& m) {
  HamiltonianModel d = m;
  d.name = m.name + "#diag";
  d.density = [orig = m.density](double t) -> Density {
    Density v = orig(t);
    return {v.h1, v.h2, 0.0};
  };
  if (m.primitive)
    d.primitive = [orig = m.primitive](double t) -> Omega {
      Omega o = orig(t);
      return {t, o.omega1, o.omega2, 0.0};
    };
  if (m.log_primitive)
    d.log_primitive = [orig = m.log_primitive](double t) -> LogOmega {
      LogOmega lo = orig(t);
      return {t, lo.log_omega1, lo.log_omega2, 0.0};
    };
  d.one_minus_f_sq = [](double) { return 1.0; };
  std::vector<Piece> ps;
  for (Piece p : m.pieces) {
    p.rank_one = false;  // zeroing h3 generally breaks rank-one structure
    p.sign3 = 0;
    ps.push_back(p);
  }
  d.pieces = ps;
  return d;
}

inline HamiltonianModel scale_model(const HamiltonianModel& m, double k) {
  if (!(k > 0)) throw InvalidParams("scale_model: k must be positive");
  HamiltonianModel s = m;
  s.name = m.name + "*" + std::to_string(k);
  s.density = [k, orig = m.density](double t) -> Density {
    Density v = orig(t);
    return {k * v.h1, k * v.h2, k * v.h3};
  };
  if (m.primitive)
    s.primitive = [k, orig = m.primitive](double t) -> Omega {
      Omega o = orig(t);
      return {t, k * o.omega1, k * o.omega2, k * o.omega3};
    };
  if (m.log_primitive)
    s.log_primitive = [k, orig = m.log_primitive](double t) -> LogOmega {
      LogOmega lo = orig(t);
      return {t, lo.log_omega1 + std::log(k), lo.log_omega2 + std::log(k), lo.f};
    };
  return s;
}

}  // namespace qweyl
