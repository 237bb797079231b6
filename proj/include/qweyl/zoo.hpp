#pragma once

#include "qweyl/scales.hpp"

namespace qweyl {

// ---------------------------------------------------------------------------
// Power-log family: H(t) = t^{alpha-1} [[L^b1, L^b3],[L^b3, L^b2]], L = |log t|.
// ---------------------------------------------------------------------------

struct PowerLogParams {
  double alpha = 2.0;
  double beta1 = 1.0;
  double beta2 = 3.0;
  double beta3() const { return 0.5 * (beta1 + beta2); }
};

namespace detail {
// Gamma(a, x) extended to a <= 0 via Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x})/a.
inline double gamma_upper_any(double a, double x) {
  if (a > 0) return gamma_upper(a, x);
  if (!(x > 0)) throw OutOfDomain("gamma_upper_any: need x > 0 when a <= 0");
  int k = static_cast<int>(std::ceil(-a)) + 1;
  double g = gamma_upper(a + k, x);
  for (int j = k - 1; j >= 0; --j) {
    const double aj = a + j;
    g = (g - std::pow(x, aj) * std::exp(-x)) / aj;
  }
  return g;
}
}  // namespace detail

// omega_i(t) = alpha^{-(beta_i+1)} Gamma(beta_i+1, -alpha log t) on (0, t_max].
inline HamiltonianModel make_powerlog(const PowerLogParams& p, double t_max = 0.5) {
  if (!(p.alpha > 0)) throw InvalidParams("make_powerlog: alpha must be positive");
  if (p.beta1 == p.beta2) throw InvalidParams("make_powerlog: beta1 must differ from beta2");
  if (!(t_max > 0) || !(t_max < 1))
    throw InvalidParams("make_powerlog: t_max must lie in (0,1)");
  const double a = p.alpha, b1 = p.beta1, b2 = p.beta2, b3 = p.beta3();
  auto gam = [a](double beta, double t) {
    return std::pow(a, -(beta + 1.0)) * detail::gamma_upper_any(beta + 1.0, -a * std::log(t));
  };
  HamiltonianModel m;
  m.name = "powerlog";
  m.a = 0.0;
  m.b = kInf;
  m.density = [=](double t) -> Density {
    if (t > t_max) return {1.0, 0.0, 0.0};
    const double L = -std::log(t), tp = std::pow(t, a - 1.0);
    return {tp * std::pow(L, b1), tp * std::pow(L, b2), tp * std::pow(L, b3)};
  };
  m.primitive = [=](double t) -> Omega {
    if (t <= t_max) return {t, gam(b1, t), gam(b2, t), gam(b3, t)};
    return {t, gam(b1, t_max) + (t - t_max), gam(b2, t_max), gam(b3, t_max)};
  };
  m.log_primitive = [=](double t) -> LogOmega {
    const double g1 = gam(b1, t), g2 = gam(b2, t), g3 = gam(b3, t);
    return {t, std::log(g1), std::log(g2), g3 / std::sqrt(g1 * g2)};
  };
  m.log_valid_to = t_max;
  m.one_minus_f_sq = [=](double t) -> double {
    if (t <= t_max) {
      const double g1 = gam(b1, t), g2 = gam(b2, t), g3 = gam(b3, t);
      return (g1 * g2 - g3 * g3) / (g1 * g2);
    }
    Omega o = m.primitive(t);
    return 1.0 - o.omega3 * o.omega3 / (o.omega1 * o.omega2);
  };
  m.breakpoints = {t_max};
  m.pieces = {{t_max, kInf, true, 0.0}};
  m.t_min_resolved = std::exp(-600.0 / a);
  m.t_scale = 0.5 * t_max;
  return m;
}

struct PowerlogPrediction {
  double t_ring = 0;
  double t_hat = 0;
  double A = 0;
  double L = 0;
  double im_q = 0;  // scale of Im q(ir) up to the Theorem 1 constants
};

inline PowerlogPrediction powerlog_predict(const PowerLogParams& p, double r) {
  if (!(r >= 1e2)) throw OutOfDomain("powerlog_predict: r must be >= 1e2");
  const double a = p.alpha, b3 = p.beta3();
  const double lr = std::log(r);
  PowerlogPrediction out;
  // omega1 omega2 ~ a^{-2} t^{2a} L^{2 b3}; invert at 1/r^2.
  out.t_ring = std::pow(a, (1.0 + b3) / a) * std::pow(r, -1.0 / a) * std::pow(lr, -b3 / a);
  // det Omega ~ c t^{2a} L^{2(b3-1)} with c = ((b1-b2)/(2a))^2 / a^2.
  const double c = std::pow((p.beta1 - p.beta2) / (2.0 * a), 2) / (a * a);
  out.t_hat = std::pow(c, -1.0 / (2.0 * a)) * std::pow(a, (b3 - 1.0) / a) *
              std::pow(r, -1.0 / a) * std::pow(lr, -(b3 - 1.0) / a);
  out.A = std::pow(a * lr, 0.5 * (p.beta1 - p.beta2));
  out.L = std::pow((p.beta1 - p.beta2) / (2.0 * a), 2) * std::pow(a * lr, -2.0) * out.A;
  out.im_q = std::abs(p.beta1 - p.beta2) / (2.0 * a) *
             std::pow(lr / a, 0.5 * (p.beta1 - p.beta2) - 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// H_{p,l} oscillating-angle family and the r3 variant.
// ---------------------------------------------------------------------------

struct HplParams {
  double p = 0.5;
  double l = 0.5;
  int n_max = 14;
  double delta() const { return std::log(l) / std::log(p * l); }
};

struct HplNodes {
  // index n in [1, n_max]; xi arrays additionally hold n_max+1.
  std::vector<double> t, xi;            // abscissae t_n = xi_n/2, xi_n = 4^{-n}
  std::vector<double> f_t, f_xi;        // f at nodes
  std::vector<double> omf_t, omf_xi;    // 1 - f at nodes, cancellation-free
  std::vector<double> u1_t, u2_t;       // log omega_i at t_n
  std::vector<double> u1_xi, u2_xi;     // log omega_i at xi_n
};

struct HplModel {
  HamiltonianModel model;
  HplParams params;
  HplNodes nodes;
  bool r3 = false;
  double delta() const { return params.delta(); }
};

enum class HplWhich { r_ring_t, r_hat_t, r_ring_xi, r_hat_xi };

// Lemma-style node predictions for log r at the construction nodes.
inline double hpl_predict(const HplParams& prm, HplWhich which, int n) {
  if (n < 1 || n > prm.n_max) throw OutOfDomain("hpl_predict: n outside [1, n_max]");
  const double lp = std::log(prm.p), ll = std::log(prm.l), lpl = lp + ll;
  const double lead = -0.5 * n * n * lpl;
  switch (which) {
    case HplWhich::r_ring_t: return lead - 0.5 * n * (ll - lp);
    case HplWhich::r_hat_t: return lead - 0.5 * n * ll;
    case HplWhich::r_ring_xi:
    case HplWhich::r_hat_xi: return lead + 0.5 * n * lpl;
  }
  throw InvalidParams("hpl_predict: unknown selector");
}

namespace detail {

struct HplSeg {
  double s0, s1;      // endpoints
  double f0, f1;      // f at endpoints
  double omf0, omf1;  // 1-f at endpoints
  double u1_r, u2_r;  // log omega_i at the right endpoint
  bool is_a;          // A-segment (xi_{n+1}, t_n]: alpha1 = alpha2 = f'/(1-f)
};

inline HplSeg hpl_segment(const HplNodes& nd, int n_max, double t) {
  // A_n = (xi_{n+1}, t_n], B_n = (t_n, xi_n]; domain is (xi_{n_max+1}, t_1].
  for (int n = 1; n <= n_max; ++n) {
    if (n >= 2 && t > nd.t[n] && t <= nd.xi[n])
      return {nd.t[n], nd.xi[n], nd.f_t[n], nd.f_xi[n], nd.omf_t[n], nd.omf_xi[n],
              nd.u1_xi[n], nd.u2_xi[n], false};
    // bottom edge of the resolved range is inclusive
    const bool at_floor = (n == n_max && t >= nd.xi[n + 1] * (1.0 - 1e-12));
    if ((t > nd.xi[n + 1] || at_floor) && t <= nd.t[n])
      return {nd.xi[n + 1], nd.t[n], nd.f_xi[n + 1], nd.f_t[n], nd.omf_xi[n + 1],
              nd.omf_t[n], nd.u1_t[n], nd.u2_t[n], true};
  }
  throw OutOfDomain("hpl: t outside the resolved construction range");
}

// f, 1-f, and log omega_i at an interior point, all cancellation-free.
struct HplPoint {
  double f, omf, u1, u2;
};

inline HplPoint hpl_point(const HplNodes& nd, int n_max, double t) {
  const HplSeg sg = hpl_segment(nd, n_max, t);
  const double s = (t - sg.s0) / (sg.s1 - sg.s0);
  HplPoint pt;
  pt.f = sg.f0 * (1.0 - s) + sg.f1 * s;
  pt.omf = sg.omf0 * (1.0 - s) + sg.omf1 * s;
  if (sg.is_a) {
    const double du = std::log(sg.omf1) - std::log(pt.omf);
    pt.u1 = sg.u1_r + du;
    pt.u2 = sg.u2_r + du;
  } else {
    pt.u1 = sg.u1_r;
    pt.u2 = sg.u2_r + 2.0 * (std::log(sg.f1) - std::log(pt.f));
  }
  return pt;
}

inline HplModel make_hpl_family(const HplParams& prm, bool r3) {
  if (!(prm.p > 0) || !(prm.p < 1) || !(prm.l > 0) || !(prm.l < 1))
    throw InvalidParams("hpl: p and l must lie in (0,1)");
  if (prm.n_max < 2 || prm.n_max > 14)
    throw InvalidParams("hpl: n_max must lie in [2, 14]");
  if (r3 && !(prm.l * prm.l > prm.p))
    throw InvalidParams("hpl r3 variant: requires l^2 > p");
  const int N = prm.n_max;
  const double lp = std::log(prm.p), ll = std::log(prm.l);
  HplNodes nd;
  nd.t.assign(N + 2, 0);
  nd.xi.assign(N + 2, 0);
  nd.f_t.assign(N + 2, 0);
  nd.f_xi.assign(N + 2, 0);
  nd.omf_t.assign(N + 2, 0);
  nd.omf_xi.assign(N + 2, 0);
  nd.u1_t.assign(N + 2, 0);
  nd.u2_t.assign(N + 2, 0);
  nd.u1_xi.assign(N + 2, 0);
  nd.u2_xi.assign(N + 2, 0);
  for (int n = 1; n <= N + 1; ++n) {
    nd.xi[n] = std::ldexp(1.0, -2 * n);  // 4^{-n}
    nd.t[n] = 0.5 * nd.xi[n];
    nd.omf_t[n] = std::exp(n * lp);            // 1 - f(t_n) = p^n exactly
    nd.f_t[n] = -std::expm1(n * lp);           // 1 - p^n
    if (r3) {
      nd.f_xi[n] = -std::expm1((n - 1) * ll);  // 1 - l^{n-1}
      nd.omf_xi[n] = std::exp((n - 1) * ll);   // l^{n-1}
    } else {
      nd.f_xi[n] = std::exp(n * ll);           // l^n
      nd.omf_xi[n] = -std::expm1(n * ll);      // 1 - l^n
    }
  }
  // Node recurrences descending from the normalization u_i(t_1) = 0.
  nd.u1_t[1] = nd.u2_t[1] = 0.0;
  for (int n = 1; n <= N; ++n) {
    // across A_n = (xi_{n+1}, t_n): both u_i gain log(1-f(t_n)) - log(1-f(xi_{n+1}))
    const double dA = n * lp - std::log(nd.omf_xi[n + 1]);
    nd.u1_xi[n + 1] = nd.u1_t[n] + dA;
    nd.u2_xi[n + 1] = nd.u2_t[n] + dA;
    if (n + 1 <= N) {
      // across B_{n+1} = (t_{n+1}, xi_{n+1}): u2 gains 2 log f(t) difference
      nd.u1_t[n + 1] = nd.u1_xi[n + 1];
      nd.u2_t[n + 1] =
          nd.u2_xi[n + 1] + 2.0 * (std::log(nd.f_xi[n + 1]) - std::log(nd.f_t[n + 1]));
    }
  }
  const double t1 = nd.t[1];
  const double f_t1 = nd.f_t[1];
  HplModel out;
  out.params = prm;
  out.nodes = nd;
  out.r3 = r3;
  HamiltonianModel& m = out.model;
  m.name = r3 ? "hpl_r3" : "hpl";
  m.a = 0.0;
  m.b = kInf;
  m.t_min_resolved = nd.xi[N + 1];
  m.t_scale = t1 * 0.5;
  m.log_valid_to = t1;
  HplNodes nodes = nd;  // captured by value below
  int n_max = N;
  m.log_primitive = [nodes, n_max, t1](double t) -> LogOmega {
    if (t > t1) throw OutOfDomain("hpl log_primitive: t beyond t_1");
    HplPoint pt = hpl_point(nodes, n_max, t);
    return {t, pt.u1, pt.u2, pt.f};
  };
  m.primitive = [nodes, n_max, t1, f_t1](double t) -> Omega {
    if (t <= t1) {
      HplPoint pt = hpl_point(nodes, n_max, t);
      const double w1 = std::exp(pt.u1), w2 = std::exp(pt.u2);
      return {t, w1, w2, std::sqrt(w1 * w2) * pt.f};
    }
    return {t, 1.0 + (t - t1), 1.0, f_t1};
  };
  m.one_minus_f_sq = [nodes, n_max, t1, f_t1](double t) -> double {
    if (t <= t1) {
      HplPoint pt = hpl_point(nodes, n_max, t);
      return pt.omf * (1.0 + pt.f);
    }
    return 1.0 - f_t1 * f_t1 / (1.0 + (t - t1));
  };
  m.density = [nodes, n_max, t1](double t) -> Density {
    if (t > t1) return {1.0, 0.0, 0.0};
    HplSeg sg = hpl_segment(nodes, n_max, t);
    HplPoint pt = hpl_point(nodes, n_max, t);
    const double fp = (sg.f1 - sg.f0) / (sg.s1 - sg.s0);
    const double w1 = std::exp(pt.u1), w2 = std::exp(pt.u2);
    if (sg.is_a) {
      const double al = fp / pt.omf;
      const double h1 = w1 * al, h2 = w2 * al;
      return {h1, h2, std::sqrt(h1 * h2)};
    }
    return {0.0, w2 * (-2.0 * fp / pt.f), 0.0};
  };
  // Every construction segment has constant direction; transfer is piece-exact.
  for (int n = 1; n <= N; ++n) {
    if (n >= 2) m.pieces.push_back({nd.t[n], nd.xi[n], true, 0.0});  // B_n: diag(0,h2)
    m.pieces.push_back({nd.xi[n + 1], nd.t[n], true, 1.0});          // A_n: full rank-one
  }
  m.pieces.push_back({t1, kInf, true, 0.0});  // indivisible tail diag(1,0)
  std::sort(m.pieces.begin(), m.pieces.end(),
            [](const Piece& x, const Piece& y) { return x.t0 < y.t0; });
  for (int n = 1; n <= N + 1; ++n) {
    if (nd.t[n] < t1) m.breakpoints.push_back(nd.t[n]);
    m.breakpoints.push_back(nd.xi[n]);
  }
  std::sort(m.breakpoints.begin(), m.breakpoints.end());
  return out;
}

}  // namespace detail

inline HplModel make_hpl(const HplParams& prm) { return detail::make_hpl_family(prm, false); }

inline HplModel make_r3_variant(const HplParams& prm) {
  return detail::make_hpl_family(prm, true);
}

// In-interval Lemma-style prediction of log r_ring / log r_hat at interior t.
inline double hpl_predict_log_r(const HplModel& hm, bool hat, double t) {
  const detail::HplSeg sg = detail::hpl_segment(hm.nodes, hm.params.n_max, t);
  const detail::HplPoint pt = detail::hpl_point(hm.nodes, hm.params.n_max, t);
  const double lp = std::log(hm.params.p), ll = std::log(hm.params.l), lpl = lp + ll;
  // recover n from the segment's right endpoint
  int n = static_cast<int>(std::lround(-0.5 * std::log2(sg.is_a ? 2.0 * sg.s1 : sg.s1)));
  const double lead = -0.5 * n * n * lpl;
  if (!sg.is_a) {  // t in [t_n, xi_n]
    double v = lead - 0.5 * n * (ll - lp) + std::log(pt.f);
    if (hat) v -= 0.5 * std::log(pt.omf);
    return v;
  }
  // t in [xi_{n+1}, t_n]
  if (hat) return lead - 0.5 * n * lpl + 0.5 * std::log(pt.omf);
  return lead - 0.5 * n * lpl + std::log(pt.omf);
}

// ---------------------------------------------------------------------------
// Prescribed-angle construction (any AC f with |f| < 1 arises as omega3/sqrt(w1w2)).
// ---------------------------------------------------------------------------

struct PrescribedAngleSpec {
  double a = 0.0;
  double b = 1.0;
  std::function<double(double)> f;       // target omega3/sqrt(omega1 omega2)
  std::function<double(double)> fprime;  // its derivative
  std::function<double(double)> g;       // alpha1 + alpha2 >= Delta(f), not L^1 at a
  std::function<double(double)> split;   // alpha1 = split*g; null means 1/2
  double t_min = -1;                     // resolved depth; default relative
  int grid_points = 200;                 // validation grid size
};

inline HamiltonianModel make_prescribed_angle(const PrescribedAngleSpec& spec) {
  if (!(spec.b > spec.a)) throw InvalidParams("make_prescribed_angle: need a < b");
  if (!spec.f || !spec.fprime || !spec.g)
    throw InvalidParams("make_prescribed_angle: f, fprime, g are required");
  const double a = spec.a, b = spec.b;
  const double t_min = spec.t_min > a ? spec.t_min : a + 1e-10 * (b - a);
  auto frac = spec.split ? spec.split : std::function<double(double)>([](double) {
    return 0.5;
  });
  // Validate |f| < 1, the (A7) bracket, and PSD on a geometric sample grid.
  for (int k = 0; k < spec.grid_points; ++k) {
    const double t =
        a + (b - a) * std::exp(std::log((t_min - a) / (b - a)) *
                               (1.0 - static_cast<double>(k) / (spec.grid_points - 1)));
    const double fv = spec.f(t), fpv = spec.fprime(t), gv = spec.g(t);
    if (!(std::abs(fv) < 1))
      throw HypothesisViolated("make_prescribed_angle: |f| >= 1 at t=" + std::to_string(t));
    const double disc = gv * gv / 4.0 - std::pow(fpv + gv * fv / 2.0, 2);
    if (disc < -1e-12 * std::max(1.0, gv * gv))
      throw HypothesisViolated("make_prescribed_angle: g < Delta(f) at t=" +
                               std::to_string(t));
    const double rad = std::sqrt(std::max(0.0, disc));
    const double a1 = frac(t) * gv;
    if (a1 < gv / 2.0 - rad - 1e-12 * std::max(1.0, gv) ||
        a1 > gv / 2.0 + rad + 1e-12 * std::max(1.0, gv))
      throw SplitOutOfRange("make_prescribed_angle: split leaves the admissible "
                            "bracket at t=" + std::to_string(t));
  }
  // g must not be integrable at a: its cumulative integral on a geometric grid
  // toward a has to keep growing.
  {
    std::vector<double> blocks;
    double hi = b;
    for (int k = 0; k < 60; ++k) {
      double lo = a + (hi - a) * 0.25;
      if (lo <= t_min) break;
      blocks.push_back(integrate_scalar(spec.g, lo, hi, 1e-8));
      hi = lo;
    }
    double peak = 0;
    for (double v : blocks) peak = std::max(peak, v);
    const double tail =
        blocks.size() >= 2 ? std::max(blocks[blocks.size() - 1], blocks[blocks.size() - 2])
                           : 0.0;
    // integrable g shows geometric block decay toward a; non-decaying blocks
    // mean the cumulative integral keeps growing
    if (blocks.size() < 3 || tail < 0.3 * peak)
      throw HypothesisViolated(
          "make_prescribed_angle: g appears integrable near a (limit circle)");
  }
  auto alpha1 = [frac, g = spec.g](double t) { return frac(t) * g(t); };
  auto alpha2 = [frac, g = spec.g](double t) { return (1.0 - frac(t)) * g(t); };
  HamiltonianModel m;
  m.name = "prescribed_angle";
  m.a = a;
  m.b = kInf;
  m.t_min_resolved = t_min;
  m.t_scale = a + 0.5 * (b - a);
  m.log_valid_to = b;
  auto log_om = [=](double t) -> std::pair<double, double> {
    auto vec = [&](double s) -> Vec3 { return {alpha1(s), alpha2(s), 0.0}; };
    Vec3 I = integrate_adaptive(vec, t, b, 1e-11, 1e-13);
    return {-I.a, -I.b};
  };
  m.log_primitive = [=](double t) -> LogOmega {
    if (t > b) throw OutOfDomain("prescribed_angle log_primitive: t beyond b");
    auto [u1, u2] = log_om(t);
    return {t, u1, u2, spec.f(t)};
  };
  const double fb = spec.f(b);
  m.primitive = [=](double t) -> Omega {
    if (t <= b) {
      auto [u1, u2] = log_om(t);
      const double w1 = std::exp(u1), w2 = std::exp(u2);
      return {t, w1, w2, std::sqrt(w1 * w2) * spec.f(t)};
    }
    return {t, 1.0 + (t - b), 1.0, fb};
  };
  m.one_minus_f_sq = [=](double t) -> double {
    if (t <= b) {
      const double fv = spec.f(t);
      return (1.0 - fv) * (1.0 + fv);
    }
    return 1.0 - fb * fb / (1.0 + (t - b));
  };
  m.density = [=](double t) -> Density {
    if (t > b) return {1.0, 0.0, 0.0};
    auto [u1, u2] = log_om(t);
    const double w1 = std::exp(u1), w2 = std::exp(u2);
    const double a1 = alpha1(t), a2 = alpha2(t);
    return {w1 * a1, w2 * a2,
            std::sqrt(w1 * w2) * (spec.fprime(t) + 0.5 * (a1 + a2) * spec.f(t))};
  };
  m.breakpoints = {b};
  m.pieces = {{b, kInf, true, 0.0}};
  return m;
}

}  // namespace qweyl
