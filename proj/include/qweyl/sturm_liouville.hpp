#pragma once

#include <array>
#include <memory>

#include "qweyl/scales.hpp"
#include "qweyl/weyl.hpp"

namespace qweyl {

// -(p y')' + q y = z w y on [a, b), limit circle at a via (p y')(a) boundary
// data, limit point at b (caller asserts).  xi is the spectral shift of the
// canonical-system reformulation.
struct SLProblem {
  double a = 0;
  double b = kInf;
  std::function<double(double)> p = [](double) { return 1.0; };
  std::function<double(double)> q = [](double) { return 0.0; };
  std::function<double(double)> w = [](double) { return 1.0; };
  double xi = 0;
  double t_max = 64.0;  // mesh horizon used by the reduction
};

namespace detail {

// State of the two fundamental solutions: (c, p c', s, p s').
using SLState = std::array<double, 4>;

// exp(h * [[0, 1/p],[q - xi w, 0]]) frozen at the midpoint, applied to both
// solution columns at once; exact on intervals of constant coefficients.
inline void sl_exp_step(const SLProblem& pr, double xi, double ta, double tb,
                        SLState& u) {
  const double h = tb - ta, tm = 0.5 * (ta + tb);
  const double ip = 1.0 / pr.p(tm), k = pr.q(tm) - xi * pr.w(tm);
  const double w2 = h * h * k * ip;
  double ch, sl;  // cosh(w), sinh(w)/w on the matrix square root
  if (std::abs(w2) < 1e-12) {
    ch = 1.0 + 0.5 * w2;
    sl = 1.0 + w2 / 6.0;
  } else if (w2 > 0) {
    const double r = std::sqrt(w2);
    ch = std::cosh(r);
    sl = std::sinh(r) / r;
  } else {
    const double r = std::sqrt(-w2);
    ch = std::cos(r);
    sl = std::sin(r) / r;
  }
  const double b12 = sl * h * ip, b21 = sl * h * k;
  const SLState v = u;
  u[0] = ch * v[0] + b12 * v[1];
  u[1] = b21 * v[0] + ch * v[1];
  u[2] = ch * v[2] + b12 * v[3];
  u[3] = b21 * v[2] + ch * v[3];
}

// Order-2 step control: full step against two halves, recursing on mismatch.
inline void sl_advance(const SLProblem& pr, double xi, double ta, double tb,
                       SLState& u, double tol, int depth = 0) {
  if (!(tb > ta)) return;
  SLState full = u, halves = u;
  const double tm = 0.5 * (ta + tb);
  sl_exp_step(pr, xi, ta, tb, full);
  sl_exp_step(pr, xi, ta, tm, halves);
  sl_exp_step(pr, xi, tm, tb, halves);
  double err = 0, scale = 1.0;
  for (int i = 0; i < 4; ++i) {
    err = std::max(err, std::abs(full[i] - halves[i]));
    scale = std::max(scale, std::abs(halves[i]));
  }
  if (err <= tol * scale || depth >= 40) {
    u = halves;
    return;
  }
  if (tb - ta < 1e-14 * (std::abs(tb) + 1.0))
    throw StepUnderflow("sl_advance: step control stalled");
  sl_advance(pr, xi, ta, tm, u, tol, depth + 1);
  sl_advance(pr, xi, tm, tb, u, tol, depth + 1);
}

struct SLBasisData {
  SLProblem pr;
  double xi = 0;
  std::vector<double> mesh;
  std::vector<SLState> state;
  std::vector<std::array<double, 3>> cum;  // cumulative (int w c^2, int w s^2, int w s c)
};

inline std::array<double, 3> sl_density_vec(const SLProblem& pr, double t, const SLState& u) {
  const double wt = pr.w(t);
  return {wt * u[0] * u[0], wt * u[2] * u[2], wt * u[0] * u[2]};
}

inline std::shared_ptr<const SLBasisData> sl_build_basis(const SLProblem& pr,
                                                         double xi) {
  auto data = std::make_shared<SLBasisData>();
  data->pr = pr;
  data->xi = xi;
  const double span = std::min(pr.t_max, pr.b - pr.a);
  std::vector<double>& mesh = data->mesh;
  mesh.push_back(pr.a);
  // geometric near a, then capped spacing to resolve oscillation
  for (double g = 1e-7 * span;;) {
    mesh.push_back(pr.a + g);
    if (g >= span) break;
    g = std::min({g * 1.06, g + span / 4096.0, span});
  }
  data->state.resize(mesh.size());
  data->cum.resize(mesh.size());
  SLState u{1.0, 0.0, 0.0, 1.0};  // c(a)=1, (pc')(a)=0, s(a)=0, (ps')(a)=1
  data->state[0] = u;
  data->cum[0] = {0, 0, 0};
  for (size_t k = 1; k < mesh.size(); ++k) {
    const double ta = mesh[k - 1], tb = mesh[k], tm = 0.5 * (ta + tb);
    const std::array<double, 3> fa = sl_density_vec(pr, ta, u);
    sl_advance(pr, xi, ta, tm, u, 1e-12);
    const std::array<double, 3> fm = sl_density_vec(pr, tm, u);
    sl_advance(pr, xi, tm, tb, u, 1e-12);
    const std::array<double, 3> fb = sl_density_vec(pr, tb, u);
    const double h6 = (tb - ta) / 6.0;
    for (int i = 0; i < 3; ++i)
      data->cum[k][i] = data->cum[k - 1][i] + h6 * (fa[i] + 4.0 * fm[i] + fb[i]);
    data->state[k] = u;
  }
  return data;
}

inline size_t sl_locate(const SLBasisData& d, double t) {
  auto it = std::upper_bound(d.mesh.begin(), d.mesh.end(), t);
  return (it == d.mesh.begin()) ? 0 : (it - d.mesh.begin() - 1);
}

inline SLState sl_eval(const SLBasisData& d, double t) {
  const size_t k = sl_locate(d, t);
  SLState u = d.state[k];
  sl_advance(d.pr, d.xi, d.mesh[k], t, u, 1e-12);
  return u;
}

}  // namespace detail

struct SLSolutions {
  std::function<double(double)> c, pc, s, ps;
};

inline SLSolutions sl_solutions(const SLProblem& pr, double xi) {
  auto d = detail::sl_build_basis(pr, xi);
  auto at = [d](double t, int i) {
    if (t < d->pr.a || t > d->mesh.back())
      throw OutOfDomain("sl_solutions: t outside the meshed range");
    return detail::sl_eval(*d, t)[i];
  };
  return SLSolutions{[at](double t) { return at(t, 0); },
                     [at](double t) { return at(t, 1); },
                     [at](double t) { return at(t, 2); },
                     [at](double t) { return at(t, 3); }};
}

// H_xi(t) = w(t) [[c^2, -sc],[-sc, s^2]] with c, s evaluated at energy xi;
// then m(z) = q_{H_xi}(z - xi).
inline HamiltonianModel sl_to_hamiltonian(const SLProblem& pr) {
  auto d = detail::sl_build_basis(pr, pr.xi);
  HamiltonianModel m;
  m.name = "sl";
  m.a = pr.a;
  m.b = d->mesh.back();
  m.t_scale = 0.1 * (m.b - m.a);
  m.density = [d](double t) {
    detail::SLState u = detail::sl_eval(*d, t);
    std::array<double, 3> f = detail::sl_density_vec(d->pr, t, u);
    return Density{f[0], f[1], -f[2]};
  };
  m.primitive = [d](double t) {
    const size_t k = detail::sl_locate(*d, t);
    detail::SLState u = d->state[k];
    const double ta = d->mesh[k], tm = 0.5 * (ta + t);
    const std::array<double, 3> fa = detail::sl_density_vec(d->pr, ta, u);
    detail::sl_advance(d->pr, d->xi, ta, tm, u, 1e-12);
    const std::array<double, 3> fm = detail::sl_density_vec(d->pr, tm, u);
    detail::sl_advance(d->pr, d->xi, tm, t, u, 1e-12);
    const std::array<double, 3> fb = detail::sl_density_vec(d->pr, t, u);
    const double h6 = (t - ta) / 6.0;
    std::array<double, 3> o{};
    for (int i = 0; i < 3; ++i)
      o[i] = d->cum[k][i] + h6 * (fa[i] + 4.0 * fm[i] + fb[i]);
    return Omega{t, o[0], o[1], -o[2]};
  };
  return m;
}

inline cplx sl_m(const HamiltonianModel& m, const SLProblem& pr, cplx z,
                 double tol_rel = 1e-9) {
  return eval_q(m, z - pr.xi, 0.0, tol_rel).q;
}

struct T9Record {
  double r = 0;
  cplx m_val{0, 0};
  double t_hat_xi = 0;
  double ratio_im = 0;   // Im m(xi+ir) * r * ||s||^2_{t_hat}
  double ratio_inv = 0;  // (Im m / |m|^2) * r * ||c||^2_{t_hat}
};

struct T9Report {
  std::vector<T9Record> records;
  double C = 0;           // max of max(ratio, 1/ratio) over both ratios
  double spread_im = 0;   // max/min - 1 of ratio_im over the grid
  double spread_inv = 0;
};

inline T9Report theorem_t9_check(const SLProblem& pr,
                                 const std::vector<double>& r_grid) {
  HamiltonianModel m = sl_to_hamiltonian(pr);
  T9Report rep;
  rep.records.resize(r_grid.size());
  parallel_for(r_grid.size(), [&](size_t i) {
    const double r = r_grid[i];
    T9Record rec;
    rec.r = r;
    rec.t_hat_xi = t_hat(m, r);  // solves the Gram-determinant equation 1/r^2
    Omega oh = omega(m, rec.t_hat_xi);
    rec.m_val = eval_q(m, cplx{0, r}, 0.0, 1e-9).q;
    rec.ratio_im = rec.m_val.imag() * r * oh.omega2;
    rec.ratio_inv = rec.m_val.imag() / std::norm(rec.m_val) * r * oh.omega1;
    rep.records[i] = rec;
  });
  double lo_im = kInf, hi_im = 0, lo_inv = kInf, hi_inv = 0;
  for (const T9Record& rec : rep.records) {
    for (double v : {rec.ratio_im, rec.ratio_inv})
      rep.C = std::max(rep.C, std::max(v, 1.0 / v));
    lo_im = std::min(lo_im, rec.ratio_im);
    hi_im = std::max(hi_im, rec.ratio_im);
    lo_inv = std::min(lo_inv, rec.ratio_inv);
    hi_inv = std::max(hi_inv, rec.ratio_inv);
  }
  rep.spread_im = hi_im / lo_im - 1.0;
  rep.spread_inv = hi_inv / lo_inv - 1.0;
  return rep;
}

}  // namespace qweyl
