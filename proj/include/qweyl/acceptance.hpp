#pragma once

// The acceptance criteria battery: each criterion reports one pass/fail line
// with its worst normalized margin through a CheckSink.

#include <iostream>
#include <random>

#include "qweyl/estimates.hpp"
#include "qweyl/report.hpp"
#include "qweyl/strings.hpp"
#include "qweyl/sturm_liouville.hpp"
#include "qweyl/tails.hpp"
#include "qweyl/zoo.hpp"

namespace qweyl {
namespace acceptance {

// Reference models with closed-form Weyl coefficients.
inline HamiltonianModel identity_model() {
  HamiltonianModel m;
  m.name = "identity";
  m.a = 0;
  m.b = kInf;
  m.density = [](double) -> Density { return {1.0, 1.0, 0.0}; };
  m.primitive = [](double t) -> Omega { return {t, t, t, 0.0}; };
  m.one_minus_f_sq = [](double) { return 1.0; };
  m.pieces = {{0.0, kInf, false, 0.0}};
  m.t_scale = 1.0;
  return m;
}

// H = [[1,-t],[-t,t^2]] on (0, inf); q(z) = i sqrt(z) (principal branch).
inline HamiltonianModel h0_model() {
  HamiltonianModel m;
  m.name = "h0";
  m.a = 0;
  m.b = kInf;
  m.density = [](double t) -> Density { return {1.0, t * t, -t}; };
  m.primitive = [](double t) -> Omega {
    return {t, t, t * t * t / 3.0, -0.5 * t * t};
  };
  m.one_minus_f_sq = [](double) { return 0.25; };  // f = -sqrt(3)/2 identically
  m.t_scale = 1.0;
  return m;
}

// H = diag(c1, c2) on (0, inf); q(z) = i sqrt(c1/c2).
inline HamiltonianModel diag_model(double c1, double c2) {
  HamiltonianModel m;
  m.name = "diag";
  m.a = 0;
  m.b = kInf;
  m.density = [=](double) -> Density { return {c1, c2, 0.0}; };
  m.primitive = [=](double t) -> Omega { return {t, c1 * t, c2 * t, 0.0}; };
  m.one_minus_f_sq = [](double) { return 1.0; };
  m.pieces = {{0.0, kInf, false, 0.0}};
  m.t_scale = 1.0;
  return m;
}


inline constexpr uint32_t kSeed = 20240817u;

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n; my /= n;
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

// Running minimum of normalized slacks; a check passes iff its slack is >= 0.
struct Margin {
  double value = kInf;
  bool ok = true;
  // |got - want| <= tol
  void within(double got, double want, double tol) { bound(std::abs(got - want), tol); }
  // dev <= tol, margin in units of tol
  void bound(double dev, double tol) {
    const double m = (tol - dev) / tol;
    value = std::min(value, m);
    ok = ok && m >= 0;
  }
  // raw slack, already normalized by the caller
  void slack(double m) {
    value = std::min(value, m);
    ok = ok && m >= 0;
  }
  void require(bool cond) {
    if (!cond) { ok = false; value = std::min(value, -1.0); }
  }
};

inline double rand_log(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

struct ZooEntry {
  HamiltonianModel model;
  double r_lo, r_hi;
};

inline std::vector<ZooEntry> zoo() {
  std::vector<ZooEntry> z;
  z.push_back({identity_model(), 1e-2, 1e6});
  z.push_back({diag_model(4.0, 1.0), 1e-2, 1e6});
  z.push_back({h0_model(), 1e-1, 1e6});
  z.push_back({make_powerlog(PowerLogParams{2.0, 1.0, 3.0}), 1e2, 1e8});
  z.push_back({make_hpl(HplParams{0.5, 0.5}).model, 1e1, 1e8});
  z.push_back({make_r3_variant(HplParams{0.5, 0.8}).model, 1e1, 1e8});
  return z;
}

// 1. Constant models: q = i and 2i, theorem-1 ratio_im = 1.
inline Margin crit_constant_oracle() {
  Margin mg;
  std::vector<double> grid;
  for (int k = 0; k < 30; ++k) grid.push_back(1e-3 * std::pow(10.0, 6.0 * k / 29.0));
  struct Case { HamiltonianModel m; cplx q; };
  std::vector<Case> cases = {{identity_model(), {0, 1}}, {diag_model(4.0, 1.0), {0, 2}}};
  for (const Case& c : cases) {
    for (double r : grid)
      mg.bound(std::abs(eval_q(c.m, cplx{0, r}, 0.0, 1e-9).q - c.q), 1e-8);
    for (const EstimateRecord& rec : theorem1_report(c.m, grid))
      mg.within(rec.ratio_im, 1.0, 1e-6);
  }
  return mg;
}

// 2. Certified band: recomputed constants match the quoted values and the
//    two-sided inequality holds on every grid point for every zoo model.
inline Margin crit_band() {
  Margin mg;
  BandConstants b = band_constants(0.13833, kPi / 2.0);
  const double tol = 5e-4;
  mg.bound(std::abs(b.c_minus_scaled - 0.002), std::max(tol * 0.002, tol));
  mg.bound(std::abs(b.c_plus_scaled - 1.568), std::max(tol * 1.568, tol));
  mg.within(b.c_plus / b.c_minus / 675.772, 1.0, tol);
  std::vector<double> grid = log_grid(1e2, 1e8, 2);
  for (const ZooEntry& e : zoo()) {
    for (double theta : {kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0}) {
      BandReport rep = certified_band(e.model, grid, theta);
      mg.require(rep.pass);
      mg.slack(rep.min_margin);
    }
  }
  return mg;
}

// 3. Power-log asymptotics: fitted exponents against the log-domain abscissa
//    log log(1/t_ring(r)), which tracks log log r without the finite-range
//    drift of the raw variable.
inline Margin crit_powerlog_exponents() {
  Margin mg;
  HamiltonianModel m = make_powerlog(PowerLogParams{2.0, 1.0, 3.0});
  std::vector<double> grid = log_grid(1e4, 1e12, 2);
  std::vector<double> x(grid.size()), yq(grid.size()), ya(grid.size()), yl(grid.size());
  parallel_for(grid.size(), [&](size_t i) {
    const double r = grid[i];
    Envelopes env = envelopes(m, r);
    x[i] = std::log(std::log(1.0 / env.t_ring));
    yq[i] = std::log(eval_q(m, cplx{0, r}, 1e-3 * env.A, 1e-4).q.imag());
    ya[i] = std::log(env.A);
    yl[i] = std::log(env.L);
  });
  mg.within(fit_slope(x, yq), -2.0, 0.2);
  mg.within(fit_slope(x, ya), -1.0, 0.15);
  mg.within(fit_slope(x, yl), -3.0, 0.25);
  return mg;
}

// 4. Node formulas: |computed log r - predicted| bounded with no trend in n.
inline Margin crit_node_formulas() {
  Margin mg;
  for (HplParams prm : {HplParams{0.5, 0.5}, HplParams{1.0 / 3.0, 2.0 / 3.0}}) {
    HplModel hm = make_hpl(prm);
    std::vector<double> ns, dev_ring, dev_hat;
    for (int n = 3; n <= 12; ++n) {
      ns.push_back(n);
      dev_ring.push_back(std::abs(log_r_ring(hm.model, hm.nodes.t[n]) -
                                  hpl_predict(prm, HplWhich::r_ring_t, n)));
      dev_hat.push_back(std::abs(log_r_hat(hm.model, hm.nodes.t[n]) -
                                 hpl_predict(prm, HplWhich::r_hat_t, n)));
    }
    for (size_t i = 0; i < ns.size(); ++i) {
      mg.bound(dev_ring[i], 4.0);
      mg.bound(dev_hat[i], 4.0);
    }
    mg.within(fit_slope(ns, dev_ring), 0.0, 0.1);
    mg.within(fit_slope(ns, dev_hat), 0.0, 0.1);
  }
  return mg;
}

// 5. Two-regime behavior at the construction nodes, plus the p^{n/2} decay of
//    Im q / A at the r_hat nodes.
inline Margin crit_regimes() {
  Margin mg;
  HplModel hm = make_hpl(HplParams{0.5, 0.5});
  const double C = 50.0, logC = std::log(C);
  std::vector<double> ratio_a_hat;
  for (int n = 3; n <= 10; ++n) {
    const double tn = hm.nodes.t[n];
    const double r1 = std::exp(log_r_ring(hm.model, tn));
    Envelopes e1 = envelopes(hm.model, r1);
    const double im1 = eval_q(hm.model, cplx{0, r1}, 1e-4 * e1.A, 1e-7).q.imag();
    mg.bound(std::abs(std::log(im1 / e1.A)), logC);
    const double r2 = std::exp(log_r_hat(hm.model, tn));
    Envelopes e2 = envelopes(hm.model, r2);
    const double im2 = eval_q(hm.model, cplx{0, r2}, 1e-4 * e2.A, 1e-7).q.imag();
    mg.bound(std::abs(std::log(im2 / e2.L)), logC);
    ratio_a_hat.push_back(im2 / e2.A);
  }
  for (size_t i = 2; i + 1 < ratio_a_hat.size(); ++i)  // n = 5..9 vs n+1
    mg.slack(ratio_a_hat[i] / ratio_a_hat[i + 1] / 1.2 - 1.0);
  return mg;
}

// 6. |q| growth exponent delta = log l / log(pl) at the xi nodes.
inline Margin crit_delta_exponent() {
  Margin mg;
  const double logC = std::log(50.0);
  for (HplParams prm : {HplParams{0.5, 0.5}, HplParams{1.0 / 3.0, 2.0 / 3.0}}) {
    HplModel hm = make_hpl(prm);
    for (int n = 3; n <= 10; ++n) {
      const double lr = log_r_ring(hm.model, hm.nodes.xi[n]);
      const double r = std::exp(lr);
      Envelopes env = envelopes(hm.model, r);
      const cplx q = eval_q(hm.model, cplx{0, r}, 1e-4 * env.A, 1e-7).q;
      mg.bound(std::abs(std::log(std::abs(q)) - hm.delta() * lr), logC);
    }
  }
  return mg;
}

// 7. Free Sturm-Liouville problem: m(ir) = i sqrt(ir), constant ratios.
inline Margin crit_sl_free() {
  Margin mg;
  SLProblem pr;
  HamiltonianModel m = sl_to_hamiltonian(pr);
  std::vector<double> grid = log_grid(1.0, 1e4, 2);
  for (double r : grid) {
    const cplx want = cplx{0, 1} * std::sqrt(cplx{0, r});
    mg.bound(std::abs(sl_m(m, pr, cplx{0, r}) - want) / std::abs(want), 1e-6);
  }
  T9Report rep = theorem_t9_check(pr, grid);
  mg.bound(rep.spread_im, 0.01);
  mg.bound(rep.spread_inv, 0.01);
  return mg;
}

// 8. Krein strings: uniform-string ratio equals 12^{1/4}/sqrt(2); a two-atom
//    string stays inside a factor-10 band over four decades.
inline Margin crit_strings() {
  Margin mg;
  const double oracle = std::pow(12.0, 0.25) / std::sqrt(2.0);
  A41Report uni = theorem_a41_check(uniform_string(), log_grid(1.0, 1e4, 2));
  for (const A41Record& rec : uni.records)
    mg.bound(std::abs(rec.ratio - oracle), 1e-3);
  KreinString two = jump_string({{0.0, 1.0}, {1.0, 1.0}});
  A41Report atoms = theorem_a41_check(two, log_grid(1.5, 1.5e4, 2));
  mg.bound(atoms.C, 10.0);
  return mg;
}

// 9. Randomized property suites over the model zoo, fixed recorded seed.
inline Margin crit_properties() {
  Margin mg;
  auto models = zoo();
  std::mt19937 rng(kSeed);
  // 80 cases: unimodular transfer matrices, certified nested disks.
  for (int it = 0; it < 80; ++it) {
    const ZooEntry& e = models[it % models.size()];
    const double r = rand_log(rng, e.r_lo, e.r_hi);
    std::uniform_real_distribution<double> uth(0.15, kPi - 0.15);
    const cplx z = r * std::exp(cplx{0, uth(rng)});
    const double th = t_hat(e.model, r);
    Mat2 w = propagate(e.model, z, th * rand_log(rng, 0.25, 1.0),
                       th * rand_log(rng, 1.0, 4.0), 1e-11);
    mg.bound(std::abs(w.det() - 1.0), 1e-10 * std::max(1.0, w.norm() * w.norm()));
    QResult q = eval_q(e.model, cplx{0, r}, 0.0, 1e-6);  // nesting enforced inside
    mg.bound(q.error_radius, 1e-4 * std::abs(q.q));
  }
  // 40 cases: Loewner monotonicity of Omega.
  for (int it = 0; it < 40; ++it) {
    const ZooEntry& e = models[it % models.size()];
    const double r = rand_log(rng, e.r_lo, e.r_hi);
    double t1 = t_hat(e.model, r) * rand_log(rng, 0.5, 1.0);
    double t2 = t1 * rand_log(rng, 1.0, 8.0);
    Omega o1 = omega(e.model, t1), o2 = omega(e.model, t2);
    const double d1 = o2.omega1 - o1.omega1, d2 = o2.omega2 - o1.omega2;
    const double d3 = o2.omega3 - o1.omega3;
    const double scale = std::max(d1 * d2, 1e-300);
    mg.require(d1 >= 0 && d2 >= 0);
    mg.slack((d1 * d2 - d3 * d3) / scale + 1e-9);
  }
  // 40 cases: Herglotz monotonicity of r Im q and r Im(-1/q).
  for (int it = 0; it < 40; ++it) {
    const ZooEntry& e = models[it % models.size()];
    const double r1 = rand_log(rng, e.r_lo, 0.25 * e.r_hi);
    const double r2 = r1 * rand_log(rng, 1.05, 4.0);
    const cplx qa = eval_q(e.model, cplx{0, r1}, 0.0, 1e-7).q;
    const cplx qb = eval_q(e.model, cplx{0, r2}, 0.0, 1e-7).q;
    mg.slack((r2 * qb.imag() / (r1 * qa.imag()) - 1.0) + 1e-6);
    mg.slack((r2 * (-1.0 / qb).imag() / (r1 * (-1.0 / qa).imag()) - 1.0) + 1e-6);
  }
  // 40 cases: tangent vs tangent_pred stays inside one global band.
  for (int it = 0; it < 40; ++it) {
    const ZooEntry& e = models[it % models.size()];
    EstimateRecord rec = estimate_at(e.model, rand_log(rng, e.r_lo, e.r_hi));
    const double ratio = rec.tangent / rec.tangent_pred;
    mg.require(ratio > 0.1 && ratio < 10.0);
    mg.slack(std::min(ratio / 0.1 - 1.0, 10.0 / ratio - 1.0));
  }
  // Off-diagonal monotonicity on the three listed pairs.
  HamiltonianModel pl = make_powerlog(PowerLogParams{2.0, 1.0, 3.0});
  struct Pair { HamiltonianModel a, b; double r_lo, r_hi; };
  std::vector<Pair> pairs = {
      {make_hpl(HplParams{0.5, 0.5}).model,
       diagonal_part(make_hpl(HplParams{0.5, 0.5}).model), 1e3, 1e5},
      {make_r3_variant(HplParams{0.5, 0.8}).model,
       diagonal_part(make_r3_variant(HplParams{0.5, 0.8}).model), 1e3, 1e5},
      {pl, diagonal_part(pl), 1e3, 1e5}};
  for (const Pair& p : pairs) {
    std::vector<double> tg;
    for (double r : log_grid(p.r_lo, p.r_hi, 1)) tg.push_back(t_hat(p.a, r));
    std::sort(tg.begin(), tg.end());
    OffdiagReport rep = offdiag_monotonicity_check(p.a, p.b, tg);
    mg.require(rep.pass);
    mg.bound(rep.C, 10.0);
  }
  return mg;
}

// 10. Tail diagnostics on H = I: exact y74 quantity, Stieltjes mass 2r/pi,
//     and the three closed-form at0 classifications.
inline Margin crit_tails() {
  Margin mg;
  HamiltonianModel id = identity_model();
  Y74Report y = y74_quantity(id, [](double r) { return r; }, log_grid(1e-6, 1.0, 2));
  for (double v : y.quantity) mg.within(v, 1.0, 1e-12);
  for (double r : {1.0, 10.0}) mg.within(mu_tilde(id, r) / (2.0 * r / kPi), 1.0, 0.02);
  At0Report fin = at0_check(id, [](double) { return 1.0; });
  mg.require(!fin.lhs_divergent && !fin.rhs_divergent);
  At0Report div = at0_check(id, [](double r) { return r * r; });
  mg.require(div.lhs_divergent && div.rhs_divergent);
  At0Report zero = at0_check(id, [](double) { return 0.0; });
  mg.require(!zero.lhs_divergent && !zero.rhs_divergent);
  return mg;
}

// 11. Slow variation: powerlog decays below 0.1 with a negative trend, the
//     oscillating-angle model stays bounded away from zero.
inline Margin crit_slow_variation() {
  Margin mg;
  std::vector<double> grid = log_grid(1e7, 1e8, 4);
  HamiltonianModel pl = make_powerlog(PowerLogParams{2.0, 1.0, 3.0});
  auto recs = slow_variation(pl, 2.0, grid);
  mg.bound(recs.back().deviation, 0.1);
  std::vector<double> x, y;
  for (const SlowVarRecord& rec : recs) {
    x.push_back(std::log(rec.r));
    y.push_back(rec.deviation);
  }
  mg.slack(-fit_slope(x, y));
  HamiltonianModel hpl = make_hpl(HplParams{0.5, 0.5}).model;
  double worst = 0;
  for (const SlowVarRecord& rec : slow_variation(hpl, 2.0, grid))
    worst = std::max(worst, rec.deviation);
  mg.slack(worst / 0.2 - 1.0);
  return mg;
}


inline void run_one(CheckSink& sink, const std::string& name, Margin (*fn)(),
                    const std::vector<std::string>& only) {
  if (!only.empty()) {
    bool wanted = false;
    for (const std::string& w : only) wanted = wanted || name == w;
    if (!wanted) return;
  }
  try {
    Margin mg = fn();
    sink(name, mg.ok, mg.value);
  } catch (const std::exception& ex) {
    std::cerr << name << ": " << ex.what() << std::endl;
    sink(name, false, -1.0);
  }
  std::cout.flush();
}

// Runs every criterion (or the named subset); sink.all_pass reports the verdict.
inline void run_all(CheckSink& sink, const std::vector<std::string>& only = {}) {
  run_one(sink, "constant_oracle", crit_constant_oracle, only);
  run_one(sink, "remark22_band", crit_band, only);
  run_one(sink, "powerlog_exponents", crit_powerlog_exponents, only);
  run_one(sink, "node_formulas", crit_node_formulas, only);
  run_one(sink, "two_regimes", crit_regimes, only);
  run_one(sink, "delta_exponent", crit_delta_exponent, only);
  run_one(sink, "sl_free_case", crit_sl_free, only);
  run_one(sink, "krein_strings", crit_strings, only);
  run_one(sink, "property_suites", crit_properties, only);
  run_one(sink, "tail_diagnostics", crit_tails, only);
  run_one(sink, "slow_variation", crit_slow_variation, only);
}

}  // namespace acceptance
}  // namespace qweyl
