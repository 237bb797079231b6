#pragma once

#include "qweyl/weyl.hpp"

namespace qweyl {

struct EstimateRecord {
  double r = 0;
  cplx q{0, 0};
  double im_q = 0;
  double abs_q = 0;
  double A = 0;
  double L = 0;
  double t_ring = 0;
  double t_hat = 0;
  double omega1_hat = 0;
  double omega2_hat = 0;
  double omega3_hat = 0;
  double ratio_im = 0;      // Im q * r * omega2(t_hat)
  double ratio_inv = 0;     // (Im q / |q|^2) * r * omega1(t_hat)
  double ratio_center = 0;  // |q*omega2(t_hat) - omega3(t_hat)| * r
  double tangent = 0;       // Im q / |q|
  double tangent_pred = 0;  // sqrt(det Omega / (omega1 omega2)) at t_hat
  double error_radius = 0;  // eval_q certificate
};

// One Theorem-1-style record at a single r; tolerance tied to the lower
// envelope so the certificate sits well below every compared quantity.
inline EstimateRecord estimate_at(const HamiltonianModel& m, double r,
                                  double eta = 2.0) {
  EstimateRecord rec;
  rec.r = r;
  Envelopes env = envelopes(m, r, eta);
  rec.A = env.A;
  rec.L = env.L;
  rec.t_ring = env.t_ring;
  rec.t_hat = t_hat(m, r, eta);
  Omega oh = omega(m, rec.t_hat);
  rec.omega1_hat = oh.omega1;
  rec.omega2_hat = oh.omega2;
  rec.omega3_hat = oh.omega3;
  QResult qr = eval_q(m, cplx{0, r}, 1e-4 * env.A, 1e-7, eta);
  rec.q = qr.q;
  rec.error_radius = qr.error_radius;
  rec.im_q = qr.q.imag();
  rec.abs_q = std::abs(qr.q);
  rec.ratio_im = rec.im_q * r * oh.omega2;
  rec.ratio_inv = rec.im_q / (rec.abs_q * rec.abs_q) * r * oh.omega1;
  rec.ratio_center = std::abs(qr.q * oh.omega2 - oh.omega3) * r;
  rec.tangent = rec.im_q / rec.abs_q;
  const double omf2 = m.one_minus_f_sq
                          ? m.one_minus_f_sq(rec.t_hat)
                          : std::exp(log_det_omega(m, rec.t_hat) -
                                     log_omega1omega2(m, rec.t_hat));
  rec.tangent_pred = std::sqrt(std::max(0.0, omf2));
  return rec;
}

inline std::vector<EstimateRecord> theorem1_report(const HamiltonianModel& m,
                                                   const std::vector<double>& r_grid,
                                                   double eta = 2.0) {
  std::vector<EstimateRecord> out(r_grid.size());
  parallel_for(r_grid.size(), [&](size_t i) { out[i] = estimate_at(m, r_grid[i], eta); });
  return out;
}

// ---------------------------------------------------------------------------
// Remark-2.2-style certified band along the ray z = r e^{i theta}.
// ---------------------------------------------------------------------------

struct BandConstants {
  double eta = 0;
  double theta = 0;
  double sigma = 0;
  double c_minus = 0;  // raw constants of the displayed inequalities
  double c_plus = 0;
  double c_minus_scaled = 0;  // multiplied by eta/2, the quoted normalization
  double c_plus_scaled = 0;
};

inline BandConstants band_constants(double eta, double theta) {
  if (!(eta > 0) || !(eta < 1.0 - 1.0 / std::sqrt(2.0)))
    throw InvalidParams("band_constants: need eta in (0, 1 - 1/sqrt(2))");
  if (!(theta > 0) || !(theta < kPi))
    throw InvalidParams("band_constants: need theta in (0, pi)");
  BandConstants b;
  b.eta = eta;
  b.theta = theta;
  b.sigma = std::pow(1.0 - eta, -2.0) - 1.0;
  const double st = std::sin(theta), ct = std::abs(std::cos(theta));
  b.c_minus = eta * st / (2.0 * (1.0 + ct)) * (1.0 - b.sigma) / (1.0 + b.sigma);
  b.c_plus = (b.sigma + 2.0 / (eta * st)) / (1.0 - b.sigma);
  b.c_minus_scaled = b.c_minus * eta / 2.0;
  b.c_plus_scaled = b.c_plus * eta / 2.0;
  return b;
}

struct BandPoint {
  double r = 0;
  double im_q = 0;
  double lower = 0;  // c_-(eta,theta) * (eta/2) / (r omega2(t_hat_eta(r)))
  double upper = 0;
  double margin = 0;  // min slack to either bound, in units of the band center
  bool pass = false;
};

struct BandReport {
  BandConstants constants;
  std::vector<BandPoint> points;
  bool pass = true;
  double min_margin = kInf;
};

inline BandReport certified_band(const HamiltonianModel& m,
                                 const std::vector<double>& r_grid, double theta,
                                 double eta = 0.13833) {
  BandReport rep;
  rep.constants = band_constants(eta, theta);
  rep.points.resize(r_grid.size());
  parallel_for(r_grid.size(), [&](size_t i) {
    const double r = r_grid[i];
    BandPoint pt;
    pt.r = r;
    const double th = t_hat(m, r, eta);
    Omega oh = omega(m, th);
    const double base = (eta / 2.0) / (r * oh.omega2);
    pt.lower = rep.constants.c_minus * base;
    pt.upper = rep.constants.c_plus * base;
    cplx z = r * cplx{std::cos(theta), std::sin(theta)};
    QResult q = eval_q(m, z, 1e-4 * base, 1e-9, 2.0);
    pt.im_q = q.q.imag();
    const double cert = q.error_radius;
    pt.pass = (pt.im_q + cert >= pt.lower) && (pt.im_q - cert <= pt.upper);
    pt.margin = std::min(pt.im_q + cert - pt.lower, pt.upper - (pt.im_q - cert)) / base;
    rep.points[i] = pt;
  });
  for (const BandPoint& pt : rep.points) {
    rep.pass = rep.pass && pt.pass;
    rep.min_margin = std::min(rep.min_margin, pt.margin);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Proposition-2.4-style dimensionless ratios.
// ---------------------------------------------------------------------------

struct PropA4Record {
  double r = 0;
  double tangent_ratio = 0;  // tangent / tangent_pred
  double mass_ratio = 0;     // |q(i r_ring(t_hat(r)))| / |q(ir)|
};

inline std::vector<PropA4Record> prop_a4_report(const HamiltonianModel& m,
                                                const std::vector<double>& r_grid) {
  std::vector<PropA4Record> out(r_grid.size());
  parallel_for(r_grid.size(), [&](size_t i) {
    const double r = r_grid[i];
    EstimateRecord rec = estimate_at(m, r);
    PropA4Record pr;
    pr.r = r;
    pr.tangent_ratio = rec.tangent / rec.tangent_pred;
    const double r2 = r_ring(m, rec.t_hat);
    QResult q2 = eval_q(m, cplx{0, r2}, 1e-4 * rec.A, 1e-7);
    pr.mass_ratio = std::abs(q2.q) / rec.abs_q;
    out[i] = pr;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Corollary-2.5-style comparison along z = ikr.
// ---------------------------------------------------------------------------

struct CorT5Record {
  double r = 0;
  double ratio_imk = 0;     // Im q(ikr) / |q(ikr) - omega3/omega2(t_hat(r))|
  double ratio_cross = 0;   // |q(ikr) - c| / |q(ir) - c|, c = omega3/omega2(t_hat(r))
};

struct CorT5Report {
  std::vector<CorT5Record> records;
  double max_dev = 0;  // max over records of max(ratio, 1/ratio) for both ratios
};

inline CorT5Report cor_t5_check(const HamiltonianModel& m,
                                const std::vector<double>& r_grid, double k) {
  if (!(k > 0)) throw InvalidParams("cor_t5_check: k must be positive");
  CorT5Report rep;
  rep.records.resize(r_grid.size());
  parallel_for(r_grid.size(), [&](size_t i) {
    const double r = r_grid[i];
    const double th = t_hat(m, r);
    Omega oh = omega(m, th);
    const cplx c{oh.omega3 / oh.omega2, 0.0};
    Envelopes env = envelopes(m, r);
    QResult q1 = eval_q(m, cplx{0, r}, 1e-4 * env.A, 1e-7);
    QResult qk = eval_q(m, cplx{0, k * r}, 1e-4 * env.A, 1e-7);
    CorT5Record rec;
    rec.r = r;
    rec.ratio_imk = qk.q.imag() / std::abs(qk.q - c);
    rec.ratio_cross = std::abs(qk.q - c) / std::abs(q1.q - c);
    rep.records[i] = rec;
  });
  for (const CorT5Record& rec : rep.records) {
    for (double v : {rec.ratio_imk, rec.ratio_cross})
      rep.max_dev = std::max(rep.max_dev, std::max(v, 1.0 / v));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Slow variation along dilations (Theorem-4.2b-style diagnostics).
// ---------------------------------------------------------------------------

struct SlowVarRecord {
  double r = 0;
  double deviation = 0;        // |q(ikr)/q(ir) - 1|
  double deviation_delta0 = 0; // delta = 0 variant (trivially 0)
  double deviation_delta_half = 0;  // |q(ir * tangent^{1/2})/q(ir) - 1|
};

inline std::vector<SlowVarRecord> slow_variation(const HamiltonianModel& m, double k,
                                                 const std::vector<double>& r_grid) {
  if (!(k > 0)) throw InvalidParams("slow_variation: k must be positive");
  std::vector<SlowVarRecord> out(r_grid.size());
  parallel_for(r_grid.size(), [&](size_t i) {
    const double r = r_grid[i];
    Envelopes env = envelopes(m, r);
    const double tol = 1e-4 * env.A;
    QResult q1 = eval_q(m, cplx{0, r}, tol, 1e-7);
    QResult qk = eval_q(m, cplx{0, k * r}, tol, 1e-7);
    SlowVarRecord rec;
    rec.r = r;
    rec.deviation = std::abs(qk.q / q1.q - 1.0);
    rec.deviation_delta0 = 0.0;
    const double tangent = q1.q.imag() / std::abs(q1.q);
    const double r_half = r * std::sqrt(tangent);
    QResult qh = eval_q(m, cplx{0, r_half}, tol, 1e-7);
    rec.deviation_delta_half = std::abs(qh.q / q1.q - 1.0);
    out[i] = rec;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Corollary-2.3-style off-diagonal monotonicity comparison.
// ---------------------------------------------------------------------------

struct OffdiagReport {
  double C = 0;          // max over grid of Im q_A / Im q_B at matched r
  double trend_slope = 0;  // linear fit of log ratio against log t
  bool pass = false;
  std::vector<double> t;
  std::vector<double> ratio;
};

inline OffdiagReport offdiag_monotonicity_check(const HamiltonianModel& ma,
                                                const HamiltonianModel& mb,
                                                const std::vector<double>& t_grid) {
  OffdiagReport rep;
  rep.t = t_grid;
  rep.ratio.resize(t_grid.size());
  for (double t : t_grid) {
    Omega oa = omega(ma, t), ob = omega(mb, t);
    const double scale = std::abs(oa.omega3) + std::abs(ob.omega3) + 1e-300;
    if (std::abs(oa.omega3) + 1e-12 * scale < std::abs(ob.omega3))
      throw HypothesisViolated(
          "offdiag_monotonicity_check: |omega3_A| >= |omega3_B| fails at t=" +
          std::to_string(t));
  }
  parallel_for(t_grid.size(), [&](size_t i) {
    const double r = r_hat(ma, t_grid[i]);
    Envelopes envb = envelopes(mb, r);
    const double tol = 1e-4 * std::min(envelopes(ma, r).A, envb.A);
    QResult qa = eval_q(ma, cplx{0, r}, tol, 1e-7);
    QResult qb = eval_q(mb, cplx{0, r}, tol, 1e-7);
    rep.ratio[i] = qa.q.imag() / qb.q.imag();
  });
  rep.C = 0;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < t_grid.size(); ++i) {
    rep.C = std::max(rep.C, rep.ratio[i]);
    lx.push_back(std::log(t_grid[i]));
    ly.push_back(std::log(rep.ratio[i]));
  }
  // growth of the ratio as t -> 0 (r -> infinity) shows as a negative slope
  rep.trend_slope = fit_line(lx, ly).slope;
  rep.pass = rep.trend_slope >= -0.15;
  return rep;
}

// ---------------------------------------------------------------------------
// Positive increase diagnostic on sampled |q(ir)|.
// ---------------------------------------------------------------------------

enum class IncreaseVerdict { positively_increasing, inconclusive };

inline IncreaseVerdict positive_increase_diagnostic(const std::vector<double>& r,
                                                    const std::vector<double>& abs_q) {
  if (r.size() != abs_q.size() || r.size() < 8)
    throw InvalidParams("positive_increase_diagnostic: need matched samples");
  if (!(r.back() / r.front() >= 1e4))
    throw InsufficientSpan("positive_increase_diagnostic: need >= 4 decades of r");
  // log-log linear interpolation of |q| at lambda*r
  auto interp = [&](double rv) -> double {
    if (rv < r.front() || rv > r.back()) return -1.0;
    size_t j = 1;
    while (j < r.size() - 1 && r[j] < rv) ++j;
    const double x0 = std::log(r[j - 1]), x1 = std::log(r[j]);
    const double y0 = std::log(abs_q[j - 1]), y1 = std::log(abs_q[j]);
    const double s = (std::log(rv) - x0) / (x1 - x0);
    return std::exp(y0 * (1.0 - s) + y1 * s);
  };
  for (double lambda : {0.5, 0.25, 0.125}) {
    double worst = 0;
    bool any = false;
    for (size_t i = r.size() / 2; i < r.size(); ++i) {
      const double v = interp(lambda * r[i]);
      if (v < 0) continue;
      any = true;
      worst = std::max(worst, v / abs_q[i]);
    }
    if (any && worst <= 0.95) return IncreaseVerdict::positively_increasing;
  }
  return IncreaseVerdict::inconclusive;
}

}  // namespace qweyl
