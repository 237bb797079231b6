#pragma once

#include <algorithm>

#include "qweyl/scales.hpp"

namespace qweyl {

struct Mat2 {
  cplx a11{1, 0}, a12{0, 0}, a21{0, 0}, a22{1, 0};

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  cplx det() const { return a11 * a22 - a12 * a21; }
  double norm() const {
    return std::max(std::max(std::abs(a11), std::abs(a12)),
                    std::max(std::abs(a21), std::abs(a22)));
  }
};

inline double mat_dist(const Mat2& x, const Mat2& y) {
  return std::max(std::max(std::abs(x.a11 - y.a11), std::abs(x.a12 - y.a12)),
                  std::max(std::abs(x.a21 - y.a21), std::abs(x.a22 - y.a22)));
}

// exp(-z * DeltaOmega * J) for DeltaOmega = [[d1,d3],[d3,d2]], J = [[0,-1],[1,0]].
// M := DeltaOmega*J = [[d3,-d1],[d2,-d3]] satisfies M^2 = -det(DeltaOmega) I, so
// exp(sM) = cos(mu s) I + sinc(mu s) s M with mu = sqrt(det DeltaOmega) >= 0.
inline Mat2 exp_increment(double d1, double d2, double d3, cplx z) {
  const double det = std::max(0.0, std::fma(d1, d2, -d3 * d3));
  const double mu = std::sqrt(det);
  const cplx s = -z;
  cplx c, sn;  // cos(mu s), sinc(mu s)*s
  const cplx ms = mu * s;
  if (std::abs(ms) < 1e-8) {
    // series: cos(x) = 1 - x^2/2, sinc(x) = 1 - x^2/6 (covers the nilpotent case)
    c = 1.0 - 0.5 * ms * ms;
    sn = s * (1.0 - ms * ms / 6.0);
  } else {
    c = std::cos(ms);
    sn = std::sin(ms) / mu;
  }
  return {c + sn * d3, -sn * d1, sn * d2, c - sn * d3};
}

struct WeylDisk {
  cplx center{0, 0};
  double radius = kInf;
};

// Image of the closed upper half plane under tau -> (w11 tau + w12)/(w21 tau + w22).
inline WeylDisk weyl_disk(const Mat2& w) {
  const cplx den = w.a21 * std::conj(w.a22) - std::conj(w.a21) * w.a22;
  const double ad = std::abs(den);
  if (!(ad > 0) || !std::isfinite(ad))
    throw DegenerateDisk("weyl_disk: half-plane image is not a bounded disk");
  WeylDisk d;
  d.center = (w.a11 * std::conj(w.a22) - w.a12 * std::conj(w.a21)) / den;
  d.radius = std::abs(w.det()) / ad;
  if (!std::isfinite(d.radius) || !std::isfinite(std::abs(d.center)))
    throw DegenerateDisk("weyl_disk: non-finite disk data");
  return d;
}

namespace detail {

inline Mat2 piece_step(const HamiltonianModel& m, const Piece* p, double ta, double tb,
                       cplx z) {
  Omega d = delta_omega(m, ta, tb);
  double d3 = d.omega3;
  if (p && p->rank_one) d3 = p->sign3 * std::sqrt(std::max(0.0, d.omega1 * d.omega2));
  return exp_increment(d.omega1, d.omega2, d3, z);
}

// exp(M) for traceless complex M: eigenvalues +-w with w^2 = -det M.
inline Mat2 exp_traceless(const Mat2& M) {
  const cplx w2 = M.a11 * M.a11 + M.a12 * M.a21;
  cplx ch, shc;  // cosh(w), sinh(w)/w
  if (std::abs(w2) < 1e-12) {
    ch = 1.0 + 0.5 * w2;
    shc = 1.0 + w2 / 6.0;
  } else {
    const cplx w = std::sqrt(w2);
    ch = std::cosh(w);
    shc = std::sinh(w) / w;
  }
  return {ch + shc * M.a11, shc * M.a12, shc * M.a21, ch - shc * M.a11};
}

// Fourth-order Magnus step over [ta,tb]: the exact primitive increment gives
// the first Magnus term, the two-point Gauss commutator restores order 4 in
// the oscillatory regime.
inline Mat2 magnus4_step(const HamiltonianModel& m, double ta, double tb, cplx z) {
  Omega d = delta_omega(m, ta, tb);
  const double h = tb - ta;
  const double sq3 = 1.7320508075688772;
  const Density H1 = m.density(ta + (0.5 - sq3 / 6.0) * h);
  const Density H2 = m.density(ta + (0.5 + sq3 / 6.0) * h);
  // A_i = -z H_i J with H J = [[h3,-h1],[h2,-h3]]; commutator term
  // (sqrt(3)/12) h^2 [A2, A1] = (sqrt(3)/12) h^2 z^2 [H2 J, H1 J].
  auto hj = [](const Density& d0) {
    return std::array<double, 4>{d0.h3, -d0.h1, d0.h2, -d0.h3};
  };
  const auto B1 = hj(H1), B2 = hj(H2);
  const cplx fac = -(sq3 / 12.0) * h * h * z * z;
  Mat2 M{-z * d.omega3 + fac * (B2[0] * B1[0] + B2[1] * B1[2] -
                                (B1[0] * B2[0] + B1[1] * B2[2])),
         z * d.omega1 + fac * (B2[0] * B1[1] + B2[1] * B1[3] -
                               (B1[0] * B2[1] + B1[1] * B2[3])),
         -z * d.omega2 + fac * (B2[2] * B1[0] + B2[3] * B1[2] -
                                (B1[2] * B2[0] + B1[3] * B2[2])),
         z * d.omega3 + fac * (B2[2] * B1[1] + B2[3] * B1[3] -
                               (B1[2] * B2[1] + B1[3] * B2[3]))};
  return exp_traceless(M);
}

// Adaptive propagation over [ta,tb] with no constant-direction structure: the
// one-step exponential uses the exact primitive increment, so the local error
// is only the Magnus commutator term; control it by step halving.
inline void propagate_adaptive(const HamiltonianModel& m, cplx z, double ta, double tb,
                               double tol_seg, Mat2& w) {
  const double range = tb - ta;
  if (!(range > 0)) return;
  const double hmin = 1e-14 * (range + std::abs(tb));
  double s = ta;
  double h = range;
  while (s < tb) {
    if (tb - s <= hmin) {  // roundoff sliver: one closing step
      w = w * magnus4_step(m, s, tb, z);
      break;
    }
    h = std::min(h, tb - s);
    const double mid = s + 0.5 * h;
    Mat2 one = magnus4_step(m, s, s + h, z);
    Mat2 two = magnus4_step(m, s, mid, z) * magnus4_step(m, mid, s + h, z);
    const double err = mat_dist(one, two);
    // Floor at roundoff: below ~4 ulp the halving comparison only sees noise.
    const double loc_tol =
        std::max(tol_seg * (h / range), 1e-15) * std::max(1.0, two.norm());
    if (err <= loc_tol || h <= 8 * hmin) {
      w = w * two;
      s += h;
      if (err < loc_tol / 32.0) h *= 2.0;
    } else {
      h *= 0.5;
      if (h < hmin)
        throw StepUnderflow("propagate: step size underflow near t=" +
                            std::to_string(s));
    }
  }
}

inline const Piece* piece_containing(const HamiltonianModel& m, double t) {
  for (const Piece& p : m.pieces)
    if (t >= p.t0 && t < p.t1) return &p;
  return nullptr;
}

}  // namespace detail

// Transfer matrix of y' = zJHy over [ta,tb], normalized to I at ta:
// W(tb) = W(ta) * exp over each increment; here W(ta) = I.
inline Mat2 propagate(const HamiltonianModel& m, cplx z, double ta, double tb,
                      double tol = 1e-11) {
  if (!(tb >= ta)) throw OutOfDomain("propagate: tb < ta");
  Mat2 w;
  double s = ta;
  // Splitting points: piece boundaries and breakpoints inside (ta,tb).
  std::vector<double> cuts;
  for (const Piece& p : m.pieces) {
    if (p.t0 > ta && p.t0 < tb) cuts.push_back(p.t0);
    if (p.t1 > ta && p.t1 < tb) cuts.push_back(p.t1);
  }
  for (double bp : m.breakpoints)
    if (bp > ta && bp < tb) cuts.push_back(bp);
  cuts.push_back(tb);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (double c : cuts) {
    if (!(c > s)) continue;
    const Piece* p = detail::piece_containing(m, 0.5 * (s + c));
    if (p)
      w = w * detail::piece_step(m, p, s, c, z);
    else
      detail::propagate_adaptive(m, z, s, c, tol, w);
    s = c;
  }
  return w;
}

struct QResult {
  cplx q{0, 0};
  double error_radius = kInf;
  double t_start = 0;
  double t_final = 0;
  int checkpoints = 0;
};

// Weyl coefficient q_H(z) with a certified error radius: propagate from a depth
// where the transfer matrix is indistinguishable from I, track the nested Weyl
// disks at geometrically growing checkpoints, and return the last center.
inline QResult eval_q(const HamiltonianModel& m, cplx z, double tol_abs = 0.0,
                      double tol_rel = 1e-9, double eta = 2.0) {
  if (!(z.imag() > 0)) throw OutOfDomain("eval_q: z must lie in the upper half plane");
  const double r = std::abs(z);
  const double t0 = t_hat(m, r, eta);
  // Descend to t_start where the skipped prefix is negligible.
  double t_start = t0;
  double trunc = 0;
  for (int k = 0; k < 1100; ++k) {
    Omega o = omega(m, t_start);
    trunc = r * (o.omega1 + o.omega2);
    if (trunc <= 1e-15) break;
    double next = m.a + 0.5 * (t_start - m.a);
    if (next <= std::max(m.a, m.t_min_resolved)) break;
    t_start = next;
  }
  QResult res;
  res.t_start = t_start;
  // Propagation accuracy tied to the requested disk accuracy; the certified
  // radius below is inflated by the same amount. Once the first disk reveals
  // the magnitude of q, an absolute tolerance is folded in as a relative one
  // (ptol only ever loosens, so the final value bounds all accumulated error).
  double ptol =
      std::clamp(1e-3 * std::max(tol_rel, 1e-9), 1e-13, 1e-8);
  Mat2 w;
  WeylDisk prev;
  bool have_prev = false;
  double t = std::max(t0, t_start);
  double t_prev = t_start;
  for (int k = 0; k < 110; ++k) {
    w = w * propagate(m, z, t_prev, t, ptol);
    t_prev = t;
    ++res.checkpoints;
    WeylDisk d;
    bool got = true;
    try {
      d = weyl_disk(w);
    } catch (const DegenerateDisk&) {
      got = false;  // disk still the whole half plane this early
    }
    if (got) {
      if (have_prev) {
        const double slack =
            prev.radius * 1e-9 + 20 * ptol * (std::abs(prev.center) + prev.radius);
        if (std::abs(d.center - prev.center) + d.radius > prev.radius + slack)
          throw NestingViolation("eval_q: Weyl disks failed to nest at t=" +
                                 std::to_string(t));
      }
      prev = d;
      have_prev = true;
      if (tol_abs > 0) {
        const double eff_rel =
            std::max(tol_rel, tol_abs / (std::abs(d.center) + d.radius + 1e-300));
        ptol = std::max(ptol, std::clamp(1e-3 * std::max(eff_rel, 1e-9), 1e-13, 1e-8));
      }
      if (d.radius <= tol_abs + tol_rel * std::abs(d.center)) {
        res.q = d.center;
        res.t_final = t;
        res.error_radius =
            d.radius * (1 + 1e-6) + 20 * ptol * (std::abs(d.center) + d.radius) +
            2 * trunc * (1 + std::abs(d.center)) * (1 + std::abs(d.center));
        return res;
      }
    }
    t = (m.b == kInf) ? m.a + 1.5 * (t - m.a)
                      : std::min(m.a + 1.5 * (t - m.a), m.b - (m.b - t) / 1.5);
  }
  throw NoConvergence("eval_q: disk radius did not reach tolerance for model " + m.name);
}

}  // namespace qweyl
