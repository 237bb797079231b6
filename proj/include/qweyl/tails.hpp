#pragma once

#include "qweyl/scales.hpp"
#include "qweyl/weyl.hpp"

namespace qweyl {

struct SplitResult {
  double beta = 0;
  HamiltonianModel reduced;  // q_reduced(z) = q(z) - beta z
};

// If the model starts with an indivisible interval (a, a_ring) on which
// h2 == 0, the Weyl coefficient carries a linear term beta z with
// beta = omega1(a_ring); peel it off by restriction.  Any other prefix
// contributes to omega2 instead and leaves beta = 0.
inline SplitResult split_off_linear_term(const HamiltonianModel& m) {
  SplitResult out;
  out.reduced = m;
  IndivisibleInfo info = indivisible_info(m);
  if (info.a_ring > m.a) {
    Omega o = omega(m, info.a_ring);
    if (o.omega2 <= 1e-8 * (o.omega1 + o.omega2) && o.omega1 > 0) {
      out.beta = o.omega1;
      out.reduced = restrict_model(m, info.a_ring);
    }
  }
  return out;
}

// (1/pi) int_{x1}^{x2} Im q(x + i eps) dx for each eps in the sequence.
inline std::vector<double> stieltjes_inversion(const HamiltonianModel& m, double x1,
                                               double x2,
                                               const std::vector<double>& eps_seq) {
  std::vector<double> out(eps_seq.size(), 0.0);
  if (!(x2 > x1)) return out;
  parallel_for(eps_seq.size(), [&](size_t i) {
    const double eps = eps_seq[i];
    auto im_q = [&](double x) { return eval_q(m, cplx{x, eps}, 0.0, 1e-7).q.imag(); };
    out[i] = integrate_scalar(im_q, x1, x2, 1e-6) / kPi;
  });
  return out;
}

// mu((-r, r)) with Richardson extrapolation on the two smallest eps.
inline double mu_tilde(const HamiltonianModel& m, double r, double eps = 1e-3) {
  std::vector<double> est = stieltjes_inversion(m, -r, r, {eps, 0.5 * eps});
  return 2.0 * est[1] - est[0];
}

// Dyadic-block divergence heuristic: geometric decay of the blocks toward the
// improper end signals a convergent integral; blocks that have stopped
// decaying (ratio over 5 blocks >= 1/1.1, which also catches exactly
// logarithmic divergence) are flagged divergent-looking.
inline bool blocks_divergent(const std::vector<double>& blocks) {
  const size_t n = blocks.size();
  if (n < 6) return false;
  return blocks[n - 1] > 0 && blocks[n - 1] >= blocks[n - 6] / 1.1;
}

struct At0Options {
  double a_prime = 1.0;
  double R = 512.0;     // LHS truncation radius (tail flagged, not summed)
  int rhs_blocks = 30;  // dyadic halvings toward a_hat
  double eps = 1e-3;
};

struct At0Report {
  double lhs = 0;
  double rhs = 0;
  bool lhs_divergent = false;
  bool rhs_divergent = false;
  double variant = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> lhs_block, rhs_block;
};

// Theorem-3.1-style integrability comparison: the measure-side integral
// int_1^R mu((-r,r)) f(r)/r^3 dr against the Hamiltonian-side integral
// int_{a_hat}^{a'} (1/omega2^2) (omega2,-omega3) H (omega2,-omega3)^T
// f(det Omega^{-1/2}) dt, plus the differentiable variant when f' is given.
inline At0Report at0_check(const HamiltonianModel& m,
                           const std::function<double(double)>& f,
                           const std::function<double(double)>& fprime = nullptr,
                           const At0Options& opt = {}) {
  if (split_off_linear_term(m).beta > 0)
    throw BetaNonzero("at0_check: peel the linear term off first");
  At0Report rep;
  const double a_hat = indivisible_info(m).a_hat;
  if (!(opt.a_prime > a_hat)) throw OutOfDomain("at0_check: a_prime <= a_hat");

  auto rhs_integrand = [&](double t) {
    Density d = eval_density(m, t);
    Omega o = omega(m, t);
    const double quad = d.h1 * o.omega2 * o.omega2 -
                        2.0 * d.h3 * o.omega2 * o.omega3 +
                        d.h2 * o.omega3 * o.omega3;
    return quad / (o.omega2 * o.omega2) * f(1.0 / std::sqrt(det_omega(m, t)));
  };
  double hi = opt.a_prime;
  for (int k = 0; k < opt.rhs_blocks; ++k) {
    const double lo = a_hat + 0.5 * (hi - a_hat);
    if (lo <= m.t_min_resolved || hi - lo < 1e-12 * opt.a_prime) break;
    rep.rhs_block.push_back(integrate_scalar(rhs_integrand, lo, hi, 1e-8));
    rep.rhs += rep.rhs_block.back();
    hi = lo;
  }
  // blocks already run toward the singularity
  rep.rhs_divergent = blocks_divergent(rep.rhs_block);

  for (double r = 1.0; r < opt.R; r *= 2.0) {
    const double mt = mu_tilde(m, 2.0 * r, opt.eps);
    auto g = [&](double x) { return f(x) / (x * x * x); };
    rep.lhs_block.push_back(mt * integrate_scalar(g, r, 2.0 * r, 1e-8));
    rep.lhs += rep.lhs_block.back();
  }
  rep.lhs_divergent = blocks_divergent(rep.lhs_block);

  if (fprime) {
    auto v = [&](double t) {
      Density d = eval_density(m, t);
      Omega o = omega(m, t);
      const double ddet =
          d.h1 * o.omega2 + d.h2 * o.omega1 - 2.0 * d.h3 * o.omega3;
      const double det = det_omega(m, t);
      return ddet / (o.omega2 * std::sqrt(det)) * fprime(1.0 / std::sqrt(det));
    };
    rep.variant = integrate_scalar(v, a_hat + 0.5 * (opt.a_prime - a_hat),
                                   opt.a_prime, 1e-8);
  }
  return rep;
}

struct Y74Report {
  std::vector<double> t;
  std::vector<double> quantity;  // 1 / (omega2(t) g(det Omega(t)^{-1/2}))
  double limsup_estimate = 0;    // max over the half of the grid nearest a_hat
};

inline Y74Report y74_quantity(const HamiltonianModel& m,
                              const std::function<double(double)>& g,
                              const std::vector<double>& t_grid) {
  if (split_off_linear_term(m).beta > 0)
    throw BetaNonzero("y74_quantity: peel the linear term off first");
  Y74Report rep;
  rep.t = t_grid;
  for (double t : t_grid) {
    Omega o = omega(m, t);
    rep.quantity.push_back(1.0 / (o.omega2 * g(1.0 / std::sqrt(det_omega(m, t)))));
  }
  // grid runs toward a_hat; the limsup estimate uses the closer half
  const size_t n = t_grid.size();
  for (size_t i = 0; i < n; ++i)
    if (t_grid[i] <= t_grid[n / 2])
      rep.limsup_estimate = std::max(rep.limsup_estimate, rep.quantity[i]);
  return rep;
}

}  // namespace qweyl
