#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qweyl/strings.hpp"
#include "qweyl/sturm_liouville.hpp"
#include "test_models.hpp"

using namespace qweyl;
using namespace qweyl_test;

TEST_CASE("delta_of closed forms") {
  KreinString u = uniform_string();
  for (double t : {0.5, 1.0, 7.0})
    CHECK(delta_of(u, t) == doctest::Approx(std::pow(t, 4.0) / 12.0).epsilon(1e-10));

  KreinString one = jump_string({{1.0, 3.0}});
  CHECK(delta_of(one, 10.0) == 0.0);  // rank-one measure

  KreinString two = jump_string({{1.0, 2.0}, {4.0, 5.0}});
  CHECK(delta_of(two, 5.0) == doctest::Approx(2.0 * 5.0 * 9.0).epsilon(1e-14));
  CHECK(delta_of(two, 2.0) == 0.0);
  CHECK_THROWS_AS(delta_of(two, -1.0), OutOfDomain);
}

TEST_CASE("tau_hat_and_f: uniform, two-atom, vanishing-density limit") {
  KreinString u = uniform_string();
  for (double r : {1.0, 10.0, 1e3}) {
    StringScales sc = tau_hat_and_f(u, r);
    const double pred = std::pow(12.0, 0.25) / std::sqrt(r);
    CHECK(sc.tau_hat == doctest::Approx(pred).epsilon(1e-8));
    CHECK(sc.f_r == doctest::Approx(pred).epsilon(1e-8));
  }

  KreinString two = jump_string({{0.0, 1.0}, {1.0, 1.0}});  // delta jumps to 1 at x=1
  StringScales sc = tau_hat_and_f(two, 2.0);                // 1/r^2 = 0.25 in (0,1)
  CHECK(sc.tau_hat == 1.0);
  CHECK(sc.f_r > 1.0);
  CHECK(sc.f_r < 2.0);
  CHECK(sc.f_r == doctest::Approx(1.25).epsilon(1e-14));  // convex interpolation
  CHECK_THROWS_AS(tau_hat_and_f(two, 0.5), BracketFailure);  // 1/r^2 above delta range

  KreinString p2 = power_string(2.0);  // density 2t vanishes at 0
  double prev = kInf;
  for (double r : {1e2, 1e4, 1e6}) {
    const double f = tau_hat_and_f(p2, r).f_r;
    CHECK(f < prev);
    prev = f;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("string_to_hamiltonian: uniform and jump duals") {
  HamiltonianModel hu = string_to_hamiltonian(uniform_string());
  Density d = eval_density(hu, 2.0);
  CHECK(d.h1 == 4.0);
  CHECK(d.h2 == 1.0);
  CHECK(d.h3 == 2.0);
  Omega o = omega(hu, 3.0);
  CHECK(o.omega2 == doctest::Approx(3.0));
  CHECK(det_omega(hu, 3.0) == doctest::Approx(std::pow(3.0, 4.0) / 12.0).epsilon(1e-12));

  // single jump of mass M at 0: H = diag(0,1) on (0, M], then diag(1,0)
  HamiltonianModel h1 = string_to_hamiltonian(jump_string({{0.0, 2.5}}));
  Density dj = eval_density(h1, 1.0);
  CHECK(dj.h1 == 0.0);
  CHECK(dj.h2 == 1.0);
  Density dt = eval_density(h1, 3.0);
  CHECK(dt.h1 == 1.0);
  CHECK(dt.h2 == 0.0);
  Omega oj = omega(h1, 4.0);
  CHECK(oj.omega2 == 2.5);
  CHECK(oj.omega1 == doctest::Approx(1.5));
}

TEST_CASE("delta(t) equals det Omega of the associated H at m(t)") {
  KreinString s = power_string(2.0, 3.0);
  HamiltonianModel h = string_to_hamiltonian(s);
  for (double t : {0.3, 1.0, 2.0}) {
    const double lhs = delta_of(s, t);
    const double rhs = det_omega(h, s.mass(t));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("dual of the dual inverts a strictly increasing mass") {
  KreinString s = power_string(2.0, 3.0);
  KreinString shat = power_string(0.5, std::pow(3.0, -0.5));
  for (double t : {0.2, 1.0, 5.0}) {
    CHECK(dual_mass(s, s.mass(t) * (1.0 + 1e-15)) == doctest::Approx(t).epsilon(1e-12));
    CHECK(shat.mass(s.mass(t)) == doctest::Approx(t).epsilon(1e-12));
    CHECK(dual_mass(shat, t) == doctest::Approx(s.mass(t)).epsilon(1e-10));
  }
}

TEST_CASE("theorem A41: uniform string constant ratio 12^{1/4}/sqrt(2)") {
  std::vector<double> grid = log_grid(1.0, 1e4, 2);
  A41Report rep = theorem_a41_check(uniform_string(), grid);
  const double oracle = std::pow(12.0, 0.25) / std::sqrt(2.0);
  for (const A41Record& rec : rep.records)
    CHECK(rec.ratio == doctest::Approx(oracle).epsilon(1e-3));
  CHECK(rep.C < oracle * 1.01);
}

TEST_CASE("theorem A41: two-atom string bounded over 4 decades") {
  KreinString two = jump_string({{0.0, 1.0}, {1.0, 1.0}});
  std::vector<double> grid = log_grid(1.5, 1.5e4, 2);
  A41Report rep = theorem_a41_check(two, grid);
  CHECK(rep.C < 10.0);

  // scaling the measure by 4 leaves the two-sided bound intact
  KreinString two4 = jump_string({{0.0, 4.0}, {1.0, 4.0}});
  A41Report rep4 = theorem_a41_check(two4, grid);
  CHECK(rep4.C < 10.0);
}

TEST_CASE("sl_solutions: free and trigonometric cases, Wronskian") {
  SLProblem pr;
  SLSolutions sol0 = sl_solutions(pr, 0.0);
  for (double t : {0.1, 1.0, 10.0}) {
    CHECK(sol0.c(t) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol0.s(t) == doctest::Approx(t).epsilon(1e-10));
  }
  SLSolutions sol1 = sl_solutions(pr, 1.0);
  for (double t : {0.5, 2.0, 20.0}) {
    CHECK(sol1.c(t) == doctest::Approx(std::cos(t)).epsilon(0).scale(1).epsilon(1e-8));
    CHECK(sol1.s(t) == doctest::Approx(std::sin(t)).epsilon(0).scale(1).epsilon(1e-8));
    const double wron = sol1.c(t) * sol1.ps(t) - sol1.s(t) * sol1.pc(t);
    CHECK(std::abs(wron - 1.0) < 1e-10);
  }
}

TEST_CASE("sl_to_hamiltonian free case reproduces H0") {
  SLProblem pr;
  HamiltonianModel h = sl_to_hamiltonian(pr);
  Density d = eval_density(h, 2.0);
  CHECK(d.h1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(d.h3 == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(d.h2 == doctest::Approx(4.0).epsilon(1e-10));
  // Gram determinant identity against the closed form t^4/12
  for (double t : {0.01, 0.5, 3.0})
    CHECK(det_omega(h, t) ==
          doctest::Approx(std::pow(t, 4.0) / 12.0).epsilon(1e-9));
  // m(ir) = i sqrt(ir)
  for (double r : {1.0, 1e2, 1e4}) {
    cplx m = sl_m(h, pr, cplx{0, r}, 1e-8);
    cplx pred = cplx{0, 1} * std::sqrt(cplx{0, r});
    CHECK(std::abs(m - pred) <= 1e-6 * std::abs(pred));
  }
}

TEST_CASE("theorem T9: free case constants, shifted case bounded") {
  SLProblem pr;
  std::vector<double> grid = log_grid(1.0, 1e4, 2);
  T9Report rep = theorem_t9_check(pr, grid);
  const double pred_im = std::pow(12.0, 0.75) / (3.0 * std::sqrt(2.0));
  const double pred_inv = std::pow(12.0, 0.25) / std::sqrt(2.0);
  CHECK(rep.spread_im < 0.01);
  CHECK(rep.spread_inv < 0.01);
  for (const T9Record& rec : rep.records) {
    CHECK(rec.ratio_im == doctest::Approx(pred_im).epsilon(2e-3));
    CHECK(rec.ratio_inv == doctest::Approx(pred_inv).epsilon(2e-3));
  }

  SLProblem shifted;
  shifted.xi = 1.0;
  T9Report rep1 = theorem_t9_check(shifted, grid);
  CHECK(rep1.C < 10.0);
}

TEST_CASE("free-case reduction agrees with the direct H0 model") {
  SLProblem pr;
  HamiltonianModel h_sl = sl_to_hamiltonian(pr);
  HamiltonianModel h0 = h0_model();
  for (double r : {2.0, 50.0}) {
    cplx a = eval_q(h_sl, cplx{0, r}, 0.0, 1e-9).q;
    cplx b = eval_q(h0, cplx{0, r}, 0.0, 1e-9).q;
    CHECK(std::abs(a - b) <= 1e-7 * std::abs(b));
  }
}
