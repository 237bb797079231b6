#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qweyl/tails.hpp"
#include "test_models.hpp"

using namespace qweyl;
using namespace qweyl_test;

namespace {

// diag(1,0) on [0,1), then I: q(z) = z + i, so beta = 1.
HamiltonianModel leading_diag10() {
  HamiltonianModel m;
  m.name = "diag10_then_I";
  m.a = 0;
  m.density = [](double t) {
    return t < 1.0 ? Density{1, 0, 0} : Density{1, 1, 0};
  };
  m.primitive = [](double t) {
    return Omega{t, t, t < 1.0 ? 0.0 : t - 1.0, 0.0};
  };
  m.pieces = {Piece{0.0, 1.0, true, 0}, Piece{1.0, kInf, false, 0}};
  m.breakpoints = {1.0};
  return m;
}

HamiltonianModel leading_diag01() {
  HamiltonianModel m;
  m.name = "diag01_then_I";
  m.a = 0;
  m.density = [](double t) {
    return t < 1.0 ? Density{0, 1, 0} : Density{1, 1, 0};
  };
  m.primitive = [](double t) {
    return Omega{t, t < 1.0 ? 0.0 : t - 1.0, t, 0.0};
  };
  m.pieces = {Piece{0.0, 1.0, true, 0}, Piece{1.0, kInf, false, 0}};
  m.breakpoints = {1.0};
  return m;
}

}  // namespace

TEST_CASE("split_off_linear_term") {
  SplitResult id = split_off_linear_term(identity_model());
  CHECK(id.beta == 0.0);
  CHECK(id.reduced.a == 0.0);

  SplitResult s10 = split_off_linear_term(leading_diag10());
  CHECK(s10.beta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s10.reduced.a == doctest::Approx(1.0));
  // Poisson identity: q_{H_-}(z) = q_H(z) - beta z
  for (double r : {1.0, 10.0}) {
    cplx q_full = eval_q(leading_diag10(), cplx{0, r}, 0.0, 1e-9).q;
    cplx q_red = eval_q(s10.reduced, cplx{0, r}, 0.0, 1e-9).q;
    CHECK(std::abs(q_full - (q_red + s10.beta * cplx{0, r})) < 1e-7 * (1.0 + r));
    CHECK(std::abs(q_red - cplx{0, 1}) < 1e-7);
  }

  SplitResult s01 = split_off_linear_term(leading_diag01());
  CHECK(s01.beta == 0.0);  // type-0 prefix feeds omega2, not beta
}

TEST_CASE("stieltjes inversion on constant models") {
  std::vector<double> est = stieltjes_inversion(identity_model(), -1.0, 1.0, {1e-3});
  CHECK(est[0] == doctest::Approx(2.0 / kPi).epsilon(0.02));

  std::vector<double> est4 =
      stieltjes_inversion(diag_model(4.0, 1.0), -1.0, 1.0, {1e-3});
  CHECK(est4[0] == doctest::Approx(4.0 / kPi).epsilon(0.02));

  std::vector<double> empty = stieltjes_inversion(identity_model(), 0.5, 0.5, {1e-3});
  CHECK(empty[0] == 0.0);

  // Richardson-extrapolated mu((-r,r)) = 2r/pi within 2%
  for (double r : {1.0, 8.0})
    CHECK(mu_tilde(identity_model(), r) == doctest::Approx(2.0 * r / kPi).epsilon(0.02));
}

TEST_CASE("at0_check closed-form verdicts") {
  HamiltonianModel id = identity_model();

  At0Report both_finite = at0_check(id, [](double) { return 1.0; });
  CHECK_FALSE(both_finite.lhs_divergent);
  CHECK_FALSE(both_finite.rhs_divergent);
  CHECK(both_finite.rhs == doctest::Approx(1.0).epsilon(1e-6));  // integrand == 1

  At0Report both_div = at0_check(id, [](double r) { return r * r; });
  CHECK(both_div.lhs_divergent);
  CHECK(both_div.rhs_divergent);

  At0Report zero = at0_check(id, [](double) { return 0.0; });
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK_FALSE(zero.lhs_divergent);
  CHECK_FALSE(zero.rhs_divergent);

  // differentiable variant wired through when f' is supplied
  At0Report with_var =
      at0_check(id, [](double r) { return r; }, [](double) { return 1.0; });
  CHECK(std::isfinite(with_var.variant));

  CHECK_THROWS_AS(at0_check(leading_diag10(), [](double) { return 1.0; }),
                  BetaNonzero);
}

TEST_CASE("y74 quantity on H = I") {
  HamiltonianModel id = identity_model();
  std::vector<double> grid;
  for (double t = 1.0; t > 1e-6; t *= 0.5) grid.push_back(t);

  Y74Report lin = y74_quantity(id, [](double r) { return r; }, grid);
  for (double y : lin.quantity) CHECK(std::abs(y - 1.0) < 1e-12);
  CHECK(lin.limsup_estimate == doctest::Approx(1.0).epsilon(1e-12));

  Y74Report sq = y74_quantity(id, [](double r) { return r * r; }, grid);
  for (size_t i = 0; i + 1 < sq.quantity.size(); ++i)
    CHECK(sq.quantity[i + 1] < sq.quantity[i]);  // quantity = t -> 0
  CHECK(sq.quantity.back() < 1e-5);

  Y74Report rt = y74_quantity(id, [](double r) { return std::sqrt(r); }, grid);
  CHECK(rt.quantity.back() > 1e2);  // quantity = 1/sqrt(t) -> inf

  // empirical cross-check: mu((-r,r))/g(r) classification matches
  for (double r : {1.0, 16.0}) {
    const double mt = mu_tilde(id, r);
    CHECK(mt / r == doctest::Approx(2.0 / kPi).epsilon(0.02));        // g = r: finite
    CHECK(mt / (r * r) <= 2.0 / kPi / r * 1.1);                       // g = r^2: -> 0
  }
}
