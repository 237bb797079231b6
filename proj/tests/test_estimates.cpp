#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qweyl/estimates.hpp"
#include "qweyl/zoo.hpp"
#include "test_models.hpp"

using namespace qweyl;
using namespace qweyl_test;

TEST_CASE("identity model: all Theorem 1 ratios equal 1") {
  HamiltonianModel m = identity_model();
  for (double r : {0.5, 1.0, 1e3, 1e7}) {
    EstimateRecord rec = estimate_at(m, r);
    // q = i, t_hat = 1/r, omega2(t_hat) = 1/r
    CHECK(rec.ratio_im == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rec.ratio_inv == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(rec.ratio_center - 1.0) < 1e-6);
    CHECK(rec.tangent == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rec.tangent_pred == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.A == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rec.L == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("diagonal model diag(4,1): q = 2i, ratio_im = 1") {
  HamiltonianModel m = diag_model(4.0, 1.0);
  for (double r : {1.0, 1e2, 1e5}) {
    EstimateRecord rec = estimate_at(m, r);
    CHECK(std::abs(rec.q.real()) < 1e-8);
    CHECK(rec.q.imag() == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(rec.ratio_im == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rec.ratio_inv == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("scalar rescaling invariance of ratio_im") {
  HamiltonianModel m = h0_model();
  HamiltonianModel m3 = scale_model(m, 3.0);
  for (double r : {10.0, 1e4}) {
    EstimateRecord a = estimate_at(m, r);
    EstimateRecord b = estimate_at(m3, r);
    // q_{kH}(z) = q_H(kz) and t_hat scales so the dimensionless ratio agrees
    CHECK(b.ratio_im == doctest::Approx(estimate_at(m, 3.0 * r).ratio_im).epsilon(1e-6));
    CHECK(a.ratio_im > 0.1);
    CHECK(a.ratio_im < 10.0);
    CHECK(b.tangent == doctest::Approx(a.tangent).epsilon(1e-6));
  }
}

TEST_CASE("powerlog: ratios bounded while A/L grows like (log r)^2") {
  PowerLogParams prm{2.0, 1.0, 3.0};
  HamiltonianModel m = make_powerlog(prm);
  double prev_al = 0;
  for (double r : {1e4, 1e6, 1e8}) {
    EstimateRecord rec = estimate_at(m, r);
    CHECK(rec.ratio_im > 0.05);
    CHECK(rec.ratio_im < 20.0);
    CHECK(rec.ratio_center < 20.0);
    CHECK(rec.ratio_inv < 20.0);
    const double al = rec.A / rec.L;
    CHECK(al > prev_al);  // growing separation between envelopes
    prev_al = al;
    // A/L = (2 alpha^2 / (beta1-beta2))^2 (log r)^2 up to lower order
    const double pred = std::pow(2.0 * prm.alpha / (prm.beta1 - prm.beta2), 2.0) *
                        std::pow(prm.alpha, 2.0) / std::pow(prm.alpha, 4.0) *
                        std::pow(std::log(r), 2.0);
    CHECK(al / pred > 0.3);
    CHECK(al / pred < 3.0);
  }
}

TEST_CASE("Herglotz monotonicity: r Im q(ir) nondecreasing") {
  PowerLogParams prm{2.0, 1.0, 3.0};
  HamiltonianModel m = make_powerlog(prm);
  double prev = 0;
  for (double r : log_grid(1e2, 1e6, 2)) {
    Envelopes env = envelopes(m, r);
    QResult q = eval_q(m, cplx{0, r}, 1e-4 * env.L, 1e-9);
    const double v = r * q.q.imag();
    CHECK(v >= prev * (1.0 - 1e-9));
    prev = v;
  }
}

TEST_CASE("band constants at eta=0.13833, theta=pi/2 match quoted values") {
  BandConstants b = band_constants(0.13833, kPi / 2.0);
  const double tol = 5e-4;
  CHECK(std::abs(b.c_minus_scaled - 0.002) <= std::max(tol * 0.002, tol));
  CHECK(std::abs(b.c_plus_scaled - 1.568) <= std::max(tol * 1.568, tol));
  CHECK(b.c_plus / b.c_minus ==
        doctest::Approx(675.772).epsilon(5e-4));
  CHECK_THROWS_AS(band_constants(0.5, kPi / 2.0), InvalidParams);
  CHECK_THROWS_AS(band_constants(0.1, 0.0), InvalidParams);
}

TEST_CASE("certified band holds for H = I and H0") {
  std::vector<double> grid = log_grid(1e2, 1e6, 1);
  for (double theta : {kPi / 4.0, kPi / 2.0}) {
    BandReport rep_i = certified_band(identity_model(), grid, theta);
    CHECK(rep_i.pass);
    CHECK(rep_i.min_margin > 0);
    BandReport rep_h = certified_band(h0_model(), grid, theta);
    CHECK(rep_h.pass);
  }
}

TEST_CASE("prop A4: identity model, tangent ratio and mass ratio are 1") {
  std::vector<double> grid = {1.0, 1e3};
  auto rep = prop_a4_report(identity_model(), grid);
  for (const PropA4Record& pr : rep) {
    CHECK(pr.tangent_ratio == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(pr.mass_ratio == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("cor T5: diagonal model ratios bounded, identity exact") {
  std::vector<double> grid = {1.0, 1e2, 1e4};
  CorT5Report rep = cor_t5_check(identity_model(), grid, 2.0);
  CHECK(rep.max_dev == doctest::Approx(1.0).epsilon(1e-7));
  CorT5Report rep_h = cor_t5_check(h0_model(), grid, 2.0);
  CHECK(rep_h.max_dev < 10.0);
  CHECK_THROWS_AS(cor_t5_check(identity_model(), grid, -1.0), InvalidParams);
}

TEST_CASE("slow variation: powerlog q varies slowly under dilation") {
  PowerLogParams prm{2.0, 1.0, 3.0};
  HamiltonianModel m = make_powerlog(prm);
  auto recs = slow_variation(m, 2.0, {1e6, 1e8});
  for (const SlowVarRecord& rec : recs) {
    CHECK(rec.deviation < 0.2);
    CHECK(rec.deviation_delta0 == 0.0);
    CHECK(rec.deviation_delta_half < 0.5);
  }
  // deviation shrinks with r for this slowly varying family
  CHECK(recs[1].deviation < recs[0].deviation);
}

TEST_CASE("offdiag monotonicity: diagonal part dominates") {
  HplParams prm{0.5, 0.5};
  HplModel hm = make_hpl(prm);
  HamiltonianModel diag = diagonal_part(hm.model);
  std::vector<double> t_grid;
  for (int n = 3; n <= 8; ++n) t_grid.push_back(hm.nodes.t[n]);
  OffdiagReport rep = offdiag_monotonicity_check(hm.model, diag, t_grid);
  CHECK(rep.pass);
  CHECK(rep.C < 4.0);
  // swapping the roles violates the |omega3| ordering hypothesis
  CHECK_THROWS_AS(offdiag_monotonicity_check(diag, hm.model, t_grid),
                  HypothesisViolated);
}

TEST_CASE("positive increase diagnostic") {
  std::vector<double> r, q_pow, q_flat;
  for (double rv : log_grid(1.0, 1e6, 3)) {
    r.push_back(rv);
    q_pow.push_back(std::sqrt(rv));             // |q| ~ r^{1/2}: positively increasing
    q_flat.push_back(1.0 + 0.01 * std::log(rv));  // essentially flat
  }
  CHECK(positive_increase_diagnostic(r, q_pow) ==
        IncreaseVerdict::positively_increasing);
  CHECK(positive_increase_diagnostic(r, q_flat) == IncreaseVerdict::inconclusive);
  std::vector<double> r_short = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
  CHECK_THROWS_AS(positive_increase_diagnostic(r_short, r_short), InsufficientSpan);
}

TEST_CASE("transfer matrix stays unimodular along the way") {
  HamiltonianModel m = h0_model();
  for (double r : {1.0, 1e4}) {
    const double t0 = t_hat(m, r);
    Mat2 w = propagate(m, cplx{0, r}, t0 / 64.0, 8.0 * t0, 1e-11);
    CHECK(std::abs(w.det() - 1.0) <= 1e-10 * w.norm() * w.norm());
  }
}
