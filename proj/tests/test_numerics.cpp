#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qweyl/numerics.hpp"

using namespace qweyl;

TEST_CASE("gk15 integrates smooth functions to machine precision") {
  auto f = [](double x) -> Vec3 { return {std::sin(x), std::exp(-x), x * x * x}; };
  Vec3 v = integrate_adaptive(f, 0.0, 2.0, 1e-13);
  CHECK(v.a == doctest::Approx(1.0 - std::cos(2.0)).epsilon(1e-12));
  CHECK(v.b == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK(v.c == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("singular-left accumulation handles integrable blowup") {
  // \int_0^1 x^{-1/2} dx = 2
  auto f = [](double x) -> Vec3 { return {1.0 / std::sqrt(x), 0, 0}; };
  Vec3 v = integrate_singular_left(f, 0.0, 1.0, 1e-11);
  CHECK(v.a == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("bisect_leftmost finds leftmost crossing in log space") {
  auto F = [](double t) { return std::log(t); };
  double t = bisect_leftmost(F, std::log(5.0), 1e-6, 1e6);
  CHECK(t == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("gamma_upper matches closed forms") {
  // Gamma(1,x) = e^{-x}
  CHECK(gamma_upper(1.0, 2.5) == doctest::Approx(std::exp(-2.5)).epsilon(1e-13));
  // Gamma(2,x) = (x+1) e^{-x}
  CHECK(gamma_upper(2.0, 7.0) == doctest::Approx(8.0 * std::exp(-7.0)).epsilon(1e-13));
  // Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))
  for (double x : {0.1, 1.0, 4.0, 30.0}) {
    double ref = std::sqrt(kPi) * std::erfc(std::sqrt(x));
    CHECK(gamma_upper(0.5, x) == doctest::Approx(ref).epsilon(1e-12));
  }
  // Gamma(a, 0) = Gamma(a)
  CHECK(gamma_upper(3.25, 0.0) == doctest::Approx(std::tgamma(3.25)).epsilon(1e-14));
}

TEST_CASE("fit_line recovers exact lines") {
  std::vector<double> x = {1, 2, 3, 4, 5}, y;
  for (double xi : x) y.push_back(-2.5 * xi + 0.75);
  LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-2.5).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("parallel_for covers every index once and propagates exceptions") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](size_t i) { hits[i]++; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(16, [](size_t i) {
                    if (i == 7) throw OutOfDomain("boom");
                  }),
                  OutOfDomain);
}

TEST_CASE("log_grid endpoints and density") {
  auto g = log_grid(1e2, 1e8, 3);
  CHECK(g.front() == doctest::Approx(1e2));
  CHECK(g.back() == doctest::Approx(1e8));
  CHECK(static_cast<int>(g.size()) == 19);
}
