#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

#include "qweyl/common.hpp"

namespace qweyl {

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7/15 adaptive quadrature over R^3-valued integrands.
// ---------------------------------------------------------------------------

namespace gk {
// Kronrod-15 abscissae on [0,1] side (symmetric) and weights (QUADPACK values).
inline constexpr std::array<double, 8> xk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
// Gauss-7 weights aligned with xk[1], xk[3], xk[5], xk[7].
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};
}  // namespace gk

struct Vec3 {
  double a = 0, b = 0, c = 0;
  Vec3& operator+=(const Vec3& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    return *this;
  }
  friend Vec3 operator+(Vec3 x, const Vec3& y) { return x += y; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.a, s * v.b, s * v.c}; }
  double norm() const { return std::abs(a) + std::abs(b) + std::abs(c); }
};

// One GK15 panel; returns (integral, error estimate).
template <class F>
inline std::pair<Vec3, double> gk15_panel(const F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  Vec3 resk{}, resg{};
  for (int i = 0; i < 8; ++i) {
    const double x = gk::xk[i];
    Vec3 fsum = f(c - h * x);
    if (i != 7) fsum += f(c + h * x);
    resk += gk::wk[i] * fsum;
    if (i % 2 == 1 || i == 7) resg += gk::wg[i / 2] * fsum;
  }
  Vec3 diff = resk + (-1.0) * resg;
  return {h * resk, h * diff.norm()};
}

// Adaptive GK15 with an interval heap (largest-error-first bisection).
template <class F>
inline Vec3 integrate_adaptive(const F& f, double lo, double hi, double rel_tol,
                               double abs_floor = 0.0, int max_panels = 4000) {
  if (!(lo <= hi)) throw QuadratureFailure("integrate_adaptive: inverted interval");
  if (lo == hi) return {};
  struct Panel {
    double lo, hi, err;
    Vec3 val;
  };
  std::vector<Panel> panels;
  auto [v0, e0] = gk15_panel(f, lo, hi);
  panels.push_back({lo, hi, e0, v0});
  for (int iter = 0; iter < max_panels; ++iter) {
    Vec3 total{};
    double err = 0;
    for (const auto& p : panels) {
      total += p.val;
      err += p.err;
    }
    if (err <= rel_tol * total.norm() + abs_floor) return total;
    size_t worst = 0;
    for (size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;
    Panel p = panels[worst];
    const double mid = 0.5 * (p.lo + p.hi);
    if (mid <= p.lo || mid >= p.hi) return [&] {
      Vec3 t{};
      for (const auto& q : panels) t += q.val;
      return t;
    }();  // panel at roundoff limit; accept
    auto [vl, el] = gk15_panel(f, p.lo, mid);
    auto [vr, er] = gk15_panel(f, mid, p.hi);
    panels[worst] = {p.lo, mid, el, vl};
    panels.push_back({mid, p.hi, er, vr});
  }
  throw QuadratureFailure("integrate_adaptive: tolerance not met within budget");
}

template <class F>
inline double integrate_scalar(const F& f, double lo, double hi, double rel_tol,
                               double abs_floor = 0.0, int max_panels = 4000) {
  auto g = [&](double x) -> Vec3 { return {f(x), 0.0, 0.0}; };
  return integrate_adaptive(g, lo, hi, rel_tol, abs_floor, max_panels).a;
}

// Integral over (a, t] of an integrand that may blow up (integrably) at a:
// accumulate on the geometric subdivision t_k = a + (t-a) 2^{-k}.
template <class F>
inline Vec3 integrate_singular_left(const F& f, double a, double t, double rel_tol) {
  if (t <= a) return {};
  Vec3 total{};
  double hi = t;
  for (int k = 0; k < 1100; ++k) {
    double lo = a + (t - a) * std::ldexp(1.0, -(k + 1));
    if (!(lo > a) || lo >= hi) break;
    Vec3 piece = integrate_adaptive(f, lo, hi, rel_tol, rel_tol * total.norm());
    total += piece;
    if (k > 3 && piece.norm() <= 0.25 * rel_tol * total.norm()) break;
    hi = lo;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Monotone bisection: leftmost point where F(t) >= target.
// ---------------------------------------------------------------------------

// Pre: F nondecreasing on [lo, hi], F(lo) < target <= F(hi).
// Returns the leftmost solution of F(t) >= target (flat spots break left).
// Bisection runs in u = log(t - origin) when log_space is set.
template <class F>
inline double bisect_leftmost(const F& F_of_t, double target, double lo, double hi,
                              double origin = 0.0, bool log_space = true,
                              int iters = 200) {
  auto to_u = [&](double t) { return log_space ? std::log(t - origin) : t; };
  auto to_t = [&](double u) { return log_space ? origin + std::exp(u) : u; };
  double ulo = to_u(lo), uhi = to_u(hi);
  for (int i = 0; i < iters && uhi - ulo > 1e-15 * std::max(1.0, std::abs(uhi)); ++i) {
    double um = 0.5 * (ulo + uhi);
    double tm = to_t(um);
    if (tm <= lo || tm >= hi) break;
    if (F_of_t(tm) >= target)
      uhi = um;
    else
      ulo = um;
    lo = to_t(ulo);
    hi = to_t(uhi);
  }
  return to_t(uhi);
}

// ---------------------------------------------------------------------------
// Upper incomplete gamma  Gamma(a, x) = \int_x^inf s^{a-1} e^{-s} ds,  a > 0.
// ---------------------------------------------------------------------------

namespace detail {
inline double gamma_lower_series(double a, double x) {
  // gamma(a,x) = x^a e^{-x} sum_{n>=0} x^n / (a (a+1) ... (a+n))
  double term = 1.0 / a, sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::exp(a * std::log(x) - x) * sum;
}

inline double gamma_upper_cf(double a, double x) {
  // Lentz continued fraction, valid for x > a + 1.
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(a * std::log(x) - x) * h;
}
}  // namespace detail

inline double gamma_upper(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw OutOfDomain("gamma_upper: need a > 0, x >= 0");
  if (x == 0.0) return std::tgamma(a);
  if (x > a + 1.0) return detail::gamma_upper_cf(a, x);
  return std::tgamma(a) - detail::gamma_lower_series(a, x);
}

// ---------------------------------------------------------------------------
// Least-squares line fit  y ~ slope * x + intercept.
// ---------------------------------------------------------------------------

struct LineFit {
  double slope = 0;
  double intercept = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidParams("fit_line: need >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw InvalidParams("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

// ---------------------------------------------------------------------------
// Parallel map over independent grid points (pure work functions only).
// ---------------------------------------------------------------------------

inline int worker_count() {
  if (const char* env = std::getenv("QWEYL_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

// Calls fn(i) for i in [0, n); results must be written into caller-owned
// per-index slots. Exceptions are rethrown in the calling thread.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  const int workers = std::min<size_t>(worker_count(), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errs(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = next++; i < n && !failed.load(); i = next++) fn(i);
      } catch (...) {
        errs[w] = std::current_exception();
        failed = true;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

// Log-spaced grid with `per_decade` points per decade, inclusive of ends.
inline std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0) || !(hi > lo) || per_decade < 1)
    throw InvalidParams("log_grid: need 0 < lo < hi, per_decade >= 1");
  const double decades = std::log10(hi / lo);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * per_decade)) + 1);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  g.back() = hi;
  return g;
}

}  // namespace qweyl
