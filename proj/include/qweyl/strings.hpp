#pragma once

#include "qweyl/scales.hpp"
#include "qweyl/weyl.hpp"

namespace qweyl {

// Krein string S[L, m]: length L and mass distribution m(t) = m([0,t)),
// nondecreasing and left-continuous, given in closed form or as a jump table.
struct KreinString {
  enum class Kind { uniform, power, jumps };
  Kind kind = Kind::uniform;
  double L = kInf;
  double c = 1.0;      // power: m(t) = c t^gamma
  double gamma = 1.0;
  std::vector<std::pair<double, double>> jumps;  // sorted (position, mass)

  double mass(double t) const {  // m([0,t))
    switch (kind) {
      case Kind::uniform: return t;
      case Kind::power: return c * std::pow(t, gamma);
      case Kind::jumps: {
        double s = 0;
        for (const auto& [x, m] : jumps)
          if (x < t) s += m;
        return s;
      }
    }
    return 0;
  }
  double density(double t) const {  // dm/dt for the closed-form kinds
    return kind == Kind::uniform ? 1.0 : c * gamma * std::pow(t, gamma - 1.0);
  }
};

inline KreinString uniform_string() { return {}; }

inline KreinString power_string(double gamma, double c = 1.0) {
  if (!(gamma > 0) || !(c > 0))
    throw InvalidParams("power_string: need gamma > 0 and c > 0");
  KreinString s;
  s.kind = KreinString::Kind::power;
  s.c = c;
  s.gamma = gamma;
  return s;
}

// Jump strings carry L = inf so that the dual length m(L) stays finite and
// the diag(1,0) continuation of the associated Hamiltonian applies.
inline KreinString jump_string(std::vector<std::pair<double, double>> table) {
  KreinString s;
  s.kind = KreinString::Kind::jumps;
  s.jumps = std::move(table);
  std::sort(s.jumps.begin(), s.jumps.end());
  for (const auto& [x, m] : s.jumps)
    if (x < 0 || !(m > 0)) throw MalformedString("jump_string: need x >= 0, mass > 0");
  if (s.jumps.empty()) throw MalformedString("jump_string: empty table");
  return s;
}

// delta(t) = M2 M0 - M1^2 with M_k = int_{[0,t)} x^k dm.  For jump tables the
// pairwise form sum_{i<j} m_i m_j (x_i - x_j)^2 avoids the cancellation.
inline double delta_of(const KreinString& s, double t) {
  if (!(t >= 0) || t >= s.L) throw OutOfDomain("delta_of: t outside [0, L)");
  if (s.kind == KreinString::Kind::jumps) {
    double d = 0;
    for (size_t i = 0; i < s.jumps.size(); ++i) {
      if (s.jumps[i].first >= t) break;
      for (size_t j = 0; j < i; ++j)
        d += s.jumps[i].second * s.jumps[j].second *
             std::pow(s.jumps[i].first - s.jumps[j].first, 2.0);
    }
    return d;
  }
  const double m0 = s.mass(t);
  auto mk = [&](int k) -> double {
    auto f = [&](double x) { return std::pow(x, k) * s.density(x); };
    if (s.kind == KreinString::Kind::power && s.gamma < 1.0) {
      auto f3 = [&](double x) { return Vec3{f(x), 0, 0}; };
      return integrate_singular_left(f3, 0.0, t, 1e-12).a;
    }
    return integrate_scalar(f, 0.0, t, 1e-12);
  };
  return mk(2) * m0 - std::pow(mk(1), 2.0);
}

struct StringScales {
  double r = 0;
  double tau_hat = 0;
  double f_r = 0;
  double delta_at_tau = 0;
};

inline StringScales tau_hat_and_f(const KreinString& s, double r) {
  if (!(r > 0)) throw InvalidParams("tau_hat_and_f: r must be positive");
  const double target = 1.0 / (r * r);
  StringScales out;
  out.r = r;
  if (s.kind == KreinString::Kind::jumps) {
    // delta is a staircase jumping exactly at the atoms
    double d_before = 0;
    for (size_t j = 0; j < s.jumps.size(); ++j) {
      const double x = s.jumps[j].first, m = s.jumps[j].second;
      double d_after = d_before;
      for (size_t i = 0; i < j; ++i)
        d_after += m * s.jumps[i].second * std::pow(x - s.jumps[i].first, 2.0);
      if (d_after >= target) {
        out.tau_hat = x;
        out.delta_at_tau = d_before;
        double mass_before = 0;
        for (size_t i = 0; i < j; ++i) mass_before += s.jumps[i].second;
        out.f_r = mass_before + m * (target - d_before) / (d_after - d_before);
        return out;
      }
      d_before = d_after;
    }
    throw BracketFailure("tau_hat_and_f: delta stays below 1/r^2 (r too small)");
  }
  double hi = 1.0;
  while (delta_of(s, hi) < target) {
    hi *= 2.0;
    if (hi >= s.L || hi > 1e154)
      throw BracketFailure("tau_hat_and_f: delta stays below 1/r^2");
  }
  double lo = hi;
  while (lo > 1e-300 && delta_of(s, lo) >= target) lo *= 0.5;
  out.tau_hat = bisect_leftmost([&](double t) { return delta_of(s, t); }, target, lo, hi);
  out.delta_at_tau = delta_of(s, out.tau_hat);
  out.f_r = s.mass(out.tau_hat);
  return out;
}

// Generalized inverse of the mass function.
inline double dual_mass(const KreinString& s, double xi) {  // m_hat(xi)
  switch (s.kind) {
    case KreinString::Kind::uniform: return xi;
    case KreinString::Kind::power: return std::pow(xi / s.c, 1.0 / s.gamma);
    case KreinString::Kind::jumps: {
      double cum = 0;
      for (const auto& [x, m] : s.jumps) {
        cum += m;
        if (xi <= cum) return x;
      }
      return s.L;  // above total mass: inf over empty set on (0, L)
    }
  }
  return 0;
}

// Hamiltonian associated to the string: H = [[m_hat^2, m_hat],[m_hat, 1]] on
// [0, L_hat], continued by diag(1,0) when L_hat + int m_hat^2 < inf.
inline HamiltonianModel string_to_hamiltonian(const KreinString& s) {
  if (!(s.L > 0)) throw MalformedString("string_to_hamiltonian: L must be positive");
  HamiltonianModel m;
  m.a = 0.0;
  m.t_scale = 1.0;
  if (s.kind == KreinString::Kind::uniform) {
    m.name = "string_uniform";
    m.density = [](double t) { return Density{t * t, 1.0, t}; };
    m.primitive = [](double t) { return Omega{t, t * t * t / 3.0, 1.0 * t, t * t / 2.0}; };
    m.one_minus_f_sq = [](double) { return 0.25; };
    return m;
  }
  if (s.kind == KreinString::Kind::power) {
    const double g = 1.0 / s.gamma, cg = std::pow(s.c, -g);
    m.name = "string_power";
    m.density = [g, cg](double t) {
      const double mh = cg * std::pow(t, g);
      return Density{mh * mh, 1.0, mh};
    };
    m.primitive = [g, cg](double t) {
      return Omega{t, cg * cg * std::pow(t, 1.0 + 2.0 * g) / (1.0 + 2.0 * g), t,
                   cg * std::pow(t, 1.0 + g) / (1.0 + g)};
    };
    return m;
  }
  // jump table (L = inf): m_hat is a staircase, so H is piecewise constant.
  m.name = "string_jumps";
  std::vector<double> edge{0.0}, xval;  // plateau [edge[j], edge[j+1]) has m_hat = xval[j]
  for (const auto& [x, mass] : s.jumps) {
    xval.push_back(x);
    edge.push_back(edge.back() + mass);
  }
  const double L_hat = edge.back();
  m.density = [edge, xval, L_hat](double t) {
    if (t >= L_hat) return Density{1.0, 0.0, 0.0};
    size_t j = std::upper_bound(edge.begin(), edge.end(), t) - edge.begin() - 1;
    const double x = xval[std::min(j, xval.size() - 1)];
    return Density{x * x, 1.0, x};
  };
  m.primitive = [edge, xval, L_hat](double t) {
    Omega o{t, 0, 0, 0};
    for (size_t j = 0; j < xval.size(); ++j) {
      const double seg = std::min(t, edge[j + 1]) - edge[j];
      if (seg <= 0) break;
      o.omega1 += xval[j] * xval[j] * seg;
      o.omega3 += xval[j] * seg;
    }
    o.omega2 = std::min(t, L_hat);
    if (t > L_hat) o.omega1 += t - L_hat;
    return o;
  };
  for (size_t j = 0; j < xval.size(); ++j) {
    m.pieces.push_back(Piece{edge[j], edge[j + 1], true, +1});
    m.breakpoints.push_back(edge[j + 1]);
  }
  m.pieces.push_back(Piece{L_hat, kInf, true, +1});
  return m;
}

struct A41Record {
  double r = 0;
  double im_q = 0;
  double f_r = 0;
  double ratio = 0;  // Im q_S(ir) * r * f(r)
};

struct A41Report {
  std::vector<A41Record> records;
  double C = 0;  // max over records of max(ratio, 1/ratio)
};

inline A41Report theorem_a41_check(const KreinString& s,
                                   const std::vector<double>& r_grid) {
  HamiltonianModel m = string_to_hamiltonian(s);
  A41Report rep;
  rep.records.resize(r_grid.size());
  parallel_for(r_grid.size(), [&](size_t i) {
    const double r = r_grid[i];
    A41Record rec;
    rec.r = r;
    StringScales sc = tau_hat_and_f(s, r);
    rec.f_r = sc.f_r;
    QResult q = eval_q(m, cplx{0, r}, 0.0, 1e-8);
    rec.im_q = q.q.imag();
    rec.ratio = rec.im_q * r * sc.f_r;
    rep.records[i] = rec;
  });
  for (const A41Record& rec : rep.records)
    rep.C = std::max(rep.C, std::max(rec.ratio, 1.0 / rec.ratio));
  return rep;
}

}  // namespace qweyl
