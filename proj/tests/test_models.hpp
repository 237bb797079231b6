#pragma once

#include "qweyl/hamiltonian.hpp"

namespace qweyl_test {

using namespace qweyl;

// H = I on (0, inf); q(z) = i.
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

}  // namespace qweyl_test
