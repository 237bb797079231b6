#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "qweyl/estimates.hpp"

namespace qweyl {

// 17 significant digits: doubles round-trip exactly, goldens stay diff-able.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  for (size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << csv_num(row[i]);
    os << "\n";
  }
}

inline std::vector<std::string> estimate_csv_header() {
  return {"r",          "q_re",       "q_im",       "im_q",        "abs_q",
          "A",          "L",          "t_ring",     "t_hat",       "omega1_hat",
          "omega2_hat", "omega3_hat", "ratio_im",   "ratio_inv",   "ratio_center",
          "tangent",    "tangent_pred", "error_radius"};
}

inline std::vector<double> estimate_csv_row(const EstimateRecord& e) {
  return {e.r,          e.q.real(),   e.q.imag(),   e.im_q,        e.abs_q,
          e.A,          e.L,          e.t_ring,     e.t_hat,       e.omega1_hat,
          e.omega2_hat, e.omega3_hat, e.ratio_im,   e.ratio_inv,   e.ratio_center,
          e.tangent,    e.tangent_pred, e.error_radius};
}

// Summary line format shared by the CLI and the acceptance suite.
inline std::string check_line(const std::string& name, bool pass, double margin) {
  return "CHECK " + name + (pass ? " PASS" : " FAIL") + " margin=" + csv_num(margin);
}

struct CheckSink {
  std::ostream& os;
  bool all_pass = true;
  void operator()(const std::string& name, bool pass, double margin) {
    all_pass = all_pass && pass;
    os << check_line(name, pass, margin) << "\n";
  }
};

}  // namespace qweyl
