// Batch front-end: load model specs, run the computations and verification
// suites, emit CSV reports plus line-oriented CHECK summaries.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qweyl/acceptance.hpp"
#include "qweyl/model_spec.hpp"
#include "qweyl/report.hpp"

using namespace qweyl;

namespace {

struct GridOpts {
  double rmin = 1.0;
  double rmax = 1e4;
  int per_decade = 2;
};

void add_grid(CLI::App* cmd, GridOpts& g) {
  cmd->add_option("--rmin", g.rmin, "smallest r in the grid")->check(CLI::PositiveNumber);
  cmd->add_option("--rmax", g.rmax, "largest r in the grid")->check(CLI::PositiveNumber);
  cmd->add_option("--per-decade", g.per_decade, "grid points per decade")
      ->check(CLI::PositiveNumber);
}

std::vector<double> make_grid(const GridOpts& g) { return log_grid(g.rmin, g.rmax, g.per_decade); }

void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw SpecError("cannot open output file \"" + path + "\"");
  write_csv(os, header, rows);
}

// Margin of x inside [1/C, C], in units of log C; positive iff inside.
double band_margin(double x, double C) {
  return 1.0 - std::abs(std::log(x)) / std::log(C);
}

int finish(CheckSink& sink) { return sink.all_pass ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weyl coefficients of 2x2 canonical systems: evaluation, "
               "envelopes, and verification suites"};
  app.require_subcommand(1);

  std::string model_path, spec_path, out_path, zoo_name;
  GridOpts grid;
  double tol_abs = 0.0, tol_rel = 1e-8, eta = 2.0, band_eta = 0.13833;
  double theta = kPi / 2.0, k_factor = 2.0, fpower = 1.0, a_prime = 1.0;

  auto* cmd_q = app.add_subcommand("q", "evaluate q_H(ir) on an r-grid");
  cmd_q->add_option("--model", model_path, "model spec JSON")->required();
  cmd_q->add_option("--out", out_path, "CSV output path")->required();
  cmd_q->add_option("--tol-abs", tol_abs, "absolute disk tolerance");
  cmd_q->add_option("--tol-rel", tol_rel, "relative disk tolerance");
  cmd_q->add_option("--eta", eta, "depth parameter for the starting checkpoint");
  add_grid(cmd_q, grid);

  auto* cmd_env = app.add_subcommand("envelopes", "A(r) and L(r) envelopes");
  cmd_env->add_option("--model", model_path)->required();
  cmd_env->add_option("--out", out_path)->required();
  add_grid(cmd_env, grid);

  auto* cmd_t1 = app.add_subcommand("theorem1", "two-sided estimate report");
  cmd_t1->add_option("--model", model_path)->required();
  cmd_t1->add_option("--out", out_path)->required();
  add_grid(cmd_t1, grid);

  auto* cmd_band = app.add_subcommand("band", "certified two-sided band for Im q");
  cmd_band->add_option("--model", model_path)->required();
  cmd_band->add_option("--out", out_path)->required();
  cmd_band->add_option("--theta", theta, "ray angle in (0, pi)");
  cmd_band->add_option("--eta", band_eta, "band parameter in (0, 1 - 1/sqrt(2))");
  add_grid(cmd_band, grid);

  auto* cmd_p24 = app.add_subcommand("prop24", "tangent and mass-ratio report");
  cmd_p24->add_option("--model", model_path)->required();
  cmd_p24->add_option("--out", out_path)->required();
  add_grid(cmd_p24, grid);

  auto* cmd_c25 = app.add_subcommand("cor25", "center-normalized ratio report");
  cmd_c25->add_option("--model", model_path)->required();
  cmd_c25->add_option("--out", out_path)->required();
  cmd_c25->add_option("--k", k_factor, "ray comparison factor");
  add_grid(cmd_c25, grid);

  auto* cmd_sv = app.add_subcommand("slowvar", "slow-variation deviations of q");
  cmd_sv->add_option("--model", model_path)->required();
  cmd_sv->add_option("--out", out_path)->required();
  cmd_sv->add_option("--k", k_factor, "scaling factor");
  add_grid(cmd_sv, grid);

  auto* cmd_zoo = app.add_subcommand("zoo", "construct a named example model and self-check");
  cmd_zoo->add_option("name", zoo_name, "identity|diag|h0|powerlog|hpl|r3")->required();
  cmd_zoo->add_option("--out", out_path)->required();
  add_grid(cmd_zoo, grid);

  auto* cmd_str = app.add_subcommand("string", "Krein string ratio report");
  cmd_str->add_option("--spec", spec_path, "string spec JSON")->required();
  cmd_str->add_option("--out", out_path)->required();
  add_grid(cmd_str, grid);

  auto* cmd_sl = app.add_subcommand("sl", "Sturm-Liouville ratio report");
  cmd_sl->add_option("--spec", spec_path, "problem spec JSON")->required();
  cmd_sl->add_option("--out", out_path)->required();
  add_grid(cmd_sl, grid);

  auto* cmd_tails = app.add_subcommand("tails", "spectral-measure tail comparison");
  cmd_tails->add_option("--model", model_path)->required();
  cmd_tails->add_option("--out", out_path)->required();
  cmd_tails->add_option("--fpower", fpower, "test function f(r) = r^p");
  cmd_tails->add_option("--a-prime", a_prime, "right endpoint of the density-side integral");

  std::vector<std::string> only;
  auto* cmd_all = app.add_subcommand("verify-all", "run the acceptance criteria");
  cmd_all->add_option("--only", only, "restrict to the named criteria");

  CLI11_PARSE(app, argc, argv);
  CheckSink sink{std::cout};

  try {
    if (*cmd_q) {
      HamiltonianModel m = model_from_file(model_path);
      auto rg = make_grid(grid);
      std::vector<QResult> res(rg.size());
      parallel_for(rg.size(), [&](size_t i) {
        res[i] = eval_q(m, cplx{0, rg[i]}, tol_abs, tol_rel, eta);
      });
      std::vector<std::vector<double>> rows;
      double worst = kInf;
      for (size_t i = 0; i < rg.size(); ++i) {
        const QResult& q = res[i];
        rows.push_back({rg[i], q.q.real(), q.q.imag(), q.error_radius, q.t_start,
                        q.t_final, static_cast<double>(q.checkpoints)});
        const double budget = 2.0 * (tol_abs + tol_rel * std::abs(q.q)) + 1e-300;
        worst = std::min(worst, 1.0 - q.error_radius / budget);
      }
      emit_csv(out_path, {"r", "q_re", "q_im", "error_radius", "t_start", "t_final",
                          "checkpoints"}, rows);
      sink("q_certified", worst >= 0, worst);
      return finish(sink);
    }
    if (*cmd_env) {
      HamiltonianModel m = model_from_file(model_path);
      std::vector<std::vector<double>> rows;
      double worst = kInf;
      for (double r : make_grid(grid)) {
        Envelopes e = envelopes(m, r);
        rows.push_back({r, e.t_ring, e.A, e.L, e.log_A, e.log_L});
        worst = std::min(worst, e.log_A - e.log_L);
      }
      emit_csv(out_path, {"r", "t_ring", "A", "L", "log_A", "log_L"}, rows);
      sink("envelopes_ordered", worst >= 0, worst);
      return finish(sink);
    }
    if (*cmd_t1 || *cmd_zoo) {
      HamiltonianModel m;
      if (*cmd_t1) {
        m = model_from_file(model_path);
      } else {
        if (zoo_name == "identity") m = acceptance::identity_model();
        else if (zoo_name == "diag") m = acceptance::diag_model(4.0, 1.0);
        else if (zoo_name == "h0") m = acceptance::h0_model();
        else if (zoo_name == "powerlog") m = make_powerlog(PowerLogParams{2.0, 1.0, 3.0});
        else if (zoo_name == "hpl") m = make_hpl(HplParams{0.5, 0.5}).model;
        else if (zoo_name == "r3") m = make_r3_variant(HplParams{0.5, 0.8}).model;
        else throw SpecError("unknown zoo model \"" + zoo_name + "\"");
      }
      std::vector<std::vector<double>> rows;
      double worst = kInf;
      for (const EstimateRecord& rec : theorem1_report(m, make_grid(grid))) {
        rows.push_back(estimate_csv_row(rec));
        worst = std::min({worst, band_margin(rec.ratio_im, 50.0),
                          band_margin(rec.ratio_inv, 50.0)});
      }
      emit_csv(out_path, estimate_csv_header(), rows);
      sink(*cmd_t1 ? "theorem1_ratios" : "zoo_" + zoo_name, worst >= 0, worst);
      return finish(sink);
    }
    if (*cmd_band) {
      HamiltonianModel m = model_from_file(model_path);
      BandReport rep = certified_band(m, make_grid(grid), theta, band_eta);
      std::vector<std::vector<double>> rows;
      for (const BandPoint& pt : rep.points)
        rows.push_back({pt.r, pt.im_q, pt.lower, pt.upper, pt.margin,
                        pt.pass ? 1.0 : 0.0});
      emit_csv(out_path, {"r", "im_q", "lower", "upper", "margin", "pass"}, rows);
      sink("band_certified", rep.pass, rep.min_margin);
      return finish(sink);
    }
    if (*cmd_p24) {
      HamiltonianModel m = model_from_file(model_path);
      std::vector<std::vector<double>> rows;
      double worst = kInf;
      for (const PropA4Record& rec : prop_a4_report(m, make_grid(grid))) {
        rows.push_back({rec.r, rec.tangent_ratio, rec.mass_ratio});
        worst = std::min({worst, band_margin(rec.tangent_ratio, 10.0),
                          band_margin(rec.mass_ratio, 50.0)});
      }
      emit_csv(out_path, {"r", "tangent_ratio", "mass_ratio"}, rows);
      sink("prop24_bands", worst >= 0, worst);
      return finish(sink);
    }
    if (*cmd_c25) {
      HamiltonianModel m = model_from_file(model_path);
      CorT5Report rep = cor_t5_check(m, make_grid(grid), k_factor);
      std::vector<std::vector<double>> rows;
      for (const CorT5Record& rec : rep.records)
        rows.push_back({rec.r, rec.ratio_imk, rec.ratio_cross});
      emit_csv(out_path, {"r", "ratio_imk", "ratio_cross"}, rows);
      sink("cor25_bounded", rep.max_dev <= 50.0, band_margin(rep.max_dev, 50.0));
      return finish(sink);
    }
    if (*cmd_sv) {
      HamiltonianModel m = model_from_file(model_path);
      std::vector<std::vector<double>> rows;
      double worst = 0;
      for (const SlowVarRecord& rec : slow_variation(m, k_factor, make_grid(grid))) {
        rows.push_back({rec.r, rec.deviation, rec.deviation_delta0,
                        rec.deviation_delta_half});
        worst = std::max(worst, rec.deviation);
      }
      emit_csv(out_path, {"r", "deviation", "deviation_delta0", "deviation_delta_half"},
               rows);
      // Herglotz rescaling keeps |q(ikr)/q(ir)| in a fixed hyperbolic ball.
      sink("slowvar_bounded", worst < 10.0, 1.0 - worst / 10.0);
      return finish(sink);
    }
    if (*cmd_str) {
      KreinString s = string_from_json(load_json_file(spec_path));
      A41Report rep = theorem_a41_check(s, make_grid(grid));
      std::vector<std::vector<double>> rows;
      for (const A41Record& rec : rep.records)
        rows.push_back({rec.r, rec.im_q, rec.f_r, rec.ratio});
      emit_csv(out_path, {"r", "im_q", "f_r", "ratio"}, rows);
      sink("string_ratio_bounded", rep.C <= 50.0, band_margin(rep.C, 50.0));
      return finish(sink);
    }
    if (*cmd_sl) {
      SLProblem pr = sl_from_json(load_json_file(spec_path));
      T9Report rep = theorem_t9_check(pr, make_grid(grid));
      std::vector<std::vector<double>> rows;
      for (const T9Record& rec : rep.records)
        rows.push_back({rec.r, rec.m_val.real(), rec.m_val.imag(), rec.t_hat_xi,
                        rec.ratio_im, rec.ratio_inv});
      emit_csv(out_path, {"r", "m_re", "m_im", "t_hat", "ratio_im", "ratio_inv"}, rows);
      sink("sl_ratio_bounded", rep.C <= 50.0, band_margin(rep.C, 50.0));
      return finish(sink);
    }
    if (*cmd_tails) {
      HamiltonianModel m = model_from_file(model_path);
      At0Options opt;
      opt.a_prime = a_prime;
      const double p = fpower;
      At0Report rep = at0_check(
          m, [p](double r) { return std::pow(r, p); },
          [p](double r) { return p * std::pow(r, p - 1.0); }, opt);
      std::vector<std::vector<double>> rows;
      const size_t n = std::max(rep.lhs_block.size(), rep.rhs_block.size());
      for (size_t i = 0; i < n; ++i)
        rows.push_back({static_cast<double>(i),
                        i < rep.lhs_block.size() ? rep.lhs_block[i] : 0.0,
                        i < rep.rhs_block.size() ? rep.rhs_block[i] : 0.0});
      emit_csv(out_path, {"block", "lhs_block", "rhs_block"}, rows);
      // The two sides must diverge together.
      sink("tails_equivalence", rep.lhs_divergent == rep.rhs_divergent,
           rep.lhs_divergent == rep.rhs_divergent ? 1.0 : -1.0);
      return finish(sink);
    }
    if (*cmd_all) {
      acceptance::run_all(sink, only);
      return finish(sink);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
