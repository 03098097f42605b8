#include "dftlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "dftlab/density_metrics.hpp"
#include "dftlab/dimer_scan.hpp"
#include "dftlab/errors.hpp"
#include "dftlab/hubbard_dimer.hpp"
#include "dftlab/lieb_oxford.hpp"
#include "dftlab/numerics.hpp"
#include "dftlab/parallel.hpp"
#include "dftlab/semiclassics.hpp"
#include "dftlab/tf_largez.hpp"

namespace dftlab::cli {

using nlohmann::json;

void Axis::validate(const std::string& name) const {
  if (!std::isfinite(min) || !std::isfinite(max)) throw InvalidInput(name + ": range must be finite");
  if (count < 1) throw InvalidInput(name + ": count must be >= 1");
  if (min > max) throw InvalidInput(name + ": min must not exceed max");
}

std::vector<double> Axis::values() const {
  if (count == 1) return {min};
  return numerics::linspace(min, max, count);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty()) throw InvalidInput(path + ":" + std::to_string(lineno) + ": empty key");
    if (key == "config") throw InvalidInput(path + ":" + std::to_string(lineno) + ": nested config");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// output helpers

class Csv {
 public:
  explicit Csv(std::ostream& os) : os_(os) {}

  void header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      os_ << (first ? "" : ",") << c;
      first = false;
    }
    os_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      os_ << (first ? "" : ",") << format_double(v);
      first = false;
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

void write_output(const std::string& text, const RunConfig& cfg, std::ostream& out) {
  if (cfg.output.empty() || cfg.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidInput("cannot write output file '" + cfg.output + "'");
  f << text;
  if (!f) throw InvalidInput("error writing output file '" + cfg.output + "'");
}

void add_axis(CLI::App* sub, Axis& a, const std::string& name, const std::string& what, const std::string& unit) {
  sub->add_option("--" + name + "-min", a.min, "lowest " + what + " " + unit)->capture_default_str();
  sub->add_option("--" + name + "-max", a.max, "highest " + what + " " + unit)->capture_default_str();
  sub->add_option("--" + name + "-count", a.count, "number of " + what + " grid points [count]")->capture_default_str();
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("-o,--output", cfg.output, "output file (default: standard output)");
  // Read and removed before parsing; declared here so it shows in --help.
  sub->add_option("--config", "flat key = value file; keys are long flag names, flags given here win");
}

void add_format(CLI::App* sub, Format& format) {
  sub->add_option("--format", format, "output format: csv or json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}}))
      ->capture_default_str();
}

void add_fail_flag(CLI::App* sub, RunConfig& cfg) {
  sub->add_flag("--fail-on-violation", cfg.fail_on_violation, "exit with status 3 when a violation is found");
}

// Inserts config entries as --key=value right after the subcommand name for
// every key not already on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidInput("--config needs a file argument");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (!path) return kept;
  if (kept.empty()) throw InvalidInput("--config given without a subcommand");
  auto given = [&](const std::string& key) {
    for (std::size_t i = 1; i < kept.size(); ++i) {
      const std::string& a = kept[i];
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
      if (key == "output" && a == "-o") return true;
    }
    return false;
  };
  std::vector<std::string> merged{kept.front()};
  for (const auto& [k, v] : read_config(*path))
    if (!given(k)) merged.push_back("--" + k + "=" + v);
  merged.insert(merged.end(), kept.begin() + 1, kept.end());
  return merged;
}

// ---------------------------------------------------------------------------
// subcommands

struct DimerAcArgs {
  double t = 0.5, u = 5.0, dv = 0.0;
  std::size_t points = 101;
};

int cmd_dimer_ac(const DimerAcArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (a.points < 5) throw InvalidInput("--points must be >= 5");
  const auto curve = dimer::adiabatic_connection(a.t, a.u, a.dv, a.points);
  const auto conv = dimer::convexity_report(curve);
  const auto dec = dimer::decompose_energies(curve, a.t, a.u);
  std::ostringstream os;
  if (cfg.format == Format::csv) {
    Csv csv(os);
    csv.header({"lambda", "uxc", "dv_lambda", "kinetic"});
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
      csv.row({curve.lambdas[i], curve.uxc[i], curve.dvs[i], curve.kinetic[i]});
  } else {
    json j;
    j["t"] = a.t;
    j["u"] = a.u;
    j["dv"] = a.dv;
    j["dn"] = curve.dn_target;
    j["lambda"] = curve.lambdas;
    j["uxc"] = curve.uxc;
    j["dv_lambda"] = curve.dvs;
    j["kinetic"] = curve.kinetic;
    j["convexity"] = {{"min_second_difference", conv.min_second_difference},
                      {"tolerance", conv.tolerance},
                      {"violated", conv.violated},
                      {"monotone", conv.monotone}};
    j["energies"] = {{"ex", dec.ex}, {"ec", dec.ec}, {"tc", dec.tc}, {"uc", dec.uc}, {"ts", dec.ts},
                     {"tc_direct", dec.tc_direct}, {"quadrature_error", dec.quadrature_error},
                     {"tc_bound_holds", dec.tc <= 0.5 * std::abs(dec.uc)}};
    os << j.dump(2) << '\n';
  }
  write_output(os.str(), cfg, out);
  err << "# dn = " << format_double(curve.dn_target) << '\n'
      << "# convexity min second difference = " << format_double(conv.min_second_difference)
      << (conv.violated ? " (VIOLATED)" : "") << '\n'
      << "# ec = " << format_double(dec.ec) << ", tc = " << format_double(dec.tc)
      << ", uc = " << format_double(dec.uc) << '\n'
      << "# tc <= |uc|/2: " << (dec.tc <= 0.5 * std::abs(dec.uc) ? "yes" : "no") << '\n';
  return ok;
}

struct GridArgs {
  double t = 0.5;
  Axis u{0.1, 10.0, 40};
  Axis dv{0.0, 10.0, 40};
  std::size_t lambda_points = 101;
};

int cmd_dimer_scan(const GridArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  a.u.validate("u/t");
  a.dv.validate("dv/t");
  const auto points = dimer::conjecture_scan(a.t, a.u.values(), a.dv.values(), a.lambda_points);
  std::ostringstream os;
  Csv csv(os);
  csv.header({"u_over_t", "dv_over_t", "ec", "tc", "uc", "tc_hf", "convexity_min", "convexity_violated",
              "kinetic_bound_violated", "sign_violated", "tc_hf_negative"});
  for (const auto& p : points)
    csv.row({p.u_over_t, p.dv_over_t, p.ec, p.tc, p.uc, p.tc_hf, p.convexity_min,
             double(p.convexity_violated), double(p.kinetic_bound_violated), double(p.sign_violated),
             double(p.tc_hf_negative)});
  write_output(os.str(), cfg, out);
  const auto s = dimer::summarize(points);
  err << "# points = " << s.points << '\n'
      << "# convexity violations = " << s.convexity_violations << '\n'
      << "# tc <= |uc|/2 violations = " << s.kinetic_bound_violations << '\n'
      << "# sign violations = " << s.sign_violations << '\n'
      << "# tc_hf < 0 = " << s.tc_hf_negative << " (min " << format_double(s.min_tc_hf) << ")\n";
  return cfg.fail_on_violation && s.total_violations() > 0 ? violation : ok;
}

int cmd_hf_kinetic(const GridArgs& a, double tol, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  a.u.validate("u/t");
  a.dv.validate("dv/t");
  const auto us = a.u.values();
  const auto dvs = a.dv.values();
  const std::size_t ncol = dvs.size();
  struct Row {
    double u_over_t, dv_over_t;
    dimer::HFKineticCorrelation k;
  };
  const auto rows = parallel_map<Row>(us.size() * ncol, [&](std::size_t i) {
    const double uo = us[i / ncol], dvo = dvs[i % ncol];
    return Row{uo, dvo, dimer::hf_kinetic_correlation({a.t, uo * a.t, dvo * a.t, 1.0})};
  });
  std::ostringstream os;
  Csv csv(os);
  csv.header({"u_over_t", "dv_over_t", "t_full", "t_hf", "tc_hf"});
  std::size_t negative = 0;
  double min_tc = INFINITY;
  for (const auto& r : rows) {
    csv.row({r.u_over_t, r.dv_over_t, r.k.t_full, r.k.t_hf, r.k.tc_hf});
    if (r.k.tc_hf < -tol) ++negative;
    min_tc = std::min(min_tc, r.k.tc_hf);
  }
  write_output(os.str(), cfg, out);
  err << "# points = " << rows.size() << '\n'
      << "# tc_hf < -" << format_double(tol) << ": " << negative << " (min " << format_double(min_tc) << ")\n";
  return cfg.fail_on_violation && negative > 0 ? violation : ok;
}

struct StaircaseArgs {
  semiclassics::Domain domain = semiclassics::Domain::box1d;
  Axis eps{0.0, 500.0, 1001};
  double length = 1.0;
};

int cmd_staircase(const StaircaseArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream&) {
  a.eps.validate("eps");
  const auto s = semiclassics::remainder_scan(a.domain, a.eps.values(), a.length);
  std::ostringstream os;
  Csv csv(os);
  csv.header({"eps", "n_exact", "n_classical", "n_weyl2", "r_cl", "r_w2"});
  for (std::size_t i = 0; i < s.energies.size(); ++i)
    csv.row({s.energies[i], s.n_exact[i], s.n_classical[i], s.n_weyl2[i], s.r_cl[i], s.r_w2[i]});
  write_output(os.str(), cfg, out);
  return ok;
}

struct MarchPlaskettArgs {
  std::vector<int> electrons{5, 10, 20, 40, 80};
  double length = 1.0;
  std::size_t grid = 64;
};

int cmd_march_plaskett(const MarchPlaskettArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (a.electrons.empty()) throw InvalidInput("--electrons must list at least one count");
  std::ostringstream os;
  Csv csv(os);
  csv.header({"n", "eps_f", "e_exact", "e_classical", "e_nested", "rel_error", "three_over_2n"});
  const auto pot = semiclassics::Potential1D::constant(a.length, a.grid);
  for (int n : a.electrons) {
    if (n < 1) throw InvalidInput("--electrons entries must be >= 1");
    const auto r = semiclassics::march_plaskett_energy_1d(pot, n);
    double exact = 0.0;
    for (double e : semiclassics::box_levels(a.length, static_cast<std::size_t>(n)).eigenvalues) exact += e;
    csv.row({double(n), r.eps_f, exact, r.e_classical, r.e_nested, (exact - r.e_classical) / exact, 1.5 / n});
  }
  write_output(os.str(), cfg, out);
  return ok;
}

struct LoArgs {
  std::vector<double> constants;
  std::string family;
  int electrons = 0;
};

int cmd_lo_check(const LoArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  namespace lo = lieb_oxford;
  std::vector<lo::RadialDensity> suite;
  for (auto& d : lo::density_suite()) {
    if (!a.family.empty() && lo::to_string(d.family) != a.family) continue;
    if (a.electrons != 0 && d.n_electrons != a.electrons) continue;
    suite.push_back(std::move(d));
  }
  if (suite.empty()) throw InvalidInput("no density in the suite matches the filters");
  json j;
  std::size_t failures = 0;
  if (a.constants.empty()) {
    const auto s = lo::scan_suite(suite);
    for (const auto& r : s.reports) j["reports"].push_back(lo::to_json(r));
    j["conjecture_violations"] = s.conjecture_violations;
    j["max_conjecture_ratio"] = s.max_conjecture_ratio;
    failures = s.conjecture_violations;
    err << "# densities = " << s.reports.size() << ", 0.867 violations = " << s.conjecture_violations
        << ", max ratio = " << format_double(s.max_conjecture_ratio) << '\n';
  } else {
    for (const auto& d : suite) {
      const auto r = lo::check_bounds(d, lo::exchange_closed_shell(d), a.constants);
      for (const auto& c : r.checks)
        if (!c.pass && !c.informational) ++failures;
      j["reports"].push_back(lo::to_json(r));
    }
    j["failed_checks"] = failures;
    err << "# densities = " << suite.size() << ", failed checks = " << failures << '\n';
  }
  write_output(j.dump(2) + "\n", cfg, out);
  return cfg.fail_on_violation && failures > 0 ? violation : ok;
}

struct TfArgs {
  std::vector<double> z{1.0, 10.0, 100.0};
  tf::ShootingOptions opts;
  double tolerance = 0.005;
};

int cmd_tf_atom(const TfArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto sol = tf::solve_tf_atom(a.opts);
  std::ostringstream os;
  if (cfg.format == Format::csv) {
    Csv csv(os);
    csv.header({"x", "phi", "dphi"});
    for (std::size_t i = 0; i < sol.x.size(); ++i) csv.row({sol.x[i], sol.phi[i], sol.dphi[i]});
  } else {
    const auto rep = tf::verify_leading_exchange(sol, a.z, a.tolerance);
    json rows = json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"z", r.z}, {"e_x_lda", r.e_x_lda}, {"expected", r.expected}, {"ratio", r.ratio},
                      {"pass", r.pass}});
    json j;
    j["initial_slope"] = sol.initial_slope;
    j["tail_f"] = sol.tail_f;
    j["leading_exchange"] = {{"coefficient", -9.0 * tf::kC2 / 11.0}, {"tolerance", rep.tolerance},
                             {"ratio_spread", rep.ratio_spread}, {"pass", rep.pass()}, {"rows", rows}};
    os << j.dump(2) << '\n';
  }
  write_output(os.str(), cfg, out);
  err << "# initial slope = " << format_double(sol.initial_slope) << '\n';
  return ok;
}

struct FitArgs {
  std::string file;
  std::vector<std::string> basis{"ZlogZ", "Z"};
  bool closed_shell = false;
};

int cmd_largez_fit(const FitArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<tf::BasisTerm> basis;
  for (const auto& b : a.basis) basis.push_back(tf::parse_term(b));
  const auto data = tf::read_exchange_csv_file(a.file);
  const auto fit = tf::fit_asymptotics(data, basis, a.closed_shell);
  write_output(tf::to_json(fit).dump(2) + "\n", cfg, out);
  err << "# points = " << fit.data.size() << ", residual = " << format_double(fit.residual) << '\n';
  return ok;
}

int cmd_dcdft(const GridArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  a.u.validate("u");
  a.dv.validate("dv");
  const auto rows = metrics::dc_scan(a.t, a.u.values(), a.dv.values());
  std::ostringstream os;
  Csv csv(os);
  csv.header({"t", "u", "dv", "de_total", "de_functional", "de_density"});
  double worst_identity = 0.0, max_density = -INFINITY;
  for (const auto& r : rows) {
    csv.row({r.t, r.u, r.dv, r.d.de_total, r.d.de_functional, r.d.de_density});
    worst_identity = std::max(worst_identity, std::abs(r.d.de_total - r.d.de_functional - r.d.de_density));
    max_density = std::max(max_density, r.d.de_density);
  }
  write_output(os.str(), cfg, out);
  err << "# rows = " << rows.size() << ", max |identity residual| = " << format_double(worst_identity)
      << ", max de_density = " << format_double(max_density) << '\n';
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dftlab: exact conditions and semiclassical limits of density functionals", "dftlab"};
  app.require_subcommand(1);
  app.footer("Energies are in hartree (dimer quantities in the same units as t). Exit status: 0 ok, "
             "1 input error, 2 solver error, 3 violation with --fail-on-violation.");

  RunConfig cfg;
  std::function<int()> action;

  DimerAcArgs ac;
  auto* s_ac = app.add_subcommand("dimer-ac", "adiabatic-connection curve of the Hubbard dimer at fixed density");
  s_ac->add_option("--t", ac.t, "hopping t [energy]")->capture_default_str();
  s_ac->add_option("--u", ac.u, "on-site repulsion U [energy]")->capture_default_str();
  s_ac->add_option("--dv", ac.dv, "site potential difference v2 - v1 [energy]")->capture_default_str();
  s_ac->add_option("--points", ac.points, "lambda grid points on [0, 1] [count]")->capture_default_str();
  add_format(s_ac, cfg.format);
  add_common(s_ac, cfg);
  s_ac->callback([&] { action = [&] { return cmd_dimer_ac(ac, cfg, out, err); }; });

  GridArgs scan;
  auto* s_scan = app.add_subcommand("dimer-scan", "convexity, T_C <= |U_C|/2 and sign checks over (u/t, dv/t)");
  s_scan->add_option("--t", scan.t, "hopping t [energy]")->capture_default_str();
  add_axis(s_scan, scan.u, "u", "u/t", "[dimensionless]");
  add_axis(s_scan, scan.dv, "dv", "dv/t", "[dimensionless]");
  s_scan->add_option("--lambda-points", scan.lambda_points, "lambda grid points per curve [count]")
      ->capture_default_str();
  add_fail_flag(s_scan, cfg);
  add_common(s_scan, cfg);
  s_scan->callback([&] { action = [&] { return cmd_dimer_scan(scan, cfg, out, err); }; });

  GridArgs hf;
  double hf_tol = 1e-10;
  auto* s_hf = app.add_subcommand("hf-kinetic", "sign of T - T_HF over (u/t, dv/t)");
  s_hf->add_option("--t", hf.t, "hopping t [energy]")->capture_default_str();
  add_axis(s_hf, hf.u, "u", "u/t", "[dimensionless]");
  add_axis(s_hf, hf.dv, "dv", "dv/t", "[dimensionless]");
  s_hf->add_option("--tolerance", hf_tol, "slack on T - T_HF >= 0 [energy]")->capture_default_str();
  add_fail_flag(s_hf, cfg);
  add_common(s_hf, cfg);
  s_hf->callback([&] { action = [&] { return cmd_hf_kinetic(hf, hf_tol, cfg, out, err); }; });

  StaircaseArgs st;
  auto* s_st = app.add_subcommand("staircase", "exact, Weyl and two-term level counts with remainders");
  std::string domain = "box1d";
  s_st->add_option("--domain", domain, "box1d or square2d (unit square)")
      ->check(CLI::IsMember({"box1d", "square2d"}))
      ->capture_default_str();
  add_axis(s_st, st.eps, "eps", "energy", "[hartree]");
  s_st->add_option("--length", st.length, "box length, box1d only [bohr]")->capture_default_str();
  add_common(s_st, cfg);
  s_st->callback([&] {
    st.domain = domain == "square2d" ? semiclassics::Domain::square2d : semiclassics::Domain::box1d;
    action = [&] { return cmd_staircase(st, cfg, out, err); };
  });

  MarchPlaskettArgs mp;
  auto* s_mp = app.add_subcommand("march-plaskett", "semiclassical energy of N fermions in a 1D box vs exact sum");
  s_mp->add_option("--electrons", mp.electrons, "particle counts, comma separated [count]")
      ->delimiter(',')
      ->capture_default_str();
  s_mp->add_option("--length", mp.length, "box length [bohr]")->capture_default_str();
  s_mp->add_option("--grid", mp.grid, "potential samples [count]")->capture_default_str();
  add_common(s_mp, cfg);
  s_mp->callback([&] { action = [&] { return cmd_march_plaskett(mp, cfg, out, err); }; });

  LoArgs lo;
  auto* s_lo = app.add_subcommand("lo-check", "Lieb-Oxford bound ratios over the model density suite (JSON)");
  s_lo->add_option("--constant", lo.constants, "bound constants to check, comma separated [dimensionless]")
      ->delimiter(',');
  s_lo->add_option("--family", lo.family, "only this family (hydrogenic-1s, exponential, gaussian, mixture)");
  s_lo->add_option("--electrons", lo.electrons, "only densities with this electron count (1 or 2) [count]");
  add_fail_flag(s_lo, cfg);
  add_common(s_lo, cfg);
  s_lo->callback([&] { action = [&] { return cmd_lo_check(lo, cfg, out, err); }; });

  TfArgs tfa;
  Format tf_format = Format::json;
  auto* s_tf = app.add_subcommand("tf-atom", "Thomas-Fermi screening function and leading LDA exchange");
  s_tf->add_option("--z", tfa.z, "atomic numbers for the exchange check, comma separated [count]")
      ->delimiter(',')
      ->capture_default_str();
  s_tf->add_option("--steps", tfa.opts.steps, "RK4 steps in sqrt(x) [count]")->capture_default_str();
  s_tf->add_option("--x-match", tfa.opts.x_match, "end of the shooting interval [TF length units]")
      ->capture_default_str();
  s_tf->add_option("--tolerance", tfa.tolerance, "relative tolerance on E_X^LDA / Z^(5/3) [dimensionless]")
      ->capture_default_str();
  add_format(s_tf, tf_format);
  add_common(s_tf, cfg);
  s_tf->callback([&] {
    cfg.format = tf_format;
    action = [&] { return cmd_tf_atom(tfa, cfg, out, err); };
  });

  FitArgs fit;
  auto* s_fit = app.add_subcommand("largez-fit", "least-squares fit of e_x - e_x_lda in powers of Z (JSON)");
  s_fit->add_option("file,--file", fit.file, "CSV with header Z,e_x,e_x_lda [hartree]")->required();
  s_fit->add_option("--basis", fit.basis, "terms such as Z^7/3, Z^2, ZlogZ, Z, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  s_fit->add_flag("--closed-shell", fit.closed_shell, "keep only closed-shell atoms with Z > 12");
  add_common(s_fit, cfg);
  s_fit->callback([&] { action = [&] { return cmd_largez_fit(fit, cfg, out, err); }; });

  GridArgs dc{0.5, {0.0, 10.0, 20}, {0.0, 10.0, 20}, 0};
  auto* s_dc = app.add_subcommand("dcdft", "density-corrected error decomposition of the dimer exchange functional");
  s_dc->add_option("--t", dc.t, "hopping t [energy]")->capture_default_str();
  add_axis(s_dc, dc.u, "u", "U", "[energy]");
  add_axis(s_dc, dc.dv, "dv", "dv", "[energy]");
  add_common(s_dc, cfg);
  s_dc->callback([&] { action = [&] { return cmd_dcdft(dc, cfg, out, err); }; });

  try {
    const auto args = merge_config(raw_args);
    std::vector<const char*> argv{"dftlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return ok;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n\n" << app.help();
      return input_error;
    }
    for (auto* s : app.get_subcommands()) cfg.subcommand = s->get_name();
    return action ? action() : input_error;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return solver_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return solver_error;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace dftlab::cli
