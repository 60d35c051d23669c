#include "tp/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"

#include "tp/equilibrium.hpp"
#include "tp/oracle.hpp"
#include "tp/report.hpp"
#include "tp/scenario_io.hpp"

namespace tp::cli {

namespace {

constexpr const char* kManifestPath = "runs/manifest.log";

/// Raised by a command when verification finds a mismatch.
struct VerificationFailure {};

struct Style {
  bool color = false;
  std::string paint(std::string_view text, const char* code) const {
    if (!color) return std::string(text);
    return std::string("\033[") + code + "m" + std::string(text) + "\033[0m";
  }
};

std::string sci(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2e", value);
  return buffer;
}

struct Invocation {
  std::string scenario_path;
  bool no_manifest = false;
  std::vector<std::string> outputs;
  std::string digest;
};

// --- solve -----------------------------------------------------------------

struct SolveFlags {
  std::string method = "closed";
  double tolerance = 1e-9;
};

void cmd_solve(const io::LoadedScenario& loaded, const SolveFlags& flags, std::ostream& out) {
  const Scenario& s = loaded.scenario;
  if (flags.method == "closed") {
    out << report::to_json(closed_form_deviation(s)).dump(2) << '\n';
  } else if (flags.method == "numeric") {
    out << report::to_json(numeric_optimal_price(s, flags.tolerance)).dump(2) << '\n';
  } else {
    const SolveResult closed = closed_form_deviation(s);
    const SolveResult numeric = numeric_optimal_price(s, flags.tolerance);
    nlohmann::ordered_json both{
        {"closed", report::to_json(closed)},
        {"numeric", report::to_json(numeric)},
        {"abs_discrepancy", std::abs(closed.optimal_price - numeric.optimal_price)}};
    out << both.dump(2) << '\n';
  }
}

// --- sweep -----------------------------------------------------------------

struct SweepFlags {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  std::string csv_path;
  std::string svg_path;
};

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw io::IoError("cannot open '" + path + "' for writing");
  file << contents;
  file.close();
  if (!file) throw io::IoError("error while writing '" + path + "'");
}

void cmd_sweep(const io::LoadedScenario& loaded, const SweepFlags& flags, Invocation& inv,
               std::ostream& out) {
  const SweepTable table = sweep(loaded.scenario, flags.param, flags.from, flags.to, flags.steps);

  std::ostringstream csv;
  report::write_sweep_csv(csv, table);
  write_file(flags.csv_path, csv.str());
  inv.outputs.push_back(flags.csv_path);

  if (!flags.svg_path.empty()) {
    std::ostringstream svg;
    report::write_line_chart_svg(svg, report::deviation_series(table),
                                 "Transfer price deviation vs " + flags.param);
    write_file(flags.svg_path, svg.str());
    inv.outputs.push_back(flags.svg_path);
  }
  out << "wrote " << table.rows.size() << " rows to " << flags.csv_path << '\n';
}

// --- decompose -------------------------------------------------------------

struct DecomposeFlags {
  std::string param;
  double new_value = 0.0;
};

void cmd_decompose(const io::LoadedScenario& loaded, const DecomposeFlags& flags,
                   std::ostream& out) {
  const auto parameter =
      flags.param == "theta" ? EnforcementParameter::Theta : EnforcementParameter::UnitPenalty;
  const EffectDecomposition effects =
      enforcement_effect_decomposition(loaded.scenario, parameter, flags.new_value);
  nlohmann::ordered_json doc{{"parameter", flags.param},
                             {"new_value", report::round12(flags.new_value)}};
  const nlohmann::ordered_json effects_doc = report::to_json(effects);
  for (const auto& [key, value] : effects_doc.items()) doc[key] = value;
  out << doc.dump(2) << '\n';
}

// --- verify ----------------------------------------------------------------

struct VerifyFlags {
  int samples = 100;
  std::uint64_t seed = 42;
  double grid_step = 1e-4;
  double tolerance = 1e-8;
  double rel_tol = 1e-6;
};

enum class Status { Pass, Fail, Skip };

struct CheckRow {
  std::string name;
  Status status;
  std::string detail;
};

// Central difference of the closed-form deviation in G, moving G through the
// harmed jurisdiction's unit penalty (G = theta * penalty).
double fd_sensitivity(const Scenario& s) {
  const auto enforcement = *active_enforcement(s);
  Scenario plus = s, minus = s;
  Jurisdiction& jp = enforcement.harmed_jurisdiction == 1 ? plus.jurisdiction_1 : plus.jurisdiction_2;
  Jurisdiction& jm =
      enforcement.harmed_jurisdiction == 1 ? minus.jurisdiction_1 : minus.jurisdiction_2;
  const double h = oracle::default_step(enforcement.unit_penalty);
  jp.unit_penalty += h;
  jm.unit_penalty -= h;
  const double dg = enforcement.theta * ((jp.unit_penalty - jm.unit_penalty) / 2.0);
  return (closed_form_deviation(plus).deviation - closed_form_deviation(minus).deviation) /
         (2.0 * dg);
}

void cmd_verify(const io::LoadedScenario& loaded, const VerifyFlags& flags, const Style& style,
                std::ostream& out) {
  if (flags.samples < 1) throw ValidationError("samples", "must be >= 1");
  if (!(flags.grid_step > 0.0)) throw ValidationError("grid-step", "must be > 0");
  if (!(flags.tolerance > 0.0)) throw ValidationError("tolerance", "must be > 0");
  if (!(flags.rel_tol >= 0.0)) throw ValidationError("rel-tol", "must be >= 0");

  const Scenario& s = loaded.scenario;
  const RegimeClass regime = regime_of(s);
  const SolveResult closed = closed_form_deviation(s);
  const double w = s.band.arms_length_price;
  std::vector<CheckRow> rows;

  for (const auto side : {RegimeClass::HighTP, RegimeClass::LowTP}) {
    const auto rep = oracle::check_alpha_conditions(s.band, side, flags.samples, flags.seed,
                                                    flags.rel_tol);
    std::string detail = "samples=" + std::to_string(rep.samples_checked) +
                         " worst_rel=" + sci(rep.worst_violation);
    if (!rep.zero_at_w_ok) detail += " alpha(w)!=0";
    if (!rep.sign_condition_ok) detail += " sign";
    if (!rep.convexity_ok) detail += " convexity";
    rows.push_back({side == RegimeClass::HighTP ? "alpha conditions, side above w"
                                                : "alpha conditions, side below w",
                    rep.all_ok() ? Status::Pass : Status::Fail, detail});
  }

  {
    const double lo = regime == RegimeClass::Neutral ? s.band.limit_below
                                                     : std::min(w, active_limit(s.band, regime));
    const double hi = regime == RegimeClass::Neutral ? s.band.limit_above
                                                     : std::max(w, active_limit(s.band, regime));
    const double step = std::min(flags.grid_step, hi - lo);
    const double found = oracle::grid_argmax(s, {lo, hi, step});
    const double diff = std::abs(found - closed.optimal_price);
    rows.push_back({"closed form vs grid argmax", diff <= step ? Status::Pass : Status::Fail,
                    "|dp|=" + sci(diff) + " step=" + sci(step)});
  }

  {
    const SolveResult numeric = numeric_optimal_price(s, flags.tolerance);
    const double diff = std::abs(numeric.optimal_price - closed.optimal_price);
    const bool same_kind = numeric.solution_kind == closed.solution_kind;
    rows.push_back({"closed form vs golden section",
                    diff <= flags.tolerance && same_kind ? Status::Pass : Status::Fail,
                    "|dp|=" + sci(diff) + " tol=" + sci(flags.tolerance) +
                        (same_kind ? "" : " kind mismatch")});
  }

  if (closed.solution_kind == SolutionKind::Interior) {
    const double curvature = second_order_value(s, closed.optimal_price);
    rows.push_back({"second-order condition", curvature < 0.0 ? Status::Pass : Status::Fail,
                    "phi_pp=" + sci(curvature)});

    const double analytic = require_interior_sensitivity(s);
    const double numeric = fd_sensitivity(s);
    const double rel = std::abs(analytic - numeric) / std::abs(analytic);
    const bool shrinking = analytic * closed.deviation < 0.0;
    rows.push_back({"enforcement sensitivity vs FD",
                    rel <= flags.rel_tol && shrinking ? Status::Pass : Status::Fail,
                    "d(p-w)/dG=" + sci(analytic) + " rel=" + sci(rel) +
                        (shrinking ? "" : " not shrinking")});
  } else {
    const std::string why = "solution is " + std::string(to_string(closed.solution_kind));
    rows.push_back({"second-order condition", Status::Skip, why});
    rows.push_back({"enforcement sensitivity vs FD", Status::Skip, why});
  }

  out << "regime " << to_string(regime) << ", closed-form solution "
      << to_string(closed.solution_kind) << ", p*=" << report::format_number(closed.optimal_price)
      << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%-32s %-6s %s\n", "CHECK", "STATUS", "DETAIL");
  out << line;
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& row : rows) {
    const char* label = row.status == Status::Pass ? "PASS" : row.status == Status::Fail ? "FAIL" : "SKIP";
    const char* code = row.status == Status::Pass ? "32" : row.status == Status::Fail ? "31" : "33";
    (row.status == Status::Pass ? passed : row.status == Status::Fail ? failed : skipped)++;
    std::snprintf(line, sizeof line, "%-32s ", row.name.c_str());
    out << line << style.paint(label, code) << std::string(6 - std::string_view(label).size() + 1, ' ')
        << row.detail << '\n';
  }
  out << "summary: " << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
  if (failed > 0) throw VerificationFailure{};
}

std::string join(const std::vector<std::string>& args) {
  std::string line = "tp";
  for (const auto& a : args) line += ' ' + a;
  return line;
}

bool color_enabled(const std::ostream& out) {
  const char* env = std::getenv("TP_NO_COLOR");
  if (env != nullptr && std::string_view(env) == "1") return false;
  return &out == &std::cout && ::isatty(STDOUT_FILENO) != 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transfer pricing under tax enforcement: optimal price solver", "tp"};
  app.require_subcommand(1);
  app.fallthrough();

  Invocation inv;
  app.add_flag("--no-manifest", inv.no_manifest, "Do not append to runs/manifest.log");

  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "Solve for the optimal transfer price");
  solve->add_option("scenario", inv.scenario_path, "Scenario JSON file")->required();
  solve->add_option("--method", solve_flags.method, "closed, numeric or both")
      ->check(CLI::IsMember({"closed", "numeric", "both"}));
  solve->add_option("--tolerance", solve_flags.tolerance, "Numeric solver tolerance");

  SweepFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter and write CSV/SVG");
  sweep_cmd->add_option("scenario", inv.scenario_path, "Scenario JSON file")->required();
  sweep_cmd->add_option("--param", sweep_flags.param, "Parameter to sweep")->required();
  sweep_cmd->add_option("--from", sweep_flags.from, "First value")->required();
  sweep_cmd->add_option("--to", sweep_flags.to, "Last value")->required();
  sweep_cmd->add_option("--steps", sweep_flags.steps, "Number of points (>= 2)")->required();
  sweep_cmd->add_option("--out", sweep_flags.csv_path, "CSV output path")->required();
  sweep_cmd->add_option("--svg", sweep_flags.svg_path, "Optional SVG chart path");

  DecomposeFlags decompose_flags;
  auto* decompose = app.add_subcommand("decompose", "Spillover and deterrent effects");
  decompose->add_option("scenario", inv.scenario_path, "Scenario JSON file")->required();
  decompose->add_option("--param", decompose_flags.param, "theta or unit_penalty")
      ->required()
      ->check(CLI::IsMember({"theta", "unit_penalty"}));
  decompose->add_option("--new-value", decompose_flags.new_value, "Perturbed value")->required();

  VerifyFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "Check closed forms against the oracles");
  verify->add_option("scenario", inv.scenario_path, "Scenario JSON file")->required();
  verify->add_option("--samples", verify_flags.samples, "Detection-curve samples per side");
  verify->add_option("--seed", verify_flags.seed, "Sampling seed");
  verify->add_option("--grid-step", verify_flags.grid_step, "Grid oracle step");
  verify->add_option("--tolerance", verify_flags.tolerance, "Golden-section agreement tolerance");
  verify->add_option("--rel-tol", verify_flags.rel_tol, "Finite-difference relative tolerance");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  const Style style{color_enabled(out)};
  int code = kSuccess;
  try {
    const io::LoadedScenario loaded = io::load_scenario(inv.scenario_path);
    inv.digest = loaded.digest;
    for (const auto& warning : loaded.warnings) err << "warning: " << warning << '\n';

    if (solve->parsed()) cmd_solve(loaded, solve_flags, out);
    else if (sweep_cmd->parsed()) cmd_sweep(loaded, sweep_flags, inv, out);
    else if (decompose->parsed()) cmd_decompose(loaded, decompose_flags, out);
    else cmd_verify(loaded, verify_flags, style, out);
  } catch (const VerificationFailure&) {
    code = kVerificationMismatch;
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << '\n';
    code = kIoError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    code = kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kInputError;
  }

  if (!inv.no_manifest) {
    try {
      io::append_run_record(kManifestPath, {io::utc_timestamp_now(), join(args), inv.digest,
                                            inv.outputs, code});
    } catch (const io::IoError& e) {
      err << "error: " << e.what() << '\n';
      if (code == kSuccess) code = kIoError;
    }
  }
  return code;
}

}  // namespace tp::cli
