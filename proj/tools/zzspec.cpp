// zzspec command line front end: solve, study, validate.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure (including
// a failed validation suite), 1 unexpected internal error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "zzspec/assemble.hpp"
#include "zzspec/errors.hpp"
#include "zzspec/json_io.hpp"
#include "zzspec/studies.hpp"
#include "zzspec/validation.hpp"

namespace fs = std::filesystem;
using namespace zzspec;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::optional<double> h;
  std::optional<int> refine;
  std::string sector;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string matrix_market;
  bool perturb_symmetry = false;
};

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

RunConfig resolve(const Overrides& o, const std::string& command) {
  if (o.config.empty()) throw ConfigError(command + " needs --config <path>");
  RunConfig c = load_config(o.config);
  if (!c.command.empty() && c.command != command)
    throw ConfigError("config is for '" + c.command + "', not '" + command + "'");
  c.command = command;
  if (o.h) c.solver.grid.h = *o.h;
  if (o.refine) c.solver.refine = *o.refine;
  if (!o.sector.empty()) c.solver.grid.sector = sector_from_string(o.sector);
  if (o.seed) c.solver.seed = *o.seed;
  if (!o.format.empty()) c.format = format_from_string(o.format);
  if (!o.out.empty()) c.out_dir = o.out;
  c.validate();
  return c;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["schema"] = kConfigSchema;
  j["command"] = c.command;
  j["domain"] = c.domain ? to_json(*c.domain) : Json(nullptr);
  j["solver"] = to_json(c.solver);
  j["units"] = to_json(c.units);
  if (c.study) {
    Json s;
    s["type"] = to_string(c.study->kind);
    switch (c.study->kind) {
      case StudyKind::sweep: s.update(to_json(c.study->sweep)); break;
      case StudyKind::loops:
        s["radius"] = c.study->loops.radius;
        s["halfwidth"] = c.study->loops.halfwidth;
        s["eps"] = c.study->loops.eps;
        s["modes"] = c.study->loops.modes;
        break;
      case StudyKind::fiber: s["twist_rates"] = c.study->twist_rates; break;
      case StudyKind::adjudicate:
        s["profiles"] = {to_json(c.study->adjudicate.first), to_json(c.study->adjudicate.second)};
        s["width"] = c.study->adjudicate.width;
        s["betas"] = c.study->adjudicate.betas;
        break;
    }
    j["study"] = s;
  }
  return j;
}

// Result document: everything but "run" depends only on the configuration.
void emit(const RunConfig& c, const Json& result, const std::string& csv, double seconds) {
  fs::create_directories(c.out_dir);
  const fs::path base = fs::path(c.out_dir) / c.stem;
  if (c.format != OutputFormat::csv) {
    Json doc;
    doc["schema"] = kResultSchema;
    doc["command"] = c.command;
    doc["config"] = config_json(c);
    doc["result"] = result;
    doc["run"] = {{"timestamp", utc_timestamp()}, {"seconds", seconds}};
    write_file(base.string() + ".json", doc.dump(2) + "\n");
  }
  if (c.format != OutputFormat::json) write_file(base.string() + ".csv", csv);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_solve(const Overrides& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig c = resolve(o, "solve");
  const SolveReport r = solve_domain(*c.domain, c.solver, c.units);
  if (!o.matrix_market.empty()) {
    const GridOperator op =
        discretize(build_domain(*c.domain, {c.solver.truncation, 0}), refined(c.solver.grid, c.solver.refine));
    fs::create_directories(fs::path(o.matrix_market).parent_path().empty()
                               ? fs::path(".")
                               : fs::path(o.matrix_market).parent_path());
    write_matrix_market(o.matrix_market + "_A.mtx", op.A);
    write_matrix_market(o.matrix_market + "_B.mtx", op.B);
  }
  emit(c, to_json(r), eigen_table_csv(r.dirac), elapsed(t0));

  std::printf("%s: %zu level(s), %lld unknowns on the finest grid\n", r.kind.c_str(), r.levels.size(),
              static_cast<long long>(r.levels.back().unknowns));
  if (r.threshold) std::printf("  essential threshold  %.10g\n", *r.threshold);
  for (const DiracPair& p : r.dirac.discrete)
    std::printf("  lambda %.10g  dirac +-%.10g  multiplicity %d\n", p.laplace, p.plus, p.multiplicity);
  if (r.dirac.discrete.empty()) std::printf("  no discrete eigenvalues below the threshold\n");
  return 0;
}

std::string loops_csv(const LoopComparison& l) {
  std::ostringstream os;
  os.precision(17);
  os << "label,lambda1,lambda1_finest\n";
  os << l.annulus.label << ',' << l.annulus.lambda1 << ',' << l.annulus.lambda1_finest << '\n';
  for (const LoopCase& c : l.loops) os << c.label << ',' << c.lambda1 << ',' << c.lambda1_finest << '\n';
  return os.str();
}

std::string fiber_csv(const FiberStudy& f) {
  std::ostringstream os;
  os.precision(17);
  os << "twist_rate,value,error_estimate\n";
  for (const FiberCase& c : f.cases) os << c.twist_rate << ',' << c.value << ',' << c.error_estimate << '\n';
  return os.str();
}

std::string adjudication_csv(const Adjudication& a) {
  std::ostringstream os;
  os.precision(17);
  os << "profile,beta,gap,gap_over_beta2\n";
  auto rows = [&](const CoefficientFit& c, int id) {
    for (std::size_t i = 0; i < c.beta.size(); ++i)
      os << id << ',' << c.beta[i] << ',' << c.gap[i] << ',' << c.gap[i] / (c.beta[i] * c.beta[i]) << '\n';
  };
  rows(a.first, 1);
  rows(a.second, 2);
  return os.str();
}

int cmd_study(const Overrides& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig c = resolve(o, "study");
  const StudyConfig& s = *c.study;
  switch (s.kind) {
    case StudyKind::sweep: {
      const SweepReport r = run_sweep(*c.domain, s.sweep, c.solver, c.units);
      emit(c, to_json(r), sweep_table_csv(r), elapsed(t0));
      for (const SweepPoint& p : r.points)
        std::printf("  %s=%-10g gap %-14.8g%s\n", r.parameter.c_str(), p.x, p.gap.value_or(0.0),
                    p.censored ? " (censored)" : "");
      if (r.fit)
        std::printf("  fitted exponent %.4f +- %.4f (expected %.1f)\n", r.fit->exponent, r.fit->half_width,
                    r.fit->expected);
      break;
    }
    case StudyKind::loops: {
      const LoopComparison l =
          compare_loops(s.loops.radius, s.loops.halfwidth, s.loops.eps, s.loops.modes, c.solver);
      emit(c, to_json(l), loops_csv(l), elapsed(t0));
      std::printf("  annulus %.10g (oracle %.10g)\n", l.annulus.lambda1, l.annulus_oracle);
      for (const LoopCase& lc : l.loops) std::printf("  %-14s %.10g\n", lc.label.c_str(), lc.lambda1);
      std::printf("  annulus maximal: %s\n", l.annulus_maximal ? "yes" : "no");
      break;
    }
    case StudyKind::fiber: {
      const CrossSection2D section = std::holds_alternative<CrossSection2D>(c.domain->geometry)
                                         ? std::get<CrossSection2D>(c.domain->geometry)
                                         : std::get<TwistedFiber>(c.domain->geometry).section;
      const FiberStudy f = twisted_fiber_study(section, s.twist_rates, c.solver);
      emit(c, to_json(f), fiber_csv(f), elapsed(t0));
      for (const FiberCase& fc : f.cases)
        std::printf("  twist %-6g bottom %.10g +- %.2g\n", fc.twist_rate, fc.value, fc.error_estimate);
      break;
    }
    case StudyKind::adjudicate: {
      const Adjudication a = adjudicate_deformed(s.adjudicate.first, s.adjudicate.second,
                                                 s.adjudicate.width, s.adjudicate.betas, c.solver);
      emit(c, to_json(a), adjudication_csv(a), elapsed(t0));
      std::printf("  C1 %.6g +- %.2g, C2 %.6g +- %.2g\n", a.first.fit.intercept, a.first.fit.intercept_stderr,
                  a.second.fit.intercept, a.second.fit.intercept_stderr);
      std::printf("  ratio %.4f +- %.4f (linear %.3g, quadratic %.3g): %s\n", a.ratio, a.ratio_stderr,
                  a.mean_ratio, a.mean_ratio * a.mean_ratio, a.verdict.c_str());
      break;
    }
  }
  return 0;
}

int cmd_validate(const Overrides& o) {
  const auto t0 = std::chrono::steady_clock::now();
  ValidationOptions opts;
  opts.perturb_symmetry = o.perturb_symmetry;
  const ValidationReport rep = run_validation(opts);
  Json checks = Json::array();
  for (const ValidationCheck& c : rep.checks) {
    std::printf("%s  %-48s %s\n", c.passed ? "pass" : "FAIL", c.name.c_str(), c.detail.c_str());
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"reference", c.reference},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  std::printf("%zu checks, %d failed\n", rep.checks.size(), rep.failures());
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    Json doc;
    doc["schema"] = kResultSchema;
    doc["command"] = "validate";
    doc["result"] = {{"checks", checks}, {"passed", rep.passed()}, {"perturb_symmetry", o.perturb_symmetry}};
    doc["run"] = {{"timestamp", utc_timestamp()}, {"seconds", elapsed(t0)}};
    write_file(fs::path(o.out) / "validate.json", doc.dump(2) + "\n");
  }
  return rep.passed() ? 0 : 3;
}

int report_error(const char* type, const std::string& message, int code) {
  const Json rec = {{"error", {{"type", type}, {"message", message}, {"exit_code", code}}}};
  std::cerr << rec.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet Laplacian and Dirac spectra of waveguide geometries"};
  app.require_subcommand(1, 1);
  // --h is the grid spacing, so help is long-form only.
  app.set_help_flag("--help", "print this help and exit");
  Overrides o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--h", o.h, "coarsest grid spacing")->check(CLI::PositiveNumber);
    sub->add_option("--refine", o.refine, "extra grids, each halving h")->check(CLI::Range(0, 2));
    sub->add_option("--sector", o.sector, "symmetry sector")->check(CLI::IsMember({"full", "ee", "eo", "oe", "oo"}));
    sub->add_option("--seed", o.seed, "seed of the Lanczos starting block");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "both"}));
  };
  CLI::App* solve = app.add_subcommand("solve", "eigenvalues, Dirac map and essential spectrum of one geometry");
  add_common(solve);
  solve->add_option("--matrix-market", o.matrix_market, "write the finest A and B as <prefix>_A.mtx, <prefix>_B.mtx");
  CLI::App* study = app.add_subcommand("study", "parameter sweep, loop comparison, fibre study or adjudication");
  add_common(study);
  CLI::App* validate = app.add_subcommand("validate", "oracle suite");
  validate->add_option("--out", o.out, "write validate.json to this directory");
  validate->add_flag("--perturb-symmetry", o.perturb_symmetry, "negative control: break one matrix symmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return report_error("config", e.what(), 2);
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (study->parsed()) return cmd_study(o);
    return cmd_validate(o);
  } catch (const OutOfScopeError& e) {
    return report_error("out_of_scope", e.what(), 2);
  } catch (const ConfigError& e) {
    return report_error("config", e.what(), 2);
  } catch (const NumericalError& e) {
    return report_error("numerical", e.what(), 3);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
}
