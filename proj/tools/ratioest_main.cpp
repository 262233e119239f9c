// Command-line front end.
//
//   ratioest generate  --config <json> [--out f] [--format csv|markdown] [--full-precision]
//   ratioest verify    --config <json> [--tolerance t]
//   ratioest mc-check  --config <json> [--seed s] [--threads t]
//   ratioest enumerate --pop <csv> --n <k> [--A a] [--draws d] [--cap c]
//   ratioest repro     --target table1|table2|table3|mc_check
//
// The config file is a single JSON document with optional sections "grid",
// "verify", "mc" and "point"; every flag overrides its config counterpart.
// Exit codes: 0 success / all match, 1 verification failure, 2 bad usage,
// unreadable input or invalid configuration.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ratioest/ratioest.hpp"

namespace {

using nlohmann::json;

struct VerifySection {
  std::string reference;
  std::string exclusions;
  double tolerance = 0.02;
};

struct Config {
  std::optional<ratioest::GridSpec> grid;
  std::optional<ratioest::McConfig> mc;
  std::optional<ratioest::ClosedFormInputs> point;
  std::optional<VerifySection> verify;
};

ratioest::GridSpec parse_grid(const json& j) {
  ratioest::GridSpec g;
  g.N = j.at("N").get<std::int64_t>();
  g.delta = j.at("delta").get<double>();
  g.theta = j.at("theta").get<double>();
  g.alphas = j.at("alphas").get<std::vector<double>>();
  g.betas = j.at("betas").get<std::vector<double>>();
  g.gs = j.at("gs").get<std::vector<double>>();
  g.ns = j.at("ns").get<std::vector<std::int64_t>>();
  for (const auto& [key, value] : j.at("A_values_per_alpha").items()) {
    g.a_values_per_alpha[std::stod(key)] = value.get<std::vector<double>>();
  }
  return g;
}

ratioest::McConfig parse_mc(const json& j) {
  ratioest::McConfig cfg;
  cfg.n_populations = j.at("n_populations").get<std::int64_t>();
  cfg.designs_per_population = j.at("designs_per_population").get<std::int64_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  const std::string law = j.value("error_law", "normal");
  if (law == "normal") {
    cfg.error_law = ratioest::ErrorLaw::normal;
  } else if (law == "shifted_exponential") {
    cfg.error_law = ratioest::ErrorLaw::shifted_exponential;
  } else {
    throw std::runtime_error("config: unknown error_law '" + law +
                             "' (expected normal or shifted_exponential)");
  }
  return cfg;
}

ratioest::ClosedFormInputs parse_point(const json& j) {
  ratioest::ClosedFormInputs in;
  in.sp.alpha = j.at("alpha").get<double>();
  in.sp.beta = j.at("beta").get<double>();
  in.sp.delta = j.at("delta").get<double>();
  in.sp.g = j.at("g").get<double>();
  in.sp.theta = j.at("theta").get<double>();
  in.dp.N = j.at("N").get<std::int64_t>();
  in.dp.n = j.at("n").get<std::int64_t>();
  in.a = j.at("A").get<double>();
  return in;
}

Config load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path();
  const auto resolve = [&dir](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (dir / fp).string();
  };

  Config cfg;
  if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
  if (j.contains("mc")) cfg.mc = parse_mc(j.at("mc"));
  if (j.contains("point")) cfg.point = parse_point(j.at("point"));
  if (j.contains("verify")) {
    VerifySection v;
    v.reference = resolve(j.at("verify").at("reference").get<std::string>());
    v.exclusions = resolve(j.at("verify").at("exclusions").get<std::string>());
    v.tolerance = j.at("verify").value("tolerance", 0.02);
    cfg.verify = v;
  }
  return cfg;
}

ratioest::Population load_population_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open population file: " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error(path + ":1: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y") throw std::runtime_error(path + ":1: expected header 'x,y'");
  ratioest::Population pop;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = path + ":" + std::to_string(lineno);
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error(where + ": expected 'x,y' row");
    pop.x.push_back(ratioest::detail::parse_double(line.substr(0, comma), where));
    pop.y.push_back(ratioest::detail::parse_double(line.substr(comma + 1), where));
  }
  return pop;
}

// Writes to --out if given, else stdout.
int with_output(const std::string& out_path, const std::function<void(std::ostream&)>& fn) {
  if (out_path.empty()) {
    fn(std::cout);
    return 0;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  fn(f);
  return 0;
}

void print_design_expectation(const std::string& label,
                              const ratioest::DesignExpectation& de) {
  std::printf("%-22s bias % .10g", label.c_str(), de.bias);
  if (de.bias_se > 0) std::printf(" (se %.3g)", de.bias_se);
  std::printf("  mse % .10g", de.mse);
  if (de.mse_se > 0) std::printf(" (se %.3g)", de.mse_se);
  std::printf("  samples %lld\n", static_cast<long long>(de.n_samples_enumerated));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shifted-ratio estimator toolkit: closed forms, exact SRSWOR "
               "expectations, Monte Carlo verification, reference-table checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed_override, "override the Monte Carlo seed");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "markdown"}));
  app.add_option("--threads", threads, "worker threads for Monte Carlo runs")
      ->check(CLI::PositiveNumber);

  auto* cmd_generate = app.add_subcommand("generate", "compute efficiency cells over the grid");
  bool full_precision = false;
  cmd_generate->add_flag("--full-precision", full_precision,
                         "emit E1/E2 with 17 significant digits (csv only)");

  auto* cmd_verify =
      app.add_subcommand("verify", "regenerate the grid and compare against the reference");
  std::optional<double> tol_override;
  cmd_verify->add_option("--tolerance", tol_override, "absolute tolerance on rounded values");

  auto* cmd_mc = app.add_subcommand("mc-check", "Monte Carlo cross-check of the closed forms");

  auto* cmd_enum =
      app.add_subcommand("enumerate", "design expectations for a population file");
  std::string pop_path;
  std::int64_t enum_n = 0;
  double enum_a = 0.0;
  std::int64_t enum_draws = 0;
  std::int64_t enum_cap = ratioest::kDefaultEnumerationCap;
  cmd_enum->add_option("--pop", pop_path, "population CSV with header x,y")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_enum->add_option("--n", enum_n, "sample size")->required();
  cmd_enum->add_option("--A", enum_a, "shift for the alternative estimator (default 0)");
  cmd_enum->add_option("--draws", enum_draws,
                       "use this many random samples instead of exhaustive enumeration");
  cmd_enum->add_option("--cap", enum_cap, "maximum C(N,n) for exhaustive enumeration");

  auto* cmd_repro = app.add_subcommand("repro", "print the commands reproducing a deliverable");
  std::string target;
  cmd_repro->add_option("--target", target, "table1|table2|table3|mc_check")->required();

  // Accept the global options after the subcommand name as well.
  for (auto* sub : {cmd_generate, cmd_verify, cmd_mc, cmd_enum, cmd_repro}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_generate->parsed() || cmd_verify->parsed() || cmd_mc->parsed()) {
      if (config_path.empty()) {
        std::cerr << "error: --config is required for this subcommand\n";
        return 2;
      }
    }

    if (cmd_generate->parsed()) {
      const Config cfg = load_config(config_path);
      if (!cfg.grid) throw std::runtime_error("config has no \"grid\" section");
      const auto cells = ratioest::generate_table(*cfg.grid);
      return with_output(out_path, [&](std::ostream& os) {
        if (format == "markdown") {
          ratioest::render_markdown(os, cells);
        } else {
          ratioest::write_cells_csv(os, cells, full_precision);
        }
      });
    }

    if (cmd_verify->parsed()) {
      const Config cfg = load_config(config_path);
      if (!cfg.grid) throw std::runtime_error("config has no \"grid\" section");
      if (!cfg.verify) throw std::runtime_error("config has no \"verify\" section");
      const double tol = tol_override.value_or(cfg.verify->tolerance);
      const auto cells = ratioest::generate_table(*cfg.grid);
      const auto exclusions = ratioest::load_exclusions_csv(cfg.verify->exclusions);
      const auto report = ratioest::verify_against_reference(cells, cfg.verify->reference,
                                                             tol, exclusions);
      std::printf("reference : %s\n", cfg.verify->reference.c_str());
      std::printf("tolerance : %g on 2-decimal rounded values\n", tol);
      std::printf("cells     : %lld scalar values\n",
                  static_cast<long long>(report.total_cells));
      std::printf("matched   : %lld\n", static_cast<long long>(report.matched));
      std::printf("excluded  : %lld (documented deviations; see exclusions file)\n",
                  static_cast<long long>(report.excluded_known_typos.size()));
      std::printf("mismatched: %lld\n", static_cast<long long>(report.mismatched.size()));
      for (const auto& m : report.mismatched) {
        std::printf("  alpha=%g g=%g beta=%g n=%lld A=%g %s: reference %.2f, computed %.2f\n",
                    m.cell.alpha, m.cell.g, m.cell.beta, static_cast<long long>(m.cell.n),
                    m.cell.a, m.cell.field.c_str(), m.expected, m.got);
      }
      return report.mismatched.empty() ? 0 : 1;
    }

    if (cmd_mc->parsed()) {
      const Config cfg = load_config(config_path);
      if (!cfg.point) throw std::runtime_error("config has no \"point\" section");
      if (!cfg.mc) throw std::runtime_error("config has no \"mc\" section");
      ratioest::McConfig mc_cfg = *cfg.mc;
      if (seed_override) mc_cfg.seed = *seed_override;
      const auto report = ratioest::mc_crosscheck(*cfg.point, mc_cfg, threads);
      std::printf("populations %lld x designs %lld, seed %llu, error law %s\n",
                  static_cast<long long>(mc_cfg.n_populations),
                  static_cast<long long>(mc_cfg.designs_per_population),
                  static_cast<unsigned long long>(mc_cfg.seed),
                  mc_cfg.error_law == ratioest::ErrorLaw::normal ? "normal"
                                                                 : "shifted_exponential");
      std::printf("%-34s %14s %14s %12s %8s\n", "quantity", "closed form", "monte carlo",
                  "std error", "z");
      bool ok = true;
      for (const auto& row : report.rows) {
        std::printf("%-34s %14.8g %14.8g %12.3g %8.2f%s\n", row.name.c_str(), row.closed,
                    row.mc, row.std_error, row.z,
                    row.arbitration ? "  [known-bad variant, expected to fail]" : "");
        if (!row.arbitration && !(std::abs(row.z) <= 3.0)) ok = false;
      }
      std::printf("%s\n", ok ? "all closed forms within 3 standard errors"
                             : "DISAGREEMENT: some closed form is off by more than 3 sigma");
      return ok ? 0 : 1;
    }

    if (cmd_enum->parsed()) {
      const auto pop = load_population_csv(pop_path);
      const ratioest::DesignParams dp{pop.size(), enum_n};
      const std::array<std::pair<std::string, ratioest::EstimatorSpec>, 3> ests = {{
          {"mean", ratioest::EstimatorSpec::mean()},
          {"ratio", ratioest::EstimatorSpec::ratio()},
          {"alternative(A=" + ratioest::detail::format_minimal(enum_a) + ")",
           ratioest::EstimatorSpec::alternative(enum_a)},
      }};
      for (const auto& [label, est] : ests) {
        const auto de =
            enum_draws > 0
                ? ratioest::sampled_design_expectation(pop, dp, est, enum_draws,
                                                       seed_override.value_or(1))
                : ratioest::exact_design_expectation(pop, dp, est, enum_cap);
        print_design_expectation(label, de);
      }
      return 0;
    }

    if (cmd_repro->parsed()) {
      const auto t = ratioest::parse_repro_target(target);
      if (!t) {
        std::cerr << "error: unknown reproduction target '" << target
                  << "' (expected table1, table2, table3 or mc_check)\n";
        return 2;
      }
      return with_output(out_path,
                         [&](std::ostream& os) { ratioest::emit_repro_script(*t, os); });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1)
}
