#pragma once

// Reference-table harness: regenerate the efficiency tables over the
// published parameter grid, compare against the transcribed reference CSVs
// under a tolerance with a documented exclusion list, and cross-check the
// closed forms against the Monte Carlo engine.
//
// File formats (all comma-separated, one header line):
//   cells/reference:  alpha,g,beta,n,A,E1,E2
//   exclusions:       alpha,g,beta,n,A,field,printed,computed,category,reason
//                     (field is "E1" or "E2"; reason may contain commas)
//   population input: x,y
//
// Matching granularity is the scalar cell: each grid row carries two
// comparable values (E1 and E2), and tolerance, exclusions and match counts
// all apply per scalar.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratioest/closed_form.hpp"
#include "ratioest/params.hpp"
#include "ratioest/superpop.hpp"

namespace ratioest {

struct GridSpec {
  std::int64_t N = 0;
  double delta = 0.0;
  double theta = 0.0;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> gs;
  std::vector<std::int64_t> ns;
  std::map<double, std::vector<double>> a_values_per_alpha;

  bool operator==(const GridSpec&) const = default;
};

struct EfficiencyCell {
  double alpha = 0.0;
  double g = 0.0;
  double beta = 0.0;
  std::int64_t n = 0;
  double a = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;

  bool operator==(const EfficiencyCell&) const = default;
};

// One scalar-cell coordinate: a grid row plus which of its two values.
struct CellRef {
  double alpha = 0.0;
  double g = 0.0;
  double beta = 0.0;
  std::int64_t n = 0;
  double a = 0.0;
  std::string field;  // "E1" or "E2"

  bool operator==(const CellRef&) const = default;
};

struct ExclusionEntry {
  CellRef cell;
  double printed = 0.0;
  double computed = 0.0;
  std::string category;  // "typo" or "source_precision"
  std::string reason;
};

struct Mismatch {
  CellRef cell;
  double expected = 0.0;  // reference value
  double got = 0.0;       // computed value after 2-decimal rounding
};

struct ComparisonReport {
  std::int64_t total_cells = 0;  // scalar cells = 2 * reference rows
  std::int64_t matched = 0;
  std::vector<Mismatch> mismatched;
  std::vector<CellRef> excluded_known_typos;
};

inline void validate(const GridSpec& grid) {
  if (grid.N < 2) throw std::invalid_argument("grid: N must be >= 2");
  if (!(grid.theta > 2.0)) throw std::invalid_argument("grid: theta must exceed 2");
  if (!(grid.delta >= 0.0)) throw std::invalid_argument("grid: delta must be non-negative");
  if (grid.alphas.empty() || grid.betas.empty() || grid.gs.empty() || grid.ns.empty()) {
    throw std::invalid_argument("grid: alphas, betas, gs and ns must be non-empty");
  }
  for (double g : grid.gs) {
    if (!(g >= 0.0 && g <= 2.0)) throw std::invalid_argument("grid: g must lie in [0, 2]");
  }
  for (std::int64_t n : grid.ns) {
    if (!(n >= 1 && n < grid.N)) throw std::invalid_argument("grid: need 1 <= n < N");
    if (!(static_cast<double>(n) * grid.theta > 2.0)) {
      throw std::invalid_argument("grid: every n must satisfy n*theta > 2");
    }
  }
  for (double alpha : grid.alphas) {
    const auto it = grid.a_values_per_alpha.find(alpha);
    if (it == grid.a_values_per_alpha.end() || it->second.empty()) {
      throw std::invalid_argument("grid: missing or empty A list for alpha=" +
                                  std::to_string(alpha));
    }
  }
}

// One cell per (alpha, n, g, beta, A), in that loop order -- the same order
// the reference CSVs use, so outputs diff cleanly against them.
inline std::vector<EfficiencyCell> generate_table(const GridSpec& grid) {
  validate(grid);
  std::vector<EfficiencyCell> cells;
  for (double alpha : grid.alphas) {
    const auto& a_list = grid.a_values_per_alpha.at(alpha);
    for (std::int64_t n : grid.ns) {
      for (double g : grid.gs) {
        for (double beta : grid.betas) {
          for (double A : a_list) {
            ClosedFormInputs in;
            in.sp = SuperPopulationParams{alpha, beta, grid.delta, g, grid.theta};
            in.dp = DesignParams{grid.N, n};
            in.a = A;
            const Efficiencies eff = rel_efficiencies(in);
            cells.push_back(EfficiencyCell{alpha, g, beta, n, A, eff.e1, eff.e2});
          }
        }
      }
    }
  }
  return cells;
}

// Round to 2 decimals, halves away from zero -- the convention the reference
// values were printed with.  Applied only at comparison/rendering time.
inline double round_2dec(double x) { return std::round(x * 100.0) / 100.0; }

// ---------------------------------------------------------------------------
// CSV I/O
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// Shortest representation that parses back to the same double.
inline std::string format_minimal(double v) {
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return format_double(v, "%.17g");
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": cannot parse number '" + s + "'");
  }
}

inline std::vector<std::string> split_fields(const std::string& line, std::size_t max_fields) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (out.size() + 1 < max_fields) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) break;
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  out.push_back(line.substr(start));  // remainder (may contain commas)
  return out;
}

// Key for coordinate lookup: doubles scaled to integers so values that print
// identically compare identically.
inline std::array<std::int64_t, 5> cell_key(double alpha, double g, double beta,
                                            std::int64_t n, double a) {
  return {std::llround(alpha * 1e6), std::llround(g * 1e6), std::llround(beta * 1e6), n,
          std::llround(a * 1e6)};
}

}  // namespace detail

inline void write_cells_csv(std::ostream& os, std::span<const EfficiencyCell> cells,
                            bool full_precision = false) {
  os << "alpha,g,beta,n,A,E1,E2\n";
  for (const auto& c : cells) {
    os << detail::format_minimal(c.alpha) << ',' << detail::format_minimal(c.g) << ','
       << detail::format_minimal(c.beta) << ',' << c.n << ','
       << detail::format_minimal(c.a) << ',';
    if (full_precision) {
      os << detail::format_double(c.e1, "%.17g") << ','
         << detail::format_double(c.e2, "%.17g") << '\n';
    } else {
      os << detail::format_double(round_2dec(c.e1), "%.2f") << ','
         << detail::format_double(round_2dec(c.e2), "%.2f") << '\n';
    }
  }
}

inline void render_markdown(std::ostream& os, std::span<const EfficiencyCell> cells) {
  os << "| alpha | g | beta | n | A | E1 | E2 |\n";
  os << "|---|---|---|---|---|---|---|\n";
  for (const auto& c : cells) {
    os << "| " << detail::format_minimal(c.alpha) << " | " << detail::format_minimal(c.g)
       << " | " << detail::format_minimal(c.beta) << " | " << c.n << " | "
       << detail::format_minimal(c.a) << " | "
       << detail::format_double(round_2dec(c.e1), "%.2f") << " | "
       << detail::format_double(round_2dec(c.e2), "%.2f") << " |\n";
  }
}

inline std::vector<EfficiencyCell> read_cells_csv(std::istream& is,
                                                  const std::string& name = "cells csv") {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(name + ":1: empty file");
  if (line == "alpha,g,beta,n,A,E1,E2\r") line.pop_back();
  if (line != "alpha,g,beta,n,A,E1,E2") {
    throw std::runtime_error(name + ":1: expected header 'alpha,g,beta,n,A,E1,E2'");
  }
  std::vector<EfficiencyCell> cells;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_fields(line, 7);
    const std::string where = name + ":" + std::to_string(lineno);
    if (f.size() != 7) throw std::runtime_error(where + ": expected 7 fields");
    EfficiencyCell c;
    c.alpha = detail::parse_double(f[0], where);
    c.g = detail::parse_double(f[1], where);
    c.beta = detail::parse_double(f[2], where);
    c.n = static_cast<std::int64_t>(detail::parse_double(f[3], where));
    c.a = detail::parse_double(f[4], where);
    c.e1 = detail::parse_double(f[5], where);
    c.e2 = detail::parse_double(f[6], where);
    cells.push_back(c);
  }
  return cells;
}

inline std::vector<EfficiencyCell> load_reference_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open reference file: " + path);
  return read_cells_csv(f, path);
}

inline std::vector<ExclusionEntry> load_exclusions_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open exclusions file: " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error(path + ":1: empty file");
  std::vector<ExclusionEntry> out;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line, 10);
    const std::string where = path + ":" + std::to_string(lineno);
    if (fields.size() != 10) throw std::runtime_error(where + ": expected 10 fields");
    ExclusionEntry e;
    e.cell.alpha = detail::parse_double(fields[0], where);
    e.cell.g = detail::parse_double(fields[1], where);
    e.cell.beta = detail::parse_double(fields[2], where);
    e.cell.n = static_cast<std::int64_t>(detail::parse_double(fields[3], where));
    e.cell.a = detail::parse_double(fields[4], where);
    e.cell.field = fields[5];
    if (e.cell.field != "E1" && e.cell.field != "E2") {
      throw std::runtime_error(where + ": field must be E1 or E2");
    }
    e.printed = detail::parse_double(fields[6], where);
    e.computed = detail::parse_double(fields[7], where);
    e.category = fields[8];
    e.reason = fields[9];
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

inline ComparisonReport verify_against_reference(
    std::span<const EfficiencyCell> cells, const std::string& reference_path,
    double tolerance, std::span<const ExclusionEntry> exclusions) {
  const std::vector<EfficiencyCell> reference = load_reference_csv(reference_path);

  std::map<std::array<std::int64_t, 5>, const EfficiencyCell*> computed;
  for (const auto& c : cells) {
    computed[detail::cell_key(c.alpha, c.g, c.beta, c.n, c.a)] = &c;
  }
  std::map<std::array<std::int64_t, 6>, const ExclusionEntry*> excluded;
  for (const auto& e : exclusions) {
    auto k = detail::cell_key(e.cell.alpha, e.cell.g, e.cell.beta, e.cell.n, e.cell.a);
    excluded[{k[0], k[1], k[2], k[3], k[4], e.cell.field == "E1" ? 1 : 2}] = &e;
  }

  ComparisonReport report;
  for (const auto& ref : reference) {
    const auto key = detail::cell_key(ref.alpha, ref.g, ref.beta, ref.n, ref.a);
    const auto it = computed.find(key);
    if (it == computed.end()) {
      throw std::runtime_error(reference_path +
                               ": reference row has no computed counterpart (alpha=" +
                               detail::format_minimal(ref.alpha) +
                               ", n=" + std::to_string(ref.n) + ")");
    }
    const EfficiencyCell& got = *it->second;
    const std::array<std::pair<const char*, std::pair<double, double>>, 2> fields = {{
        {"E1", {ref.e1, got.e1}},
        {"E2", {ref.e2, got.e2}},
    }};
    for (const auto& [fname, vals] : fields) {
      ++report.total_cells;
      CellRef cr{ref.alpha, ref.g, ref.beta, ref.n, ref.a, fname};
      const auto ek = std::array<std::int64_t, 6>{key[0], key[1], key[2], key[3], key[4],
                                                  cr.field == "E1" ? 1 : 2};
      if (excluded.count(ek) != 0) {
        report.excluded_known_typos.push_back(cr);
        continue;
      }
      const double expect = vals.first;
      const double rounded = round_2dec(vals.second);
      // The 1e-9 slack only absorbs the representation noise of 2-decimal
      // values; it is ~7 orders below the comparison tolerance.
      if (std::abs(rounded - expect) <= tolerance + 1e-9) {
        ++report.matched;
      } else {
        report.mismatched.push_back(Mismatch{cr, expect, rounded});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Monte Carlo cross-check of the closed forms
// ---------------------------------------------------------------------------

struct CrosscheckRow {
  std::string name;
  double closed = 0.0;
  double mc = 0.0;
  double std_error = 0.0;
  double z = 0.0;       // (mc - closed) / std_error
  bool arbitration = false;  // true for the deliberately-wrong variant row
};

struct CrosscheckReport {
  std::vector<CrosscheckRow> rows;
  McConfig cfg;
};

// Estimate all five model expectations from one simulation stream and score
// each closed form by its z-distance from the Monte Carlo value.  A sixth
// row scores the variant of the ratio-estimator bias that circulates without
// the 1/N factor; the simulation is the arbiter that rules it out (see
// docs/errata.md).
inline CrosscheckReport mc_crosscheck(const ClosedFormInputs& in, const McConfig& cfg,
                                      int threads = 1) {
  validate(in);
  const std::array<QuantitySpec, 5> quantities = {
      QuantitySpec::bias_alt(in.a), QuantitySpec::mse_alt(in.a), QuantitySpec::mse_ratio(),
      QuantitySpec::var_mean(), QuantitySpec::bias_ratio()};
  const std::vector<McEstimate> mc =
      mc_model_expectations(in.sp, in.dp, quantities, cfg, threads);

  const double closed_vals[5] = {em_bias_alt(in), em_mse_alt(in), em_mse_ratio(in),
                                 em_var_mean(in), em_bias_ratio(in)};
  CrosscheckReport report;
  report.cfg = cfg;
  for (std::size_t i = 0; i < 5; ++i) {
    CrosscheckRow row;
    row.name = to_string(quantities[i]);
    row.closed = closed_vals[i];
    row.mc = mc[i].value;
    row.std_error = mc[i].std_error;
    row.z = (mc[i].value - row.closed) / mc[i].std_error;
    report.rows.push_back(row);
  }

  // Variant bias form without the 1/N factor, scored against the same MC
  // estimate of bias_ratio.
  {
    const double N = static_cast<double>(in.dp.N);
    const double n = static_cast<double>(in.dp.n);
    CrosscheckRow row;
    row.name = "bias_ratio (variant without 1/N)";
    row.closed = (N - n) * in.sp.alpha / (n * in.sp.theta - 1.0);
    row.mc = mc[4].value;
    row.std_error = mc[4].std_error;
    row.z = (mc[4].value - row.closed) / mc[4].std_error;
    row.arbitration = true;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace ratioest
