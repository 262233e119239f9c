#pragma once

// Reproduction recipes: the exact CLI invocations that rebuild each shipped
// deliverable from a clean checkout.  Kept in code (and smoke-tested) so the
// documented commands cannot rot.

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ratioest {

enum class ReproTarget { table1, table2, table3, mc_check };

inline std::optional<ReproTarget> parse_repro_target(const std::string& s) {
  if (s == "table1") return ReproTarget::table1;
  if (s == "table2") return ReproTarget::table2;
  if (s == "table3") return ReproTarget::table3;
  if (s == "mc_check" || s == "mc-check") return ReproTarget::mc_check;
  return std::nullopt;
}

// Commands are emitted relative to the repository root; `ratioest` stands for
// the built CLI binary (build/ratioest after a default build).  Lines
// starting with '#' are comments.
inline void emit_repro_script(ReproTarget target, std::ostream& os) {
  const auto table = [&os](int k) {
    const std::string cfg = "configs/table" + std::to_string(k) + ".json";
    os << "# regenerate efficiency table " << k << " and write it as CSV\n";
    os << "ratioest generate --config " << cfg << " --out table" << k << "_generated.csv\n";
    os << "# compare the regenerated values against the shipped reference\n";
    os << "ratioest verify --config " << cfg << "\n";
  };
  switch (target) {
    case ReproTarget::table1: table(1); return;
    case ReproTarget::table2: table(2); return;
    case ReproTarget::table3: table(3); return;
    case ReproTarget::mc_check:
      os << "# Monte Carlo cross-check of every closed-form expectation,\n";
      os << "# at the documented run size and seed\n";
      os << "ratioest mc-check --config configs/mc_check.json\n";
      return;
  }
  throw std::invalid_argument("unknown reproduction target");
}

}  // namespace ratioest
