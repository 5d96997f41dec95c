#pragma once

/**
 * Built-in self checks.
 *
 * Every library-level invariant has a named check here; the constexpr
 * manifest below is the single list of them, and verify.cpp keeps a
 * registry of implementations that is statically cross-checked against
 * the manifest in both directions, so a check cannot be added, renamed,
 * or dropped on one side only. Checks are grouped into suites matching
 * the CLI's `verify` subcommand; "all" runs everything.
 *
 * A check throws (with the reproducing input in the message) to fail;
 * run_verify turns that into a CheckResult instead of propagating.
 */

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace hdx {

struct CheckResult {
  std::string name;
  std::string suite;
  bool passed = false;
  std::string detail;  // failure message, empty on pass
  double runtime_ms = 0.0;
};

struct CheckInfo {
  std::string_view name;
  std::string_view suite;
};

inline constexpr std::array<std::string_view, 6> verify_suites{
    "spectral", "filling", "transport", "homology", "surgery", "fibration"};

inline constexpr std::array<CheckInfo, 28> verify_manifest{{
    {"hodge-gap-matches-cheeger", "spectral"},
    {"l2-up-down-shift", "spectral"},
    {"harmonic-dimension-is-betti", "spectral"},
    {"eigenpair-residuals", "spectral"},
    {"coboundary-is-transpose", "filling"},
    {"chain-norm-comparison", "filling"},
    {"filling-witness-exact", "filling"},
    {"vanishing-tracks-homology", "filling"},
    {"cheeger-norm-comparison", "filling"},
    {"l2-brute-matches-spectral", "filling"},
    {"up-constant-via-transpose", "filling"},
    {"hypercube-cell-counts", "transport"},
    {"certificate-replay", "transport"},
    {"contraction-square-budget", "transport"},
    {"decomposition-contraction-ratio", "transport"},
    {"expfill-norm-bound", "transport"},
    {"boundary-squares-zero", "homology"},
    {"rebuild-determinism", "homology"},
    {"smith-form-certified", "homology"},
    {"torsion-order-consistency", "homology"},
    {"cover-deck-action", "homology"},
    {"fundamental-class-integral", "homology"},
    {"surgery-det-matches-torsion", "surgery"},
    {"dominant-links-nonsingular", "surgery"},
    {"meridian-contraction-certified", "surgery"},
    {"presentation-roundtrip", "surgery"},
    {"fibration-witnesses-exact", "fibration"},
    {"leray-serre-inequalities", "fibration"},
}};

constexpr bool verify_manifest_well_formed() {
  for (std::size_t i = 0; i < verify_manifest.size(); ++i) {
    bool known = false;
    for (auto s : verify_suites)
      if (s == verify_manifest[i].suite) known = true;
    if (!known) return false;
    for (std::size_t j = i + 1; j < verify_manifest.size(); ++j)
      if (verify_manifest[i].name == verify_manifest[j].name) return false;
  }
  for (auto s : verify_suites) {
    bool used = false;
    for (const auto& m : verify_manifest)
      if (m.suite == s) used = true;
    if (!used) return false;
  }
  return true;
}
static_assert(verify_manifest_well_formed(),
              "self-check manifest has a duplicate name, an unknown suite, "
              "or an empty suite");

/** Run "all" or one suite from verify_suites; unknown names throw. */
std::vector<CheckResult> run_verify(const std::string& suite = "all");

/** One line per check plus a pass-count summary. */
std::string verify_report(const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace hdx
