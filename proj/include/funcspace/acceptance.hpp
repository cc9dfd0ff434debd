#pragma once

/// The built-in acceptance suite: nine end-to-end criteria covering the Venn
/// placements, the witness constructions, the inclusion-lattice laws, FTC
/// coherence, the variation-based bound, and an enclosure-soundness oracle.
/// All tolerances are pinned inside run_acceptance().

#include <string>
#include <vector>

namespace funcspace {
inline namespace dsl {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs all nine criteria (exceptions become failures, never aborts).
std::vector<CriterionResult> run_acceptance();

/// "PASS 3: set-A measure and divergent integral (0.12 s) - <detail>"
std::string format_line(const CriterionResult& r);

}  // namespace dsl
}  // namespace funcspace
