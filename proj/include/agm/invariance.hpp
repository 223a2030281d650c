#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agm/refactor.hpp"
#include "agm/testkit.hpp"

namespace agm {

enum class Observation {
  Invariant,    // text unchanged, pass -> pass
  Broken,       // text unchanged, pass -> fail/error
  AdaptedPass,  // co-transformed, passes afterwards
  AdaptedFail,  // co-transformed, fails afterwards
  Attention,    // co-transformation needs a human
  Excluded,     // did not pass before; not an observation of preserved behavior
};

const char* to_string(Observation o);

struct TestObservation {
  std::string name;
  Category category = Category::Unit;
  Status before = Status::Pass;
  std::optional<Status> after;  // none when the script was blocked
  Disposition disposition = Disposition::Unchanged;
  Observation verdict = Observation::Excluded;
  /// Acceptance test within the published border; only these decide the gate.
  bool gated = false;
  std::string detail;  // first diagnostic after the change, or the attention reason
};

struct InvarianceReport {
  std::vector<std::string> steps;  // canonical text of each script step
  std::vector<TestObservation> tests;
  bool gate_pass = true;
  std::optional<std::size_t> blocked_at;
  std::string blocked_reason;
};

/// Runs `suite` on `model`, applies `steps`, runs the transformed suite on the
/// transformed model and classifies every test.
InvarianceReport verify_invariance(const Model& model, const TestSuite& suite,
                                   const std::vector<Refactoring>& steps,
                                   const RunOptions& options = {}, unsigned jobs = 1);

/// Same classification for an already transformed pair, e.g. a hand-edited
/// model presented as the output of a refactoring. A test counts as adapted
/// when its canonical text differs.
InvarianceReport verify_outputs(const Model& model, const TestSuite& suite,
                                const Model& after_model, const TestSuite& after_suite,
                                const RunOptions& options = {}, unsigned jobs = 1);

std::string report_text(const InvarianceReport& report);
/// `generated_at` is emitted only when given.
std::string report_json(const InvarianceReport& report,
                        const std::optional<std::string>& generated_at = std::nullopt);

}  // namespace agm
