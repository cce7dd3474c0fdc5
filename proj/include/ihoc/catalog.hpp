#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ihoc/candidate.hpp"
#include "ihoc/problem.hpp"
#include "ihoc/report.hpp"

namespace ihoc {

/// A built-in problem with its known solution and the verdicts a full run
/// must reproduce.
struct ExampleEntry {
  std::string name;
  std::string description;
  std::map<std::string, double> params;
  std::string source;  // problem text in the file format
  ControlProblem problem;
  ClosedForm closed;  // x, u and the multiplier p for lambda0
  double lambda0 = 1.0;
  Mode mode = Mode::Strong;
  double gamma = 0.1;
  double T = 60.0;
  std::size_t cells = 4096;
  // pass | pathological | assumptions-violated
  std::string expectation;
  std::map<std::string, Verdict> expected;  // certificate condition -> verdict
  Verdict expected_audit = Verdict::Pass;   // satisfied() of the assumption audit
  std::optional<Verdict> expected_arrow;
  std::optional<Verdict> expected_gradient;  // Pass: finite, Fail: divergent
  std::vector<Expression> gradient_direction;
  double self_check = 0.0;  // max state residual of the closed form on the default grid

  TimeGrid grid() const;
  CandidateProcess candidate() const;
  CandidateProcess candidate(const TimeGrid& grid) const;
};

const std::vector<std::string>& example_names();

/// Builds an example; `overrides` replaces named parameters (InvalidArgument
/// for unknown names or values outside the example's range). The closed form
/// is checked against the state equation on the default grid (residual < 1e-8).
ExampleEntry load_example(const std::string& name, const std::map<std::string, double>& overrides = {});

std::vector<ExampleEntry> list_examples();

}  // namespace ihoc
