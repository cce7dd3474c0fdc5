#include "ihoc/report.hpp"

namespace ihoc {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Undetermined:
      return "undetermined";
    case Verdict::NotApplicable:
      return "not-applicable";
    case Verdict::Assumed:
      return "assumed";
    case Verdict::NoCounterexample:
      return "no-counterexample";
  }
  return "?";
}

const char* to_string(Mode mode) { return mode == Mode::Strong ? "strong" : "weak"; }

}  // namespace ihoc
