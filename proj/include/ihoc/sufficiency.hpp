#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ihoc/pmp.hpp"

namespace ihoc {

/// sup over U of H(t, x, u, p, 1); `start` seeds the inner search.
double hamiltonian_sup(double t, const Vec& x, const Vec& p, const ControlProblem& prob, const Vec& start);
/// Seeds the inner search with the point of U closest to 0.
double hamiltonian_sup(double t, const Vec& x, const Vec& p, const ControlProblem& prob);

struct ConcavitySlice {
  double t = 0.0;
  Verdict verdict = Verdict::Undetermined;
  double worst = 0.0;  // largest midpoint violation (H1 + H2)/2 - H(mid), <= 0 when concave
  std::size_t pairs = 0;
  Vec x1, x2;  // pair attaining `worst`
  std::string note;
};

struct ConcavityReport {
  Mode mode = Mode::Strong;
  double gamma = 0.0;
  std::vector<ConcavitySlice> slices;
  Verdict overall = Verdict::Undetermined;
  double worst = 0.0;
  std::size_t worst_slice = 0;
  std::string note;
};

/// Midpoint concavity of the maximized Hamiltonian in x on the closed tube
/// around x*(t), at up to `max_slices` knots. For n = 1 a 9-point second
/// difference test is added.
ConcavityReport check_arrow(const ControlProblem& prob, const CandidateProcess& cand, const AdjointSolution& adj,
                            double gamma, Mode mode, const Tolerances& tol = {}, std::size_t max_slices = 512);

std::string format_concavity(const ConcavityReport& r);

}  // namespace ihoc
