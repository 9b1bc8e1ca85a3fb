#pragma once

// Dual adversary feasibility for state conversion problems, the two-oracle
// lower bound, and the passage between transducers and feasible vectors.

#include <cstddef>
#include <vector>

#include "transduce/linalg.hpp"
#include "transduce/oracles.hpp"
#include "transduce/transducer.hpp"

namespace tlab {

struct StateConversionProblem {
  std::vector<Operator> oracles;  // O_x on M
  std::vector<Vec> xi;            // xi_x in H
  std::vector<Vec> tau;           // tau_x in H

  std::size_t size() const { return oracles.size(); }
  /// DimensionError / StructureError on inconsistent sizes or non-unitary O_x.
  void validate() const;
};

/// v_x in H^ (x) M, entry u * dim_m + m.
struct AdversaryCandidate {
  std::vector<Vec> v;
  std::size_t dim_up = 0;
  std::size_t dim_m = 0;

  AdversaryCandidate scaled(double s) const;
};

struct FeasibilityReport {
  bool feasible = true;
  double max_residual = 0.0;
  double objective = 0.0;  // max ||v_x||^2
};

/// <xi_x, xi_y> - <tau_x, tau_y> = <v_x, v_y> - <(I (x) O_x) v_x, (I (x) O_y) v_y>
/// for every pair.
FeasibilityReport check_feasible(const StateConversionProblem& problem,
                                 const AdversaryCandidate& candidate, double tol = 1e-6);

/// O_0, O_1 reflect about sqrt(1/2 +- delta)|0> + sqrt(1/2 -+ delta)|1>;
/// xi_0 = xi_1 = tau_0 = |0>, tau_1 = -|0>.
StateConversionProblem two_oracle_problem(double delta);

/// 1 / || phi_0 phi_0^* - phi_1 phi_1^* ||. ContractError if the norm is not
/// 2 delta to 1e-12.
double two_oracle_bound(double delta);

/// Total query states q(T, O_x, xi_x), solved per label. With `restrict_span`
/// the H^ factor is cut down to the span of all M-slices.
AdversaryCandidate transducer_to_candidate(const Transducer& T,
                                           const StateConversionProblem& problem,
                                           bool restrict_span = false, double tol = 1e-9);

/// Restriction of H^ to span{ (I (x) <m|) v_x }; preserves both Gram terms.
AdversaryCandidate restrict_to_span(const AdversaryCandidate& c, double rank_tol = 1e-10);

/// Canonical transducer on H (+) (H^ (x) M) with a single query on the second
/// summand followed by S_work, where S_work maps xi_x (+) (I (x) O_x) v_x to
/// tau_x (+) v_x. StructureError if the Gram matrices differ by more than tol.
Transducer canonical_transducer(const StateConversionProblem& problem,
                                const AdversaryCandidate& candidate, double tol = 1e-8);

}  // namespace tlab
