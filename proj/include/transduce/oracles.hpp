#pragma once

// Input oracles on the answer qubit A and workspace W (A most significant).

#include <optional>

#include "transduce/linalg.hpp"
#include "transduce/random.hpp"

namespace tlab {

struct OracleSpec {
  double p = 0.0;
  Vec phi0;  // workspace state on the |0> answer branch
  Vec phi1;  // workspace state on the |1> answer branch

  /// d_W = 1 with phi0 = phi1 = |0>.
  static OracleSpec simple(double p);
  static OracleSpec random(double p, std::size_t dW, Rng& rng);

  std::size_t dW() const { return static_cast<std::size_t>(phi0.size()); }
  double delta() const { return std::abs(0.5 - p); }
  /// sqrt(p / (1-p)); infinite at p = 1.
  double gamma() const;
  /// 0 for p < 1/2, 1 for p > 1/2.
  int r() const { return p > 0.5 ? 1 : 0; }

  /// Throws DomainError / NormalizationError on an inadmissible spec.
  void validate(double tol = kUnitaryTol) const;

  /// sqrt(1-p)|0>phi0 + sqrt(p)|1>phi1 (the fixed axis).
  StateVector target() const;
  /// sqrt(p)|0>phi0 - sqrt(1-p)|1>phi1 (the negated axis).
  StateVector negated() const;
};

Space oracle_space(std::size_t dW);

/// Reflection about sqrt(1-p)|0> + sqrt(p)|1>.
Operator simple_oracle(double p);

/// Unitary on A*W whose first column is spec.target(); the other columns
/// come from a Householder reflection.
Operator state_generating_oracle(const OracleSpec& spec);

/// O Ref_{|0>|0>} O^dagger.
Operator reflecting_from_generator(const Operator& O);

/// Fixes target(), negates negated(), and acts as `complement_action` on the
/// orthogonal complement of their span. The action is given as a full-space
/// operator that must leave the complement invariant and be unitary there;
/// its behaviour on the span is ignored. Default: -I on the complement.
Operator general_reflecting_oracle(const OracleSpec& spec,
                                   const std::optional<Operator>& complement_action = std::nullopt);

/// Orthonormal basis (columns) of the complement of span{target, negated}.
Mat complement_basis(const OracleSpec& spec);

/// A random unitary supported on the complement of span{target, negated}.
Operator random_complement_action(const OracleSpec& spec, Rng& rng);

/// O (+) O^dagger: one slot serving both the oracle and its inverse.
Operator bidirectional(const Operator& O);

}  // namespace tlab
