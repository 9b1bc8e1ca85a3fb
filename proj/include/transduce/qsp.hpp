#pragma once

// Quantum signal processing with W(x, y) = [[x, y], [y, -x]] and phases
// diag(a, -a*). Polynomials are kept in Chebyshev form: P and R in T_j, Q in
// U_j, so that degree 60 stays well conditioned.

#include <cstddef>
#include <vector>

#include "transduce/linalg.hpp"
#include "transduce/oracles.hpp"

namespace tlab {

inline constexpr std::size_t kQspDegreeCap = 60;

struct RealPolynomial {
  std::vector<double> cheb;  // R = sum cheb[j] T_j
  int parity = 1;            // 0 even, 1 odd

  double operator()(double x) const;
  std::size_t degree() const;
  /// Largest |coefficient| of the wrong parity.
  double parity_defect() const;
};

struct PolynomialPair {
  std::vector<cplx> P;  // sum P[j] T_j, size k + 1
  std::vector<cplx> Q;  // sum Q[j] U_j, size k (empty for k = 0)
  std::size_t k = 0;

  cplx P_at(double x) const;
  cplx Q_at(double x) const;
  /// max | |P|^2 + (1 - x^2)|Q|^2 - 1 | over `points` equispaced x in [-1, 1].
  double condition_residual(std::size_t points = 201) const;
  /// Largest coefficient of the wrong parity in P or Q.
  double parity_defect() const;
};

struct PhaseSequence {
  std::vector<cplx> alpha;  // alpha_0 .. alpha_k
  std::size_t k() const { return alpha.empty() ? 0 : alpha.size() - 1; }
  double unimodularity_defect() const;
};

/// [[x, y], [y, -x]]; NormalizationError unless x^2 + y^2 = 1 within 1e-10.
Operator signal_unitary(double x, double y);

/// diag(a_k, -a_k*) W ... W diag(a_0, -a_0*). W may act on A (x) rest with A
/// the leading qubit; the phases then act on A only.
Operator qsp_assemble(const PhaseSequence& alpha, const Operator& W);

/// The pair realized by a phase sequence (forward direction).
PolynomialPair pair_from_phases(const PhaseSequence& alpha);

/// Odd R with |R| <= 1, R >= 1 - eps' on [delta', 1], R <= -1 + eps' on
/// [-1, -delta'], checked on 2001 points. DegreeCapError past kQspDegreeCap.
RealPolynomial sign_polynomial(double delta_prime, double eps_prime);

/// P, Q with Re P = R and the completion condition. k defaults to deg R.
/// CompletionError when roots cannot be paired or the grid residual exceeds 1e-8.
PolynomialPair complete(const RealPolynomial& R, std::size_t k = 0);

/// Layer stripping. StrippingError carries the degree where it failed; the
/// reassembly is checked against the pair on 101 points to 1e-8.
PhaseSequence phase_factors(const PolynomialPair& PQ);

/// max entrywise gap between U_alpha(W(x, sqrt(1-x^2))) and
/// [[P, yQ*], [yQ, -P*]] on `points` equispaced x.
double qsp_main_residual(const PhaseSequence& alpha, const PolynomialPair& PQ,
                         std::size_t points = 101);

struct QspReduction {
  Operator U;  // Z_A U_alpha(O_ref)
  RealPolynomial R;
  PolynomialPair PQ;
  PhaseSequence alpha;
  std::size_t degree = 0;  // number of O_ref queries
  double eps_prime = 0.0;
};

/// eps' = eps^2 / 6 and delta' = 2 delta. Needs |1/2 - p| >= delta.
QspReduction qsp_error_reduction(const Operator& O_ref, const OracleSpec& spec, double delta,
                                 double eps);

}  // namespace tlab
