#pragma once

// Non-Boolean lift: the inner-product map T, the lifted oracle O' on C A W,
// and the Bernstein-Vazirani wrapper around a Boolean reducer.
// Register order B, C, A, W with B most significant.

#include <cstddef>
#include <functional>
#include <vector>

#include "transduce/linalg.hpp"
#include "transduce/qsp.hpp"
#include "transduce/query.hpp"
#include "transduce/random.hpp"

namespace tlab {

inline constexpr std::size_t kMaxNbBits = 3;

/// phi = sum_a sqrt(p_a) |a>_A |phi_a>_W over a in F_2^m.
struct NbInstance {
  std::size_t m = 0;
  std::vector<double> p;   // 2^m weights
  std::vector<Vec> phi;    // 2^m unit vectors in W

  std::size_t dW() const { return phi.empty() ? 0 : static_cast<std::size_t>(phi.front().size()); }
  Vec state() const;
  /// The unique a with p_a > 1/2; ContractError otherwise.
  std::size_t r() const;
  double delta() const { return p.at(r()) - 0.5; }
  void validate() const;
};

/// p_r on `r`, the rest spread uniformly; random phi_a.
NbInstance nb_instance(std::size_t m, std::size_t dW, std::size_t r, double p_r, Rng& rng);

/// 2 phi phi^* - I on A (x) W.
Operator nb_reflecting_oracle(const NbInstance& inst);

std::size_t parity_dot(std::size_t a, std::size_t b);

/// |b>|c>|a> -> |b>|c xor (a.b)>|a> on B (x) C (x) A.
Operator inner_product_transform(std::size_t m);

/// T (Z_C) (O_ref open-controlled on C = 0) T on B (x) C (x) A (x) W.
Operator lifted_oracle(const Operator& O_ref, std::size_t m);

/// The C A W block of a B-block-diagonal operator; off-block mass checked.
Operator b_block(const Operator& op, std::size_t m, std::size_t b);
double off_block_mass(const Operator& op, std::size_t m);

/// p'_b = sum_{a : a.b = 1} p_a.
double lifted_bias(const NbInstance& inst, std::size_t b);
/// T_b |0>_C phi.
Vec lifted_state(const NbInstance& inst, std::size_t b);

/// Boolean reducer: oracle on C (x) rest (C leading) -> R(oracle) on the same space.
using BooleanReducer = std::function<Operator(const Operator&)>;

/// Z_C U_alpha(O) for a fixed phase sequence.
BooleanReducer qsp_reducer(const PhaseSequence& alpha);

/// H^m, T, (I_B (x) R)(O'), T, H^m, identity on W.
Operator bv_error_reduction(const BooleanReducer& R, const Operator& O_ref, std::size_t m);

/// The same circuit for the QSP reducer as a query algorithm over O_ref:
/// k queries on the C = 0 slice, one extra qubit (C).
QueryAlgorithm bv_qsp_algorithm(const PhaseSequence& alpha, std::size_t m, std::size_t dW);

struct NbRun {
  std::size_t r = 0;
  double fidelity = 0.0;       // |<r, 0, phi | out>|^2
  double prob_r = 0.0;         // probability of reading r from B
  double imprecision = 0.0;    // || out - |r>|0>|phi> ||
  double inner_imprecision = 0.0;  // of (I_B (x) R)(O') on 2^{-m/2} (+)_b phi'_b
};

NbRun simulate_nb(const BooleanReducer& R, const NbInstance& inst);

struct NbAccounting {
  std::vector<double> p_prime;  // per b
  std::vector<double> L_b;      // L(S', O'_b, phi'_b), truncated general purifier
  double L = 0.0;               // average over b
  double bound = 0.0;           // 1 / (2 delta)
};

NbAccounting nb_accounting(const NbInstance& inst, std::size_t D = 64);

}  // namespace tlab
