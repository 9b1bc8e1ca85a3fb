#pragma once

// Truncated purifiers: the walk on a ray of D vertices driven by two
// reflections, in the simple (2x2 oracle) and general (oracle on A (x) W)
// flavours.

#include <optional>
#include <string>
#include <vector>

#include "transduce/oracles.hpp"
#include "transduce/transducer.hpp"

namespace tlab {

inline constexpr std::size_t kDefaultDepth = 64;

/// Throws DomainError unless D >= 4.
void check_depth(std::size_t D);

// ---- circuits ----

enum class GateKind { Increment, Decrement, Oracle, Phase };

struct Gate {
  GateKind kind;
  std::string label;  // e.g. "+1 on J | A=0"
  Operator op;        // dense, already controlled, on the reflection's space
};

struct Reflection {
  std::vector<Gate> gates;  // applied first to last
  Operator dense(const Space& space) const;
};

struct GateAudit {
  std::size_t increments = 0;
  std::size_t decrements = 0;
  std::size_t oracle_calls = 0;
};

GateAudit audit(const std::vector<Reflection>& rs);

/// R1 and R2 of the simple purifier, mod-D register N = K (x) A (D even).
std::vector<Reflection> simple_circuit(std::size_t D, const Operator& O);
/// R1' and R2' on J (x) A (x) W, mod D.
std::vector<Reflection> general_circuit(std::size_t D, const Operator& O_ref);

struct ReflectionPair {
  Operator R1, R2;
};

/// Dense R1, R2 of the simple purifier on C^D. Even D uses the mod-D circuit;
/// odd D the walk on the ray 0..D-1 with the missing edge dropped.
ReflectionPair simple_reflections(std::size_t D, const Operator& O);
ReflectionPair general_reflections(std::size_t D, const Operator& O_ref);

// ---- transducers ----

/// Query-algorithm form of S = R2 R1 on C^D with a 2-dimensional oracle
/// slot. Each query swaps the pairs it acts on into a clean scratch copy of
/// the register, so both queries share one bullet split.
Transducer build_simple(std::size_t D);

/// Query-algorithm form of S' = R2' R1' on J (x) A (x) W; public space J = 0.
Transducer build_general(std::size_t D, std::size_t dW);

/// Sum_{j=1}^{D-1} gamma^j |j> for p < 1/2, Sum (-gamma)^{-j} |j> for p > 1/2.
StateVector analytic_catalyst(double p, std::size_t D);

/// Columns N_s|j>, j = 0..D-1, of the two invariant rays (s = 0 or 1).
Mat sector_basis(const OracleSpec& spec, std::size_t D, int s);

/// Sum_{j=0}^{D-1} g^j + Sum_{j=1}^{D-2} g^j, the closed-form Las Vegas
/// complexity of the exact truncated branch with g = gamma^2.
double truncated_query_sum(double p, std::size_t D);

struct TransductionReport {
  double p = 0.0;
  std::size_t D = 0;
  int r = 0;
  double tau_error = 0.0;  // p<1/2: |tau - |0>|; p>1/2: |S(xi+v) - (-xi+v)| with the analytic v
  double residual = 0.0;   // fixed-point residual (p>1/2: the perturbation size)
  double L = 0.0;
  double W = 0.0;
  double derived_bound = 0.0;  // 2 gamma^{-(D-1)} for p > 1/2, else 0
  double stated_bound = 0.0;   // 2 (1 - delta)^{D-1} for p > 1/2, else 0
  double half_inverse_delta = 0.0;
};

TransductionReport verify_transduction(double p, std::size_t D, double tol = 1e-9);

/// implement_action with depth D_small and D_big; nullopt when D_small <= 2K
/// (outside the premise). Otherwise the largest output difference.
std::optional<double> prop_trunc1_difference(double p, std::size_t K, std::size_t D_small,
                                             std::size_t D_big);
/// True when the outputs agree to 1e-12; nullopt when skipped.
std::optional<bool> prop_trunc1_check(double p, std::size_t K, std::size_t D_small,
                                      std::size_t D_big);

struct StateGeneratingReport {
  double p = 0.0;
  int r = 0;
  double L_direct = 0.0;    // ||q^(0)||^2 from the two outer oracle calls
  double L_inner = 0.0;     // measured, S' composed with the reflecting-oracle algorithm
  double L_total = 0.0;     // functional accounting
  double L_expected = 0.0;  // 1 + 1/(2 delta)
  double W_inner = 0.0;
  // Direct run of the outer algorithm with U' replaced by K iterations.
  std::size_t K = 0;
  double output_error = -1.0;  // || final - |r>|0> ||, negative if not simulated
  double error_budget = 0.0;   // 2 sqrt(W/K)
};

/// Accounting for the state-generating purifier at depth D with d_W = 1.
/// K = 0 skips the direct simulation.
StateGeneratingReport state_generating_accounting(double p, std::size_t K = 0,
                                                  std::size_t D = kDefaultDepth);

}  // namespace tlab
