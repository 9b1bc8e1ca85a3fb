#pragma once

// Quantum majority voting: l calls of O on fresh (A_i, W_i) pairs, Hamming
// sum into R, threshold bit copied to the output qubit, then everything
// before the copy is run in reverse.

#include <cstddef>

#include "transduce/oracles.hpp"
#include "transduce/query.hpp"

namespace tlab {

/// Simulation cap on the full state dimension.
inline constexpr std::size_t kMajorityDimCap = std::size_t{1} << 22;

struct MajorityCircuit {
  QueryAlgorithm alg;
  std::size_t ell = 0;
  std::size_t dW = 0;
  std::size_t sum_bits = 0;
  /// Flat index of |dir=0>|out=bit>|R=0>|pairs=0>.
  std::size_t output_index(int bit) const;
};

/// Register order (most significant first): dir, out, R, A_1, W_1, ..., A_l, W_l.
/// The oracle slot is (dir, A_1, W_1) with oracle bidirectional(O), so dir
/// selects O or O^dagger; the steps rotate the pairs through A_1 W_1.
/// Throws DomainError unless l is odd or a power of two, and when the
/// dimension exceeds kMajorityDimCap.
MajorityCircuit build_majority(std::size_t ell, std::size_t dW);

/// l (1 + log2 dW) + ceil(log2(l+1)) + 1. The dir flag of the simulation
/// only selects between O and O^dagger and is not counted.
std::size_t majority_qubits(std::size_t ell, std::size_t dW);

/// Pr[threshold bit != r] for b ~ Bin(l, p), threshold |b| >= l/2.
double majority_tail(std::size_t ell, double p);
/// sqrt(2) * sqrt(majority_tail).
double imprecision_exact(std::size_t ell, double p);
/// sqrt(2) * exp(-l delta^2), from Hoeffding's tail exp(-2 l delta^2).
double hoeffding_bound(std::size_t ell, double p);

struct MajorityRun {
  int r = 0;
  double imprecision = 0.0;  // || final - |r>_out |0...> ||
  std::size_t queries = 0;
};

MajorityRun simulate_majority(const MajorityCircuit& c, const OracleSpec& spec);

}  // namespace tlab
