#pragma once

// Transducers: a unitary S on H (+) L whose public action xi -> tau is fixed
// by the catalyst equation S(xi (+) v) = tau (+) v.

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "transduce/query.hpp"

namespace tlab {

/// L = L0 (+) L. with L. = L^ (x) M.
struct CanonicalSplit {
  std::size_t dim_L_circ = 0;
  std::size_t dim_L_up = 0;
  std::size_t dim_m = 0;
};

class Transducer {
 public:
  /// S on H (+) L, H the first dim_H coordinates. The oracle is ignored.
  static Transducer from_unitary(Operator S, std::size_t dim_H);

  /// S(O) given by a query algorithm. `h_index` and `l_index` list the flat
  /// positions of the H and L basis vectors inside the algorithm's space;
  /// every other position is scratch that must start and end at zero.
  static Transducer from_algorithm(QueryAlgorithm alg, std::vector<std::size_t> h_index,
                                   std::vector<std::size_t> l_index);

  /// Same, with H the first dim_H positions and L the next ones.
  static Transducer from_algorithm(QueryAlgorithm alg, std::size_t dim_H, std::size_t dim_L);

  std::size_t dim_H() const { return h_index_.size(); }
  std::size_t dim_L() const { return l_index_.size(); }
  bool has_algorithm() const { return std::holds_alternative<QueryAlgorithm>(form_); }
  const QueryAlgorithm& algorithm() const { return std::get<QueryAlgorithm>(form_); }
  const std::vector<std::size_t>& h_index() const { return h_index_; }
  const std::vector<std::size_t>& l_index() const { return l_index_; }

  const std::optional<CanonicalSplit>& canonical_split() const { return canonical_; }
  Transducer& with_canonical_split(CanonicalSplit split);

  Space public_space() const { return Space::flat(dim_H(), "H"); }
  /// Empty (no blocks) when L = 0.
  Space private_space() const { return dim_L() == 0 ? Space() : Space::flat(dim_L(), "L"); }
  Space coupled_space() const { return Space::direct_sum({public_space(), private_space()}); }

  /// S(O) compressed to H (+) L. Throws StructureError if S(O) leaks out of
  /// H (+) L into scratch.
  Operator action_matrix(const Operator& oracle) const;

  /// Embeds xi (+) v into the algorithm's space (scratch zero).
  Vec embed(const Vec& xi, const Vec& v) const;

 private:
  std::variant<Operator, QueryAlgorithm> form_;
  std::vector<std::size_t> h_index_;
  std::vector<std::size_t> l_index_;
  std::optional<CanonicalSplit> canonical_;
};

struct TransductionResult {
  StateVector tau;
  StateVector v;
  double W = 0.0;
  double residual = 0.0;
  double sigma_min = 0.0;  // smallest singular value of I - D
  bool ridge = false;      // regularized path taken
};

inline constexpr double kSingularThreshold = 1e-8;
inline constexpr double kRidge = 1e-12;

TransductionResult transduce(const Transducer& T, const Operator& oracle, const StateVector& xi,
                             double tol = 1e-9);

/// Transduction with a precomputed action matrix; used by sweeps that solve
/// many initial states against one oracle.
class TransductionSolver {
 public:
  TransductionSolver(const Transducer& T, const Operator& oracle);
  TransductionResult solve(const StateVector& xi, double tol = 1e-9) const;
  const Operator& action() const { return action_; }
  double sigma_min() const { return sigma_min_; }

 private:
  std::size_t dim_H_;
  Operator action_;
  Mat U_, V_;
  Eigen::VectorXd sigma_;
  double sigma_min_ = 0.0;
};

struct Complexities {
  double W = 0.0;
  double L = 0.0;
  StateVector q;
  TransductionResult result;
};

/// Trace of the algorithm form on xi (+) v.
Complexities complexities(const Transducer& T, const Operator& oracle, const StateVector& xi,
                          double tol = 1e-9);

/// The same for I_E (x) S: xi has E * dim_H entries (E most significant);
/// W and L add over slices, q is the direct sum of slice query states.
Complexities complexities_extended(const Transducer& T, const Operator& oracle, const Vec& xi,
                                   double tol = 1e-9);

struct ActionResult {
  StateVector tau_prime;  // component along the uniform superposition
  double garbage = 0.0;   // norm of everything else, L included
  bool materialized = false;
};

/// Scratch-free (C^K (x) H) (+) L sizes up to this are run as one dense
/// operator; larger ones are simulated copy by copy.
inline constexpr std::size_t kMaterializeLimit = 256;

/// K controlled calls to S against a shared L register, starting from the
/// uniform superposition of xi over K copies and L = 0.
ActionResult implement_action(const Transducer& T, const Operator& oracle, const StateVector& xi,
                              std::size_t K);
/// Same with S(O) supplied directly (avoids recompiling the action).
ActionResult implement_action(const Operator& action, std::size_t dim_H, const StateVector& xi,
                              std::size_t K, bool allow_materialize = true);

/// S(O1) O~1^dagger == S(O2) O~2^dagger for two seeded random oracles.
bool canonical_check(const Transducer& T, double tol = 1e-10, std::uint64_t seed = 7);

/// Direct sum of transducers. Algorithm forms must share the query count;
/// the combined oracle is the direct sum of the parts' oracles.
Transducer parallel_compose(const std::vector<Transducer>& Ts);

struct InnerComplexity {
  double L = 0.0;
  double W = 0.0;
};

using InnerComplexityFn = std::function<InnerComplexity(const Vec&)>;

struct CompositionTotals {
  double L_total = 0.0;
  double W_total = 0.0;
};

/// Query state of an outer transducer split into the part answered by the
/// oracle directly and the part fed to an inner transducer.
CompositionTotals functional_accounting(const Vec& qA_direct, const Vec& qA_inner, double W_A,
                                        const InnerComplexityFn& inner);

/// Orthonormal basis (columns) of span{states}, rank tolerance 1e-10.
Mat span_restriction(const std::vector<Vec>& states, double rank_tol = 1e-10);

}  // namespace tlab
