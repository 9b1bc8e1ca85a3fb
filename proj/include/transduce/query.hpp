#pragma once

// Query algorithms U_Q O~ U_{Q-1} ... O~ U_0 with O~ = I (+) (I (x) O), and
// the instrumentation around them: bullet components, total query state,
// Las Vegas complexity, injected perturbations.

#include <utility>
#include <variant>
#include <vector>

#include "transduce/linalg.hpp"

namespace tlab {

/// Where the oracle acts: H. = H^ (x) M sits inside H at the listed flat
/// indices, with entry u*dim_m + m for the basis vector |u>|m>.
struct BulletSplit {
  std::size_t dim_up = 0;
  std::size_t dim_m = 0;
  std::vector<std::size_t> index;

  /// The trailing-register convention: H. is the contiguous range
  /// [offset, offset + dim_up*dim_m).
  static BulletSplit contiguous(std::size_t offset, std::size_t dim_up, std::size_t dim_m);

  std::size_t dim() const { return dim_up * dim_m; }
  Space space() const { return Space::tensor({{"U", dim_up}, {"M", dim_m}}); }
};

/// Monomial unitary: column j maps to phase[j] * e_{target[j]}. Used for
/// classical reversible steps whose dense form would not fit in memory.
struct Permutation {
  std::vector<std::size_t> target;
  std::vector<cplx> phase;

  static Permutation identity(std::size_t n);
  std::size_t dim() const { return target.size(); }
  Vec apply(const Vec& v) const;
  Vec apply_inverse(const Vec& v) const;
  Mat dense() const;
  Permutation then(const Permutation& next) const;  // next after this
};

using Step = std::variant<Mat, Permutation>;

class QueryAlgorithm {
 public:
  QueryAlgorithm() = default;
  /// steps = U_0..U_Q; every step is checked for unitarity.
  QueryAlgorithm(Space space, std::vector<Step> steps, BulletSplit split);

  const Space& space() const { return space_; }
  std::size_t dim() const { return space_.dim(); }
  std::size_t queries() const { return steps_.size() - 1; }
  const BulletSplit& split() const { return split_; }
  const std::vector<Step>& steps() const { return steps_; }

  Vec apply_step(std::size_t t, const Vec& v) const;
  /// O~ applied to v.
  Vec apply_query(const Mat& oracle, const Vec& v) const;
  /// psi. extracted from a full-space vector, laid out as H^ (x) M.
  Vec bullet(const Vec& v) const;

  Mat step_matrix(std::size_t t) const;
  Operator query_operator(const Operator& oracle) const;
  /// Dense U_Q O~ ... O~ U_0; intended for small dimensions.
  Operator full_operator(const Operator& oracle) const;

  void check_oracle(const Operator& oracle) const;

 private:
  Space space_;
  std::vector<Step> steps_;
  BulletSplit split_;
};

struct QueryTrace {
  std::vector<StateVector> bullets;  // psi_t. for t = 1..Q
  StateVector total;                 // q = (+)_t psi_t.
  double L = 0.0;                    // ||q||^2
  StateVector final_state;
};

struct PerturbationLog {
  std::vector<double> eps;
  double total() const;
};

/// A displacement added to the state right after section `step`. Section 0
/// is U_0; section t >= 1 is O~ followed by U_t.
struct Injection {
  std::size_t step = 0;
  StateVector delta;
};

StateVector run(const QueryAlgorithm& alg, const Operator& oracle, const StateVector& xi);
QueryTrace trace(const QueryAlgorithm& alg, const Operator& oracle, const StateVector& xi);
std::pair<StateVector, PerturbationLog> run_perturbed(const QueryAlgorithm& alg,
                                                      const Operator& oracle,
                                                      const StateVector& xi,
                                                      const std::vector<Injection>& injected);

/// q(a xi1 + b xi2) == a q(xi1) + b q(xi2) within tol.
bool linearity_check(const QueryAlgorithm& alg, const Operator& oracle, const StateVector& xi1,
                     const StateVector& xi2, cplx a, cplx b, double tol = 1e-10);

/// The space of q: (query index) (x) H^ (x) M.
Space query_state_space(const QueryAlgorithm& alg);

}  // namespace tlab
