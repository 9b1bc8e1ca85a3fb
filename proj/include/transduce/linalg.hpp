#pragma once

// Dense complex linear algebra over labeled composite registers.
//
// A Space is a direct sum of blocks; each block is a tensor product of named
// registers. Flat indices follow one global convention: blocks are laid out
// in declaration order, and inside a block the leftmost register is the most
// significant digit.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "transduce/error.hpp"

namespace tlab {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kUnitaryTol = 1e-10;

struct Register {
  std::string name;
  std::size_t dim = 1;

  bool operator==(const Register&) const = default;
};

/// Flat position of a basis vector: the direct-sum block and one digit per
/// register of that block.
struct BasisLabel {
  std::size_t block = 0;
  std::vector<std::size_t> digits;

  bool operator==(const BasisLabel&) const = default;
};

class Space {
 public:
  Space() = default;

  static Space tensor(std::vector<Register> regs);
  static Space flat(std::size_t dim, std::string name = "x");
  static Space qubits(std::size_t n, const std::string& prefix = "q");
  static Space direct_sum(std::span<const Space> parts);
  static Space direct_sum(std::initializer_list<Space> parts) {
    return direct_sum(std::span<const Space>(parts.begin(), parts.size()));
  }

  /// Kronecker composition; a multi-block left factor distributes, a
  /// multi-block right factor is collapsed into a single register.
  Space operator*(const Space& rhs) const;

  std::size_t dim() const;
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t block_dim(std::size_t b) const;
  std::size_t block_offset(std::size_t b) const;
  const std::vector<Register>& block(std::size_t b) const { return blocks_.at(b); }

  /// Register position inside a single-block space; throws if absent.
  std::size_t register_index(const std::string& name) const;

  std::size_t index(const BasisLabel& label) const;
  BasisLabel label(std::size_t index) const;

  bool operator==(const Space&) const = default;

  std::string describe() const;

 private:
  std::vector<std::vector<Register>> blocks_;
};

class StateVector {
 public:
  StateVector() = default;
  StateVector(Space space, Vec amp);

  static StateVector basis(const Space& space, std::size_t index);
  static StateVector zero(const Space& space);

  const Space& space() const { return space_; }
  const Vec& amp() const { return amp_; }
  std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
  cplx operator[](std::size_t i) const { return amp_(static_cast<Eigen::Index>(i)); }

  double norm() const { return amp_.norm(); }
  cplx inner(const StateVector& other) const;  // <this, other>
  bool is_normalized(double tol = kUnitaryTol) const;

  StateVector operator+(const StateVector& rhs) const;
  StateVector operator-(const StateVector& rhs) const;
  StateVector operator*(cplx s) const;
  double distance(const StateVector& rhs) const { return (*this - rhs).norm(); }

 private:
  Space space_;
  Vec amp_;
};

class Operator {
 public:
  Operator() = default;
  Operator(Space space, Mat mat);

  static Operator identity(const Space& space);

  const Space& space() const { return space_; }
  const Mat& mat() const { return mat_; }
  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }

  StateVector apply(const StateVector& v) const;
  Operator operator*(const Operator& rhs) const;  // this after rhs
  Operator operator*(cplx s) const { return {space_, mat_ * s}; }
  Operator adjoint() const { return {space_, mat_.adjoint()}; }

  /// max-entry deviation of U^dagger U from the identity
  double unitarity_defect() const;
  bool is_unitary(double tol = kUnitaryTol) const { return unitarity_defect() <= tol; }
  /// Throws StructureError unless unitary within tol.
  const Operator& certify_unitary(double tol = kUnitaryTol) const;

 private:
  Space space_;
  Mat mat_;
};

double max_abs(const Mat& m);

/// 2 psi psi^dagger - I
Operator reflection_about(const StateVector& psi, double tol = kUnitaryTol);

Operator direct_sum(std::span<const Operator> ops);
Operator direct_sum(std::initializer_list<Operator> ops);

Operator tensor(std::span<const Operator> ops);
Operator tensor(std::initializer_list<Operator> ops);

/// Places `op` on the listed registers of a single-block `space` (in the
/// listed order) and the identity elsewhere.
Operator embed(const Space& space, const Operator& op, std::span<const std::size_t> targets);

using LabelPredicate = std::function<bool(const BasisLabel&)>;

/// Applies `op` to `targets` on the subspace where `predicate` holds. The
/// predicate may read only the `controls` registers, which must be disjoint
/// from `targets`.
Operator controlled(const Space& space, const Operator& op, std::span<const std::size_t> targets,
                    std::span<const std::size_t> controls, const LabelPredicate& predicate);

/// |j> -> |j+1 mod D>
Operator increment_mod(std::size_t D);
/// |j> -> |j-1 mod D>
Operator decrement_mod(std::size_t D);

// Common one-qubit gates.
Operator pauli_x();
Operator pauli_z();
Operator hadamard();

}  // namespace tlab
