#include "transduce/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tlab {

namespace {

std::size_t product_dim(const std::vector<Register>& regs) {
  std::size_t d = 1;
  for (const auto& r : regs) d *= r.dim;
  return d;
}

void require_same(const Space& a, const Space& b, const char* what) {
  if (!(a == b)) {
    throw DimensionError(std::string(what) + ": space mismatch (" + a.describe() + " vs " +
                         b.describe() + ")");
  }
}

}  // namespace

// ---- Space ----

Space Space::tensor(std::vector<Register> regs) {
  for (const auto& r : regs) {
    if (r.dim == 0) throw DimensionError("register '" + r.name + "' has dimension 0");
  }
  Space s;
  s.blocks_.push_back(std::move(regs));
  return s;
}

Space Space::flat(std::size_t dim, std::string name) {
  return tensor({Register{std::move(name), dim}});
}

Space Space::qubits(std::size_t n, const std::string& prefix) {
  std::vector<Register> regs;
  regs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) regs.push_back({prefix + std::to_string(i), 2});
  return tensor(std::move(regs));
}

Space Space::direct_sum(std::span<const Space> parts) {
  Space s;
  for (const auto& p : parts) {
    for (const auto& b : p.blocks_) s.blocks_.push_back(b);
  }
  return s;
}

Space Space::operator*(const Space& rhs) const {
  std::vector<Register> right;
  if (rhs.blocks_.size() == 1) {
    right = rhs.blocks_.front();
  } else if (rhs.dim() > 0) {
    right.push_back({"(" + rhs.describe() + ")", rhs.dim()});
  }
  Space s;
  for (const auto& b : blocks_) {
    auto merged = b;
    merged.insert(merged.end(), right.begin(), right.end());
    s.blocks_.push_back(std::move(merged));
  }
  return s;
}

std::size_t Space::dim() const {
  std::size_t d = 0;
  for (const auto& b : blocks_) d += product_dim(b);
  return d;
}

std::size_t Space::block_dim(std::size_t b) const { return product_dim(blocks_.at(b)); }

std::size_t Space::block_offset(std::size_t b) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < b; ++i) off += product_dim(blocks_.at(i));
  return off;
}

std::size_t Space::register_index(const std::string& name) const {
  if (blocks_.size() != 1) throw StructureError("register lookup needs a single-block space");
  const auto& regs = blocks_.front();
  for (std::size_t i = 0; i < regs.size(); ++i) {
    if (regs[i].name == name) return i;
  }
  throw StructureError("no register named '" + name + "' in " + describe());
}

std::size_t Space::index(const BasisLabel& label) const {
  const auto& regs = blocks_.at(label.block);
  if (label.digits.size() != regs.size()) throw DimensionError("label arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < regs.size(); ++i) {
    if (label.digits[i] >= regs[i].dim) throw DimensionError("label digit out of range");
    idx = idx * regs[i].dim + label.digits[i];
  }
  return block_offset(label.block) + idx;
}

BasisLabel Space::label(std::size_t index) const {
  std::size_t off = 0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    std::size_t d = product_dim(blocks_[b]);
    if (index < off + d) {
      BasisLabel l{b, std::vector<std::size_t>(blocks_[b].size())};
      std::size_t rem = index - off;
      for (std::size_t i = blocks_[b].size(); i-- > 0;) {
        l.digits[i] = rem % blocks_[b][i].dim;
        rem /= blocks_[b][i].dim;
      }
      return l;
    }
    off += d;
  }
  throw DimensionError("flat index out of range");
}

std::string Space::describe() const {
  std::ostringstream os;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) os << " + ";
    if (blocks_[b].empty()) os << "1";
    for (std::size_t i = 0; i < blocks_[b].size(); ++i) {
      if (i) os << "*";
      os << blocks_[b][i].name << "[" << blocks_[b][i].dim << "]";
    }
  }
  return os.str();
}

// ---- StateVector ----

StateVector::StateVector(Space space, Vec amp) : space_(std::move(space)), amp_(std::move(amp)) {
  if (static_cast<std::size_t>(amp_.size()) != space_.dim()) {
    throw DimensionError("amplitude length does not match space dimension");
  }
  if (!amp_.allFinite()) throw DimensionError("non-finite amplitude");
}

StateVector StateVector::basis(const Space& space, std::size_t index) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(space.dim()));
  if (index >= space.dim()) throw DimensionError("basis index out of range");
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return {space, std::move(v)};
}

StateVector StateVector::zero(const Space& space) {
  return {space, Vec::Zero(static_cast<Eigen::Index>(space.dim()))};
}

cplx StateVector::inner(const StateVector& other) const {
  require_same(space_, other.space_, "inner");
  return amp_.dot(other.amp_);
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

StateVector StateVector::operator+(const StateVector& rhs) const {
  require_same(space_, rhs.space_, "add");
  return {space_, amp_ + rhs.amp_};
}

StateVector StateVector::operator-(const StateVector& rhs) const {
  require_same(space_, rhs.space_, "subtract");
  return {space_, amp_ - rhs.amp_};
}

StateVector StateVector::operator*(cplx s) const { return {space_, amp_ * s}; }

// ---- Operator ----

Operator::Operator(Space space, Mat mat) : space_(std::move(space)), mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols()) throw DimensionError("operator matrix is not square");
  if (static_cast<std::size_t>(mat_.rows()) != space_.dim()) {
    throw DimensionError("operator size does not match space dimension");
  }
}

Operator Operator::identity(const Space& space) {
  auto n = static_cast<Eigen::Index>(space.dim());
  return {space, Mat::Identity(n, n)};
}

StateVector Operator::apply(const StateVector& v) const {
  require_same(space_, v.space(), "apply");
  return {space_, mat_ * v.amp()};
}

Operator Operator::operator*(const Operator& rhs) const {
  require_same(space_, rhs.space_, "compose");
  return {space_, mat_ * rhs.mat_};
}

double Operator::unitarity_defect() const {
  auto n = mat_.rows();
  return max_abs(mat_.adjoint() * mat_ - Mat::Identity(n, n));
}

const Operator& Operator::certify_unitary(double tol) const {
  double d = unitarity_defect();
  if (d > tol) {
    std::ostringstream os;
    os << "operator is not unitary (defect " << d << ")";
    throw StructureError(os.str());
  }
  return *this;
}

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Operator reflection_about(const StateVector& psi, double tol) {
  if (!psi.is_normalized(tol)) {
    std::ostringstream os;
    os << "reflection axis has norm " << psi.norm();
    throw NormalizationError(os.str());
  }
  auto n = static_cast<Eigen::Index>(psi.dim());
  Mat m = 2.0 * psi.amp() * psi.amp().adjoint() - Mat::Identity(n, n);
  return {psi.space(), std::move(m)};
}

Operator direct_sum(std::span<const Operator> ops) {
  std::vector<Space> spaces;
  Eigen::Index n = 0;
  for (const auto& o : ops) {
    spaces.push_back(o.space());
    n += o.mat().rows();
  }
  Mat m = Mat::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& o : ops) {
    auto k = o.mat().rows();
    m.block(off, off, k, k) = o.mat();
    off += k;
  }
  return {Space::direct_sum(spaces), std::move(m)};
}

Operator direct_sum(std::initializer_list<Operator> ops) {
  return direct_sum(std::span<const Operator>(ops.begin(), ops.size()));
}

Operator tensor(std::span<const Operator> ops) {
  if (ops.empty()) return Operator(Space::tensor({}), Mat::Identity(1, 1));
  Space s = ops.front().space();
  Mat m = ops.front().mat();
  for (std::size_t i = 1; i < ops.size(); ++i) {
    const Mat& b = ops[i].mat();
    Mat k(m.rows() * b.rows(), m.cols() * b.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        k.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = m(r, c) * b;
      }
    }
    m = std::move(k);
    s = s * ops[i].space();
  }
  return {std::move(s), std::move(m)};
}

Operator tensor(std::initializer_list<Operator> ops) {
  return tensor(std::span<const Operator>(ops.begin(), ops.size()));
}

Operator embed(const Space& space, const Operator& op, std::span<const std::size_t> targets) {
  return controlled(space, op, targets, {}, [](const BasisLabel&) { return true; });
}

Operator controlled(const Space& space, const Operator& op, std::span<const std::size_t> targets,
                    std::span<const std::size_t> controls, const LabelPredicate& predicate) {
  if (space.block_count() != 1) throw StructureError("controlled: single-block space required");
  const auto& regs = space.block(0);
  std::size_t tdim = 1;
  for (std::size_t t : targets) {
    if (t >= regs.size()) throw StructureError("controlled: target register out of range");
    if (std::count(targets.begin(), targets.end(), t) != 1) {
      throw StructureError("controlled: repeated target register");
    }
    if (std::find(controls.begin(), controls.end(), t) != controls.end()) {
      throw StructureError("controlled: register '" + regs[t].name +
                           "' is both control and target");
    }
    tdim *= regs[t].dim;
  }
  for (std::size_t c : controls) {
    if (c >= regs.size()) throw StructureError("controlled: control register out of range");
  }
  if (tdim != op.dim()) throw DimensionError("controlled: op dimension does not match targets");

  const std::size_t n = space.dim();
  const auto N = static_cast<Eigen::Index>(n);
  Mat m = Mat::Zero(N, N);

  auto target_index = [&](const BasisLabel& l) {
    std::size_t idx = 0;
    for (std::size_t t : targets) idx = idx * regs[t].dim + l.digits[t];
    return idx;
  };
  auto set_targets = [&](BasisLabel& l, std::size_t idx) {
    for (std::size_t k = targets.size(); k-- > 0;) {
      l.digits[targets[k]] = idx % regs[targets[k]].dim;
      idx /= regs[targets[k]].dim;
    }
  };

  for (std::size_t j = 0; j < n; ++j) {
    BasisLabel l = space.label(j);
    bool on = predicate(l);
    // The predicate must not see the acted-on registers.
    BasisLabel probe = l;
    set_targets(probe, 0);
    if (predicate(probe) != on) {
      throw StructureError("controlled: predicate depends on a target register");
    }
    const auto J = static_cast<Eigen::Index>(j);
    if (!on) {
      m(J, J) = 1.0;
      continue;
    }
    auto col = static_cast<Eigen::Index>(target_index(l));
    BasisLabel row = l;
    for (std::size_t k = 0; k < tdim; ++k) {
      set_targets(row, k);
      m(static_cast<Eigen::Index>(space.index(row)), J) = op.mat()(static_cast<Eigen::Index>(k), col);
    }
  }
  return {space, std::move(m)};
}

Operator increment_mod(std::size_t D) {
  if (D < 2) throw DomainError("increment_mod needs D >= 2");
  auto n = static_cast<Eigen::Index>(D);
  Mat m = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m((j + 1) % n, j) = 1.0;
  return {Space::flat(D, "j"), std::move(m)};
}

Operator decrement_mod(std::size_t D) {
  if (D < 2) throw DomainError("decrement_mod needs D >= 2");
  auto n = static_cast<Eigen::Index>(D);
  Mat m = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m((j + n - 1) % n, j) = 1.0;
  return {Space::flat(D, "j"), std::move(m)};
}

Operator pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return {Space::flat(2, "q"), std::move(m)};
}

Operator pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return {Space::flat(2, "q"), std::move(m)};
}

Operator hadamard() {
  Mat m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return {Space::flat(2, "q"), std::move(m)};
}

}  // namespace tlab
