#include "transduce/oracles.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tlab {

namespace {

Vec stack(double a, const Vec& phi0, double b, const Vec& phi1) {
  Vec v(2 * phi0.size());
  v.head(phi0.size()) = a * phi0;
  v.tail(phi1.size()) = b * phi1;
  return v;
}

}  // namespace

OracleSpec OracleSpec::simple(double p) {
  OracleSpec s;
  s.p = p;
  s.phi0 = Vec::Zero(1);
  s.phi0(0) = 1.0;
  s.phi1 = s.phi0;
  return s;
}

OracleSpec OracleSpec::random(double p, std::size_t dW, Rng& rng) {
  OracleSpec s;
  s.p = p;
  s.phi0 = random_unit(dW, rng);
  s.phi1 = random_unit(dW, rng);
  return s;
}

double OracleSpec::gamma() const {
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(p / (1.0 - p));
}

void OracleSpec::validate(double tol) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << "oracle probability p = " << p << " outside [0,1]";
    throw DomainError(os.str());
  }
  if (phi0.size() == 0 || phi0.size() != phi1.size()) {
    throw DimensionError("workspace states must share a positive dimension");
  }
  if (std::abs(phi0.norm() - 1.0) > tol || std::abs(phi1.norm() - 1.0) > tol) {
    throw NormalizationError("workspace states must be normalized");
  }
}

StateVector OracleSpec::target() const {
  return {oracle_space(dW()), stack(std::sqrt(1.0 - p), phi0, std::sqrt(p), phi1)};
}

StateVector OracleSpec::negated() const {
  return {oracle_space(dW()), stack(std::sqrt(p), phi0, -std::sqrt(1.0 - p), phi1)};
}

Space oracle_space(std::size_t dW) { return Space::tensor({{"A", 2}, {"W", dW}}); }

Operator simple_oracle(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("simple_oracle: p outside [0,1]");
  Vec phi(2);
  phi << std::sqrt(1.0 - p), std::sqrt(p);
  return reflection_about(StateVector(oracle_space(1), phi));
}

Operator state_generating_oracle(const OracleSpec& spec) {
  spec.validate();
  const Vec phi = spec.target().amp();
  const auto n = phi.size();
  // Rotate so that the overlap with |0>|0> is real, reflect, rotate back.
  cplx phase = std::abs(phi(0)) > 0 ? phi(0) / std::abs(phi(0)) : cplx(1.0);
  Vec rotated = phi / phase;
  Vec w = -rotated;
  w(0) += 1.0;
  Mat h = Mat::Identity(n, n);
  double wn = w.squaredNorm();
  if (wn > 0) h -= 2.0 * w * w.adjoint() / wn;
  return {oracle_space(spec.dW()), phase * h};
}

Operator reflecting_from_generator(const Operator& O) {
  O.certify_unitary();
  return {O.space(), O.mat() * reflection_about(StateVector::basis(O.space(), 0)).mat() *
                         O.mat().adjoint()};
}

Mat complement_basis(const OracleSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(2 * spec.dW());
  Mat f(n, 2);
  f.col(0) = spec.target().amp();
  f.col(1) = spec.negated().amp();
  Eigen::HouseholderQR<Mat> qr(f);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - 2);
}

Operator general_reflecting_oracle(const OracleSpec& spec,
                                   const std::optional<Operator>& complement_action) {
  spec.validate();
  const Vec f0 = spec.target().amp();
  const Vec f1 = spec.negated().amp();
  const auto n = f0.size();
  Mat m = f0 * f0.adjoint() - f1 * f1.adjoint();
  Mat pc = Mat::Identity(n, n) - f0 * f0.adjoint() - f1 * f1.adjoint();
  if (!complement_action) {
    m -= pc;
  } else {
    const Mat& a = complement_action->mat();
    if (a.rows() != n) throw DimensionError("complement action has the wrong dimension");
    Mat restricted = pc * a * pc;
    double leak = max_abs(a * pc - restricted);
    double defect = max_abs(restricted.adjoint() * restricted - pc);
    if (leak > 1e-10 || defect > 1e-10) {
      std::ostringstream os;
      os << "complement action is not a unitary on the complement (leak " << leak << ", defect "
         << defect << ")";
      throw StructureError(os.str());
    }
    m += restricted;
  }
  return {oracle_space(spec.dW()), std::move(m)};
}

Operator random_complement_action(const OracleSpec& spec, Rng& rng) {
  Mat b = complement_basis(spec);
  Mat v = random_unitary(static_cast<std::size_t>(b.cols()), rng);
  return {oracle_space(spec.dW()), b * v * b.adjoint()};
}

Operator bidirectional(const Operator& O) {
  return direct_sum({O, O.adjoint()});
}

}  // namespace tlab
