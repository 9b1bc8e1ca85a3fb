#include "transduce/adversary.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace tlab {

namespace {

Vec apply_slot(const Operator& O, const Vec& v, std::size_t dim_up, std::size_t dim_m) {
  Vec out(v.size());
  const auto m = static_cast<Eigen::Index>(dim_m);
  for (Eigen::Index u = 0; u < static_cast<Eigen::Index>(dim_up); ++u) {
    out.segment(u * m, m) = O.mat() * v.segment(u * m, m);
  }
  return out;
}

// Orthonormal complement of the columns of an orthonormal Q (n x r).
Mat complement(const Mat& Q, Eigen::Index n) {
  if (Q.cols() == 0) return Mat::Identity(n, n);
  Eigen::HouseholderQR<Mat> qr(Q);
  Mat full = qr.householderQ() * Mat::Identity(n, n);
  return full.rightCols(n - Q.cols());
}

}  // namespace

void StateConversionProblem::validate() const {
  if (xi.size() != oracles.size() || tau.size() != oracles.size()) {
    throw DimensionError("state conversion problem needs one (O_x, xi_x, tau_x) per label");
  }
  for (std::size_t x = 0; x < size(); ++x) {
    oracles[x].certify_unitary();
    if (oracles[x].dim() != oracles.front().dim()) throw DimensionError("oracles act on different M");
    if (xi[x].size() != xi.front().size() || tau[x].size() != xi.front().size()) {
      throw DimensionError("states live in different H");
    }
  }
}

AdversaryCandidate AdversaryCandidate::scaled(double s) const {
  AdversaryCandidate c = *this;
  for (auto& x : c.v) x *= s;
  return c;
}

FeasibilityReport check_feasible(const StateConversionProblem& problem,
                                 const AdversaryCandidate& candidate, double tol) {
  problem.validate();
  FeasibilityReport rep;
  if (candidate.v.size() != problem.size()) throw DimensionError("one vector per label is needed");
  if (problem.size() == 0) return rep;
  if (candidate.dim_m != problem.oracles.front().dim()) {
    throw DimensionError("candidate M does not match the oracle dimension");
  }
  std::vector<Vec> ov;
  for (std::size_t x = 0; x < problem.size(); ++x) {
    const Vec& v = candidate.v[x];
    if (static_cast<std::size_t>(v.size()) != candidate.dim_up * candidate.dim_m) {
      throw DimensionError("candidate vector is not in H^ (x) M");
    }
    rep.objective = std::max(rep.objective, v.squaredNorm());
    ov.push_back(apply_slot(problem.oracles[x], v, candidate.dim_up, candidate.dim_m));
  }
  for (std::size_t x = 0; x < problem.size(); ++x) {
    for (std::size_t y = 0; y < problem.size(); ++y) {
      const cplx lhs = problem.xi[x].dot(problem.xi[y]) - problem.tau[x].dot(problem.tau[y]);
      const cplx rhs = candidate.v[x].dot(candidate.v[y]) - ov[x].dot(ov[y]);
      rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs));
    }
  }
  rep.feasible = rep.max_residual <= tol;
  return rep;
}

StateConversionProblem two_oracle_problem(double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("delta must lie in (0, 1/2]");
  StateConversionProblem pr;
  for (double p : {0.5 - delta, 0.5 + delta}) pr.oracles.push_back(simple_oracle(p));
  const Vec e0 = Vec::Unit(1, 0);
  pr.xi = {e0, e0};
  pr.tau = {e0, -e0};
  return pr;
}

double two_oracle_bound(double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("delta must lie in (0, 1/2]");
  Eigen::Vector2d f0(std::sqrt(0.5 + delta), std::sqrt(0.5 - delta));
  Eigen::Vector2d f1(std::sqrt(0.5 - delta), std::sqrt(0.5 + delta));
  const Eigen::Matrix2d d = f0 * f0.transpose() - f1 * f1.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(d);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (std::abs(norm - 2.0 * delta) > 1e-12) {
    std::ostringstream os;
    os << "||phi0 phi0* - phi1 phi1*|| = " << norm << " differs from 2 delta = " << 2.0 * delta;
    throw ContractError(os.str());
  }
  return 1.0 / norm;
}

AdversaryCandidate transducer_to_candidate(const Transducer& T,
                                           const StateConversionProblem& problem,
                                           bool restrict_span, double tol) {
  problem.validate();
  AdversaryCandidate c;
  if (problem.size() == 0) return c;
  if (!T.has_algorithm()) throw StructureError("total query states need the algorithm form");
  const auto& alg = T.algorithm();
  c.dim_m = alg.split().dim_m;
  c.dim_up = std::max<std::size_t>(alg.queries(), 1) * alg.split().dim_up;
  for (std::size_t x = 0; x < problem.size(); ++x) {
    Complexities k = complexities(T, problem.oracles[x], StateVector(T.public_space(), problem.xi[x]), tol);
    c.v.push_back(k.q.amp());
  }
  return restrict_span ? restrict_to_span(c) : c;
}

AdversaryCandidate restrict_to_span(const AdversaryCandidate& c, double rank_tol) {
  const auto up = static_cast<Eigen::Index>(c.dim_up);
  const auto m = static_cast<Eigen::Index>(c.dim_m);
  std::vector<Vec> slices;
  for (const Vec& v : c.v) {
    for (Eigen::Index j = 0; j < m; ++j) {
      Vec s(up);
      for (Eigen::Index u = 0; u < up; ++u) s(u) = v(u * m + j);
      slices.push_back(std::move(s));
    }
  }
  const Mat B = span_restriction(slices, rank_tol);
  AdversaryCandidate out;
  out.dim_m = c.dim_m;
  out.dim_up = static_cast<std::size_t>(B.cols());
  for (const Vec& v : c.v) {
    Vec w(B.cols() * m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Vec s(up);
      for (Eigen::Index u = 0; u < up; ++u) s(u) = v(u * m + j);
      const Vec coords = B.adjoint() * s;
      for (Eigen::Index r = 0; r < B.cols(); ++r) w(r * m + j) = coords(r);
    }
    out.v.push_back(std::move(w));
  }
  return out;
}

Transducer canonical_transducer(const StateConversionProblem& problem,
                                const AdversaryCandidate& candidate, double tol) {
  problem.validate();
  if (problem.size() == 0) throw StructureError("empty problem has no canonical transducer");
  const auto h = static_cast<Eigen::Index>(problem.xi.front().size());
  const auto lq = static_cast<Eigen::Index>(candidate.dim_up * candidate.dim_m);
  const Eigen::Index n = h + lq;
  const auto X = static_cast<Eigen::Index>(problem.size());
  Mat A(n, X), B(n, X);
  for (Eigen::Index x = 0; x < X; ++x) {
    const auto i = static_cast<std::size_t>(x);
    A.col(x) << problem.xi[i], apply_slot(problem.oracles[i], candidate.v[i], candidate.dim_up, candidate.dim_m);
    B.col(x) << problem.tau[i], candidate.v[i];
  }
  const double gap = (A.adjoint() * A - B.adjoint() * B).cwiseAbs().maxCoeff();
  if (gap > tol) {
    std::ostringstream os;
    os << "candidate is infeasible: Gram gap " << gap;
    throw StructureError(os.str());
  }

  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > 1e-10 * std::max(1.0, s(0))) ++r;
  const Mat Ua = svd.matrixU().leftCols(r);
  const Mat Ub = B * svd.matrixV().leftCols(r) * s.head(r).cwiseInverse().asDiagonal();
  Mat U = Ub * Ua.adjoint() + complement(Ub, n) * complement(Ua, n).adjoint();
  // Polar projection removes the residual non-unitarity left by a Gram gap.
  Eigen::JacobiSVD<Mat> pol(U, Eigen::ComputeFullU | Eigen::ComputeFullV);
  U = pol.matrixU() * pol.matrixV().adjoint();

  const Space space = Space::flat(static_cast<std::size_t>(n), "HL");
  std::vector<Step> steps{Mat(Mat::Identity(n, n)), U};
  QueryAlgorithm alg(space, std::move(steps),
                     BulletSplit::contiguous(static_cast<std::size_t>(h), candidate.dim_up, candidate.dim_m));
  Transducer T = Transducer::from_algorithm(std::move(alg), static_cast<std::size_t>(h),
                                            static_cast<std::size_t>(lq));
  T.with_canonical_split({0, candidate.dim_up, candidate.dim_m});
  return T;
}

}  // namespace tlab
