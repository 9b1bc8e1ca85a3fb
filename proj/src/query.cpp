#include "transduce/query.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace tlab {

BulletSplit BulletSplit::contiguous(std::size_t offset, std::size_t dim_up, std::size_t dim_m) {
  BulletSplit s{dim_up, dim_m, std::vector<std::size_t>(dim_up * dim_m)};
  std::iota(s.index.begin(), s.index.end(), offset);
  return s;
}

// ---- Permutation ----

Permutation Permutation::identity(std::size_t n) {
  Permutation p{std::vector<std::size_t>(n), std::vector<cplx>(n, 1.0)};
  std::iota(p.target.begin(), p.target.end(), 0);
  return p;
}

Vec Permutation::apply(const Vec& v) const {
  Vec out = Vec::Zero(v.size());
  for (std::size_t j = 0; j < target.size(); ++j) {
    out(static_cast<Eigen::Index>(target[j])) += phase[j] * v(static_cast<Eigen::Index>(j));
  }
  return out;
}

Vec Permutation::apply_inverse(const Vec& v) const {
  Vec out(v.size());
  for (std::size_t j = 0; j < target.size(); ++j) {
    out(static_cast<Eigen::Index>(j)) = std::conj(phase[j]) * v(static_cast<Eigen::Index>(target[j]));
  }
  return out;
}

Mat Permutation::dense() const {
  auto n = static_cast<Eigen::Index>(target.size());
  Mat m = Mat::Zero(n, n);
  for (std::size_t j = 0; j < target.size(); ++j) {
    m(static_cast<Eigen::Index>(target[j]), static_cast<Eigen::Index>(j)) = phase[j];
  }
  return m;
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.dim() != dim()) throw DimensionError("permutation size mismatch");
  Permutation out = *this;
  for (std::size_t j = 0; j < target.size(); ++j) {
    out.target[j] = next.target[target[j]];
    out.phase[j] = next.phase[target[j]] * phase[j];
  }
  return out;
}

// ---- QueryAlgorithm ----

QueryAlgorithm::QueryAlgorithm(Space space, std::vector<Step> steps, BulletSplit split)
    : space_(std::move(space)), steps_(std::move(steps)), split_(std::move(split)) {
  const std::size_t n = space_.dim();
  if (steps_.empty()) throw StructureError("a query algorithm needs at least U_0");
  for (std::size_t t = 0; t < steps_.size(); ++t) {
    if (const Mat* m = std::get_if<Mat>(&steps_[t])) {
      if (static_cast<std::size_t>(m->rows()) != n || m->rows() != m->cols()) {
        throw DimensionError("step U_" + std::to_string(t) + " has the wrong size");
      }
      Operator(space_, *m).certify_unitary();
    } else {
      const auto& p = std::get<Permutation>(steps_[t]);
      if (p.dim() != n || p.phase.size() != n) {
        throw DimensionError("step U_" + std::to_string(t) + " has the wrong size");
      }
      std::vector<bool> hit(n, false);
      for (std::size_t j = 0; j < n; ++j) {
        if (p.target[j] >= n || hit[p.target[j]] || std::abs(std::abs(p.phase[j]) - 1.0) > kUnitaryTol) {
          throw StructureError("step U_" + std::to_string(t) + " is not a monomial unitary");
        }
        hit[p.target[j]] = true;
      }
    }
  }
  if (split_.index.size() != split_.dim()) throw StructureError("bullet split size mismatch");
  std::vector<bool> used(n, false);
  for (std::size_t i : split_.index) {
    if (i >= n || used[i]) throw StructureError("bullet split indices must be distinct and in range");
    used[i] = true;
  }
}

Vec QueryAlgorithm::apply_step(std::size_t t, const Vec& v) const {
  if (const Mat* m = std::get_if<Mat>(&steps_.at(t))) return *m * v;
  return std::get<Permutation>(steps_[t]).apply(v);
}

Vec QueryAlgorithm::bullet(const Vec& v) const {
  Vec b(static_cast<Eigen::Index>(split_.dim()));
  for (std::size_t k = 0; k < split_.index.size(); ++k) {
    b(static_cast<Eigen::Index>(k)) = v(static_cast<Eigen::Index>(split_.index[k]));
  }
  return b;
}

Vec QueryAlgorithm::apply_query(const Mat& oracle, const Vec& v) const {
  Vec out = v;
  const auto dm = static_cast<Eigen::Index>(split_.dim_m);
  Vec slice(dm);
  for (std::size_t u = 0; u < split_.dim_up; ++u) {
    const std::size_t base = u * split_.dim_m;
    for (Eigen::Index m = 0; m < dm; ++m) {
      slice(m) = v(static_cast<Eigen::Index>(split_.index[base + static_cast<std::size_t>(m)]));
    }
    Vec r = oracle * slice;
    for (Eigen::Index m = 0; m < dm; ++m) {
      out(static_cast<Eigen::Index>(split_.index[base + static_cast<std::size_t>(m)])) = r(m);
    }
  }
  return out;
}

Mat QueryAlgorithm::step_matrix(std::size_t t) const {
  if (const Mat* m = std::get_if<Mat>(&steps_.at(t))) return *m;
  return std::get<Permutation>(steps_[t]).dense();
}

void QueryAlgorithm::check_oracle(const Operator& oracle) const {
  if (oracle.dim() != split_.dim_m) {
    std::ostringstream os;
    os << "oracle dimension " << oracle.dim() << " does not match the slot dimension "
       << split_.dim_m;
    throw DimensionError(os.str());
  }
}

Operator QueryAlgorithm::query_operator(const Operator& oracle) const {
  check_oracle(oracle);
  const auto n = static_cast<Eigen::Index>(dim());
  Mat m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) = apply_query(oracle.mat(), Vec::Unit(n, j));
  return {space_, std::move(m)};
}

Operator QueryAlgorithm::full_operator(const Operator& oracle) const {
  check_oracle(oracle);
  const auto n = static_cast<Eigen::Index>(dim());
  Mat m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vec v = apply_step(0, Vec::Unit(n, j));
    for (std::size_t t = 1; t < steps_.size(); ++t) v = apply_step(t, apply_query(oracle.mat(), v));
    m.col(j) = v;
  }
  return {space_, std::move(m)};
}

// ---- execution ----

namespace {

void check_input(const QueryAlgorithm& alg, const Operator& oracle, const StateVector& xi) {
  alg.check_oracle(oracle);
  if (xi.dim() != alg.dim()) throw DimensionError("initial state does not live in H");
}

}  // namespace

Space query_state_space(const QueryAlgorithm& alg) {
  return Space::tensor({{"t", std::max<std::size_t>(alg.queries(), 1)},
                        {"U", alg.split().dim_up},
                        {"M", alg.split().dim_m}});
}

StateVector run(const QueryAlgorithm& alg, const Operator& oracle, const StateVector& xi) {
  check_input(alg, oracle, xi);
  Vec v = alg.apply_step(0, xi.amp());
  for (std::size_t t = 1; t <= alg.queries(); ++t) {
    v = alg.apply_step(t, alg.apply_query(oracle.mat(), v));
  }
  return {alg.space(), std::move(v)};
}

QueryTrace trace(const QueryAlgorithm& alg, const Operator& oracle, const StateVector& xi) {
  check_input(alg, oracle, xi);
  QueryTrace tr;
  const std::size_t Q = alg.queries();
  const auto bd = static_cast<Eigen::Index>(alg.split().dim());
  Vec q = Vec::Zero(static_cast<Eigen::Index>(std::max<std::size_t>(Q, 1)) * bd);
  const Space bspace = alg.split().space();
  Vec v = alg.apply_step(0, xi.amp());
  for (std::size_t t = 1; t <= Q; ++t) {
    Vec b = alg.bullet(v);
    q.segment(static_cast<Eigen::Index>(t - 1) * bd, bd) = b;
    tr.bullets.emplace_back(bspace, std::move(b));
    v = alg.apply_step(t, alg.apply_query(oracle.mat(), v));
  }
  if (Q == 0) q.setZero();
  tr.L = q.squaredNorm();
  tr.total = StateVector(query_state_space(alg), std::move(q));
  tr.final_state = StateVector(alg.space(), std::move(v));
  return tr;
}

double PerturbationLog::total() const {
  double s = 0.0;
  for (double e : eps) s += e;
  return s;
}

std::pair<StateVector, PerturbationLog> run_perturbed(const QueryAlgorithm& alg,
                                                      const Operator& oracle,
                                                      const StateVector& xi,
                                                      const std::vector<Injection>& injected) {
  check_input(alg, oracle, xi);
  PerturbationLog log;
  for (const auto& inj : injected) {
    if (inj.step > alg.queries()) {
      throw DomainError("perturbation step " + std::to_string(inj.step) + " out of range");
    }
    if (inj.delta.dim() != alg.dim()) throw DimensionError("perturbation does not live in H");
    log.eps.push_back(inj.delta.norm());
  }
  auto inject = [&](std::size_t s, Vec& v) {
    for (const auto& inj : injected) {
      if (inj.step == s) v += inj.delta.amp();
    }
  };
  Vec v = alg.apply_step(0, xi.amp());
  inject(0, v);
  for (std::size_t t = 1; t <= alg.queries(); ++t) {
    v = alg.apply_step(t, alg.apply_query(oracle.mat(), v));
    inject(t, v);
  }
  return {StateVector(alg.space(), std::move(v)), std::move(log)};
}

bool linearity_check(const QueryAlgorithm& alg, const Operator& oracle, const StateVector& xi1,
                     const StateVector& xi2, cplx a, cplx b, double tol) {
  StateVector mix = xi1 * a + xi2 * b;
  Vec lhs = trace(alg, oracle, mix).total.amp();
  Vec rhs = a * trace(alg, oracle, xi1).total.amp() + b * trace(alg, oracle, xi2).total.amp();
  return (lhs - rhs).norm() <= tol;
}

}  // namespace tlab
