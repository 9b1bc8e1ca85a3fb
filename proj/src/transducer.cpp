#include "transduce/transducer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "transduce/random.hpp"

namespace tlab {

namespace {

std::vector<std::size_t> range(std::size_t from, std::size_t count) {
  std::vector<std::size_t> r(count);
  std::iota(r.begin(), r.end(), from);
  return r;
}

}  // namespace

// ---- Transducer ----

Transducer Transducer::from_unitary(Operator S, std::size_t dim_H) {
  S.certify_unitary();
  if (dim_H > S.dim()) throw DimensionError("public space larger than the transducer");
  Transducer T;
  T.h_index_ = range(0, dim_H);
  T.l_index_ = range(dim_H, S.dim() - dim_H);
  T.form_ = std::move(S);
  return T;
}

Transducer Transducer::from_algorithm(QueryAlgorithm alg, std::vector<std::size_t> h_index,
                                      std::vector<std::size_t> l_index) {
  std::vector<bool> used(alg.dim(), false);
  for (const auto* list : {&h_index, &l_index}) {
    for (std::size_t i : *list) {
      if (i >= alg.dim() || used[i]) throw StructureError("H and L positions must be distinct");
      used[i] = true;
    }
  }
  Transducer T;
  T.form_ = std::move(alg);
  T.h_index_ = std::move(h_index);
  T.l_index_ = std::move(l_index);
  return T;
}

Transducer Transducer::from_algorithm(QueryAlgorithm alg, std::size_t dim_H, std::size_t dim_L) {
  return from_algorithm(std::move(alg), range(0, dim_H), range(dim_H, dim_L));
}

Transducer& Transducer::with_canonical_split(CanonicalSplit split) {
  if (split.dim_L_circ + split.dim_L_up * split.dim_m != dim_L()) {
    throw StructureError("canonical split does not add up to dim L");
  }
  canonical_ = split;
  return *this;
}

Vec Transducer::embed(const Vec& xi, const Vec& v) const {
  if (static_cast<std::size_t>(xi.size()) != dim_H() ||
      static_cast<std::size_t>(v.size()) != dim_L()) {
    throw DimensionError("coupling does not match H (+) L");
  }
  const std::size_t n = has_algorithm() ? algorithm().dim() : dim_H() + dim_L();
  Vec out = Vec::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < h_index_.size(); ++i) {
    out(static_cast<Eigen::Index>(h_index_[i])) = xi(static_cast<Eigen::Index>(i));
  }
  for (std::size_t i = 0; i < l_index_.size(); ++i) {
    out(static_cast<Eigen::Index>(l_index_[i])) = v(static_cast<Eigen::Index>(i));
  }
  return out;
}

Operator Transducer::action_matrix(const Operator& oracle) const {
  if (!has_algorithm()) {
    const auto& S = std::get<Operator>(form_);
    return {coupled_space(), S.mat()};
  }
  const auto& alg = algorithm();
  alg.check_oracle(oracle);
  std::vector<std::size_t> pos = h_index_;
  pos.insert(pos.end(), l_index_.begin(), l_index_.end());
  const auto k = static_cast<Eigen::Index>(pos.size());
  const auto n = static_cast<Eigen::Index>(alg.dim());
  Mat m(k, k);
  double leak = 0.0;
  for (Eigen::Index c = 0; c < k; ++c) {
    Vec v = alg.apply_step(0, Vec::Unit(n, static_cast<Eigen::Index>(pos[static_cast<std::size_t>(c)])));
    for (std::size_t t = 1; t <= alg.queries(); ++t) {
      v = alg.apply_step(t, alg.apply_query(oracle.mat(), v));
    }
    double inside = 0.0;
    for (Eigen::Index r = 0; r < k; ++r) {
      m(r, c) = v(static_cast<Eigen::Index>(pos[static_cast<std::size_t>(r)]));
      inside += std::norm(m(r, c));
    }
    leak = std::max(leak, std::sqrt(std::max(0.0, v.squaredNorm() - inside)));
  }
  if (leak > 1e-10) {
    std::ostringstream os;
    os << "transducer leaks out of H (+) L into scratch (norm " << leak << ")";
    throw StructureError(os.str());
  }
  return {coupled_space(), std::move(m)};
}

// ---- transduction ----

TransductionSolver::TransductionSolver(const Transducer& T, const Operator& oracle)
    : dim_H_(T.dim_H()), action_(T.action_matrix(oracle)) {
  const auto h = static_cast<Eigen::Index>(T.dim_H());
  const auto l = static_cast<Eigen::Index>(T.dim_L());
  if (l == 0) {
    sigma_min_ = 0.0;
    return;
  }
  Mat a = Mat::Identity(l, l) - action_.mat().bottomRightCorner(l, l);
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  U_ = svd.matrixU();
  V_ = svd.matrixV();
  sigma_ = svd.singularValues();
  sigma_min_ = sigma_.minCoeff();
  (void)h;
}

TransductionResult TransductionSolver::solve(const StateVector& xi, double tol) const {
  if (xi.dim() != dim_H_) throw DimensionError("initial state does not live in H");
  const auto h = static_cast<Eigen::Index>(dim_H_);
  const auto l = action_.mat().rows() - h;
  const Mat& m = action_.mat();
  TransductionResult res;
  res.sigma_min = sigma_min_;
  Vec v = Vec::Zero(l);
  if (l > 0) {
    Vec rhs = m.bottomLeftCorner(l, h) * xi.amp();
    Vec c = U_.adjoint() * rhs;
    res.ridge = sigma_min_ < kSingularThreshold;
    // Only the near-singular directions are regularized; the rest are
    // inverted exactly so the ridge does not bias a well-posed component.
    for (Eigen::Index i = 0; i < l; ++i) {
      double s = sigma_(i);
      c(i) *= s < kSingularThreshold ? s / (s * s + kRidge) : 1.0 / s;
    }
    v = V_ * c;
  }
  Vec tau = m.topLeftCorner(h, h) * xi.amp();
  if (l > 0) tau += m.topRightCorner(h, l) * v;

  Vec joint(h + l), expect(h + l);
  joint << xi.amp(), v;
  expect << tau, v;
  res.residual = (m * joint - expect).norm();
  res.W = v.squaredNorm();
  res.tau = StateVector(Space::flat(dim_H_, "H"), std::move(tau));
  res.v = StateVector(l > 0 ? Space::flat(static_cast<std::size_t>(l), "L") : Space(), std::move(v));
  if (res.residual > tol) {
    std::ostringstream os;
    os << "near-singular transduction: residual " << res.residual << " exceeds " << tol
       << " (sigma_min " << sigma_min_ << ")";
    throw NearSingularError(os.str(), res.residual);
  }
  return res;
}

TransductionResult transduce(const Transducer& T, const Operator& oracle, const StateVector& xi,
                             double tol) {
  return TransductionSolver(T, oracle).solve(xi, tol);
}

Complexities complexities(const Transducer& T, const Operator& oracle, const StateVector& xi,
                          double tol) {
  if (!T.has_algorithm()) throw StructureError("complexities need the algorithm form");
  Complexities c;
  c.result = transduce(T, oracle, xi, tol);
  c.W = c.result.W;
  const auto& alg = T.algorithm();
  QueryTrace tr = trace(alg, oracle, StateVector(alg.space(), T.embed(xi.amp(), c.result.v.amp())));
  c.L = tr.L;
  c.q = std::move(tr.total);
  return c;
}

Complexities complexities_extended(const Transducer& T, const Operator& oracle, const Vec& xi,
                                   double tol) {
  if (!T.has_algorithm()) throw StructureError("complexities need the algorithm form");
  const auto h = static_cast<Eigen::Index>(T.dim_H());
  if (h == 0 || xi.size() % h != 0) throw DimensionError("extended state is not E (x) H");
  const Eigen::Index E = xi.size() / h;
  TransductionSolver solver(T, oracle);
  const auto& alg = T.algorithm();
  const Space qs = query_state_space(alg);
  const auto qd = static_cast<Eigen::Index>(qs.dim());
  Vec q = Vec::Zero(E * qd);
  Complexities c;
  for (Eigen::Index e = 0; e < E; ++e) {
    StateVector slice(T.public_space(), xi.segment(e * h, h));
    TransductionResult r = solver.solve(slice, tol);
    QueryTrace tr = trace(alg, oracle, StateVector(alg.space(), T.embed(slice.amp(), r.v.amp())));
    c.W += r.W;
    c.L += tr.L;
    q.segment(e * qd, qd) = tr.total.amp();
  }
  c.q = StateVector(Space::tensor({{"E", static_cast<std::size_t>(E)}, {"Q", qs.dim()}}), q);
  return c;
}

// ---- implementation of the transduction action ----

ActionResult implement_action(const Operator& action, std::size_t dim_H, const StateVector& xi,
                              std::size_t K, bool allow_materialize) {
  if (K == 0) throw DomainError("implement_action needs K >= 1");
  if (xi.dim() != dim_H) throw DimensionError("initial state does not live in H");
  const auto h = static_cast<Eigen::Index>(dim_H);
  const auto l = static_cast<Eigen::Index>(action.dim()) - h;
  const auto k = static_cast<Eigen::Index>(K);
  const Mat& m = action.mat();
  const double s = 1.0 / std::sqrt(static_cast<double>(K));

  // Layout: K copies of H, then L.
  const Eigen::Index n = k * h + l;
  Vec state = Vec::Zero(n);
  for (Eigen::Index i = 0; i < k; ++i) state.segment(i * h, h) = s * xi.amp();

  ActionResult out;
  auto rows_of = [&](Eigen::Index i) {
    std::vector<Eigen::Index> r;
    for (Eigen::Index a = 0; a < h; ++a) r.push_back(i * h + a);
    for (Eigen::Index b = 0; b < l; ++b) r.push_back(k * h + b);
    return r;
  };

  if (allow_materialize && static_cast<std::size_t>(n) <= kMaterializeLimit) {
    Mat big = Mat::Identity(n, n);
    for (Eigen::Index i = 0; i < k; ++i) {
      auto r = rows_of(i);
      Mat sub(h + l, n);
      for (Eigen::Index a = 0; a < h + l; ++a) sub.row(a) = big.row(r[static_cast<std::size_t>(a)]);
      sub = m * sub;
      for (Eigen::Index a = 0; a < h + l; ++a) big.row(r[static_cast<std::size_t>(a)]) = sub.row(a);
    }
    state = big * state;
    out.materialized = true;
  } else {
    Vec local(h + l);
    for (Eigen::Index i = 0; i < k; ++i) {
      local << state.segment(i * h, h), state.tail(l);
      local = m * local;
      state.segment(i * h, h) = local.head(h);
      state.tail(l) = local.tail(l);
    }
  }

  Vec tau = Vec::Zero(h);
  for (Eigen::Index i = 0; i < k; ++i) tau += s * state.segment(i * h, h);
  out.garbage = std::sqrt(std::max(0.0, state.squaredNorm() - tau.squaredNorm()));
  out.tau_prime = StateVector(Space::flat(dim_H, "H"), std::move(tau));
  return out;
}

ActionResult implement_action(const Transducer& T, const Operator& oracle, const StateVector& xi,
                              std::size_t K) {
  return implement_action(T.action_matrix(oracle), T.dim_H(), xi, K);
}

// ---- canonical form ----

bool canonical_check(const Transducer& T, double tol, std::uint64_t seed) {
  if (!T.has_algorithm()) return true;
  const auto& alg = T.algorithm();
  Rng rng(seed);
  const std::size_t dm = alg.split().dim_m;
  Space ms = Space::flat(dm, "M");
  Operator o1(ms, random_unitary(dm, rng));
  Operator o2(ms, random_unitary(dm, rng));
  Mat s1 = alg.full_operator(o1).mat() * alg.query_operator(o1).mat().adjoint();
  Mat s2 = alg.full_operator(o2).mat() * alg.query_operator(o2).mat().adjoint();
  return max_abs(s1 - s2) <= tol;
}

// ---- composition ----

Transducer parallel_compose(const std::vector<Transducer>& Ts) {
  if (Ts.empty()) throw StructureError("parallel_compose needs at least one transducer");
  std::size_t Q = 0;
  bool any_alg = false;
  for (const auto& T : Ts) {
    if (!T.has_algorithm()) continue;
    if (any_alg && T.algorithm().queries() != Q) {
      throw StructureError("parallel_compose: algorithm forms must share the query count");
    }
    Q = T.algorithm().queries();
    any_alg = true;
  }

  struct Part {
    std::vector<Step> steps;
    BulletSplit split;
    std::size_t dim;
  };
  std::vector<Part> parts;
  std::size_t up = 0, mtot = 0;
  for (const auto& T : Ts) {
    Part p;
    if (T.has_algorithm()) {
      p.steps = T.algorithm().steps();
      p.split = T.algorithm().split();
      p.dim = T.algorithm().dim();
    } else {
      const Operator S = T.action_matrix(Operator());
      p.dim = S.dim();
      p.steps.push_back(S.mat());
      for (std::size_t t = 0; t < Q; ++t) p.steps.push_back(Permutation::identity(p.dim));
      p.split = BulletSplit{0, 0, {}};
    }
    up = std::max(up, p.split.dim_up);
    mtot += p.split.dim_m;
    parts.push_back(std::move(p));
  }

  std::size_t core = 0;
  for (const auto& p : parts) core += p.dim;
  std::size_t pad = 0;
  for (const auto& p : parts) pad += (up - p.split.dim_up) * p.split.dim_m;
  const std::size_t n = core + pad;

  BulletSplit split{up, mtot, std::vector<std::size_t>(up * mtot)};
  std::vector<std::size_t> h_index, l_index;
  std::size_t off = 0, moff = 0, next_pad = core;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    for (std::size_t u = 0; u < up; ++u) {
      for (std::size_t m = 0; m < p.split.dim_m; ++m) {
        split.index[u * mtot + moff + m] =
            u < p.split.dim_up ? off + p.split.index[u * p.split.dim_m + m] : next_pad++;
      }
    }
    for (std::size_t x : Ts[i].h_index()) h_index.push_back(off + x);
    off += p.dim;
    moff += p.split.dim_m;
  }
  off = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t x : Ts[i].l_index()) l_index.push_back(off + x);
    off += parts[i].dim;
  }

  std::vector<Step> steps;
  for (std::size_t t = 0; t <= Q; ++t) {
    bool all_perm = true;
    for (const auto& p : parts) all_perm = all_perm && std::holds_alternative<Permutation>(p.steps[t]);
    if (all_perm) {
      Permutation perm = Permutation::identity(n);
      std::size_t o = 0;
      for (const auto& p : parts) {
        const auto& pp = std::get<Permutation>(p.steps[t]);
        for (std::size_t j = 0; j < p.dim; ++j) {
          perm.target[o + j] = o + pp.target[j];
          perm.phase[o + j] = pp.phase[j];
        }
        o += p.dim;
      }
      steps.emplace_back(std::move(perm));
    } else {
      const auto N = static_cast<Eigen::Index>(n);
      Mat m = Mat::Identity(N, N);
      Eigen::Index o = 0;
      for (const auto& p : parts) {
        const auto d = static_cast<Eigen::Index>(p.dim);
        if (const Mat* dm = std::get_if<Mat>(&p.steps[t])) {
          m.block(o, o, d, d) = *dm;
        } else {
          m.block(o, o, d, d) = std::get<Permutation>(p.steps[t]).dense();
        }
        o += d;
      }
      steps.emplace_back(std::move(m));
    }
  }
  QueryAlgorithm alg(Space::flat(n, "P"), std::move(steps), std::move(split));
  return Transducer::from_algorithm(std::move(alg), std::move(h_index), std::move(l_index));
}

CompositionTotals functional_accounting(const Vec& qA_direct, const Vec& qA_inner, double W_A,
                                        const InnerComplexityFn& inner) {
  CompositionTotals t;
  InnerComplexity in = qA_inner.norm() == 0.0 ? InnerComplexity{} : inner(qA_inner);
  t.L_total = qA_direct.squaredNorm() + in.L;
  t.W_total = W_A + in.W;
  return t;
}

Mat span_restriction(const std::vector<Vec>& states, double rank_tol) {
  if (states.empty()) return Mat(0, 0);
  const auto n = states.front().size();
  std::vector<Vec> basis;
  for (const auto& s : states) {
    if (s.size() != n) throw DimensionError("span_restriction: states differ in dimension");
    Vec r = s;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) r -= b * b.dot(r);
    }
    double nr = r.norm();
    if (nr > rank_tol * std::max(1.0, s.norm())) basis.push_back(r / nr);
  }
  Mat out(n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = basis[i];
  return out;
}

}  // namespace tlab
