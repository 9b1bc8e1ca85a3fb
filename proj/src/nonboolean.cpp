#include "transduce/nonboolean.hpp"

#include <bit>
#include <cmath>

#include "transduce/purifier.hpp"
#include "transduce/transducer.hpp"

namespace tlab {

namespace {

std::size_t pow2(std::size_t m) { return std::size_t{1} << m; }

void check_m(std::size_t m) {
  if (m < 1 || m > kMaxNbBits) throw DomainError("m must lie in [1, 3]");
}

// Diagonal on B C A W picking a value by c.
Mat c_diag(std::size_t m, std::size_t dW, cplx c0, cplx c1) {
  const std::size_t inner = pow2(m) * dW;
  const std::size_t n = pow2(m) * 2 * inner;
  Mat d = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = (i / inner) % 2;
    d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = c == 0 ? c0 : c1;
  }
  return d;
}

Mat hadamard_B(std::size_t m, std::size_t rest) {
  Mat h = Mat::Ones(1, 1);
  for (std::size_t k = 0; k < m; ++k) h = tensor({Operator(Space::flat(h.rows(), "x"), h), hadamard()}).mat();
  return tensor({Operator(Space::flat(pow2(m), "B"), h),
                 Operator::identity(Space::flat(rest, "CAW"))})
      .mat();
}

Mat T_full(std::size_t m, std::size_t dW) {
  return tensor({inner_product_transform(m), Operator::identity(Space::flat(dW, "W"))}).mat();
}

// (I_B (x) R)(O') as a block diagonal.
Mat reducer_blocks(const BooleanReducer& R, const Operator& lifted, std::size_t m) {
  const std::size_t n = lifted.dim() / pow2(m);
  const auto N = static_cast<Eigen::Index>(lifted.dim());
  const auto bn = static_cast<Eigen::Index>(n);
  Mat out = Mat::Zero(N, N);
  for (std::size_t b = 0; b < pow2(m); ++b) {
    const Operator r = R(b_block(lifted, m, b));
    if (r.dim() != n) throw DimensionError("reducer changed the oracle dimension");
    out.block(static_cast<Eigen::Index>(b) * bn, static_cast<Eigen::Index>(b) * bn, bn, bn) = r.mat();
  }
  return out;
}

}  // namespace

std::size_t parity_dot(std::size_t a, std::size_t b) {
  return static_cast<std::size_t>(std::popcount(a & b) % 2);
}

// ---- instances ----

Vec NbInstance::state() const {
  validate();
  const auto dw = static_cast<Eigen::Index>(dW());
  Vec s = Vec::Zero(static_cast<Eigen::Index>(pow2(m)) * dw);
  for (std::size_t a = 0; a < pow2(m); ++a) {
    s.segment(static_cast<Eigen::Index>(a) * dw, dw) = std::sqrt(p[a]) * phi[a];
  }
  return s;
}

std::size_t NbInstance::r() const {
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] > 0.5) return a;
  }
  throw ContractError("no label carries weight above 1/2");
}

void NbInstance::validate() const {
  check_m(m);
  if (p.size() != pow2(m) || phi.size() != pow2(m)) throw DimensionError("need 2^m weights and states");
  double total = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] < 0.0) throw DomainError("negative weight");
    total += p[a];
    if (phi[a].size() != phi.front().size()) throw DimensionError("workspace states differ in size");
    if (std::abs(phi[a].norm() - 1.0) > 1e-10) throw NormalizationError("phi_a must be unit vectors");
  }
  if (std::abs(total - 1.0) > 1e-10) throw NormalizationError("weights must sum to 1");
}

NbInstance nb_instance(std::size_t m, std::size_t dW, std::size_t r, double p_r, Rng& rng) {
  check_m(m);
  if (r >= pow2(m)) throw DomainError("r outside F_2^m");
  if (!(p_r > 0.5 && p_r <= 1.0)) throw ContractError("p_r must exceed 1/2");
  NbInstance inst;
  inst.m = m;
  inst.p.assign(pow2(m), (1.0 - p_r) / static_cast<double>(pow2(m) - 1));
  inst.p[r] = p_r;
  for (std::size_t a = 0; a < pow2(m); ++a) inst.phi.push_back(random_unit(dW, rng));
  inst.validate();
  return inst;
}

Operator nb_reflecting_oracle(const NbInstance& inst) {
  const Vec s = inst.state();
  Mat o = 2.0 * s * s.adjoint() - Mat::Identity(s.size(), s.size());
  return {Space::tensor({{"A", pow2(inst.m)}, {"W", inst.dW()}}), std::move(o)};
}

// ---- T and O' ----

Operator inner_product_transform(std::size_t m) {
  check_m(m);
  const std::size_t M = pow2(m);
  const auto n = static_cast<Eigen::Index>(M * 2 * M);
  Mat t = Mat::Zero(n, n);
  for (std::size_t b = 0; b < M; ++b) {
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t a = 0; a < M; ++a) {
        const std::size_t from = (b * 2 + c) * M + a;
        const std::size_t to = (b * 2 + (c ^ parity_dot(a, b))) * M + a;
        t(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) = 1.0;
      }
    }
  }
  return {Space::tensor({{"B", M}, {"C", 2}, {"A", M}}), std::move(t)};
}

Operator lifted_oracle(const Operator& O_ref, std::size_t m) {
  check_m(m);
  if (O_ref.dim() % pow2(m) != 0) throw DimensionError("O_ref does not act on A (x) W");
  O_ref.certify_unitary();
  const std::size_t dW = O_ref.dim() / pow2(m);
  const auto inner = static_cast<Eigen::Index>(O_ref.dim());
  // C = 0: O_ref; C = 1: -I.
  Mat mid_b = Mat::Zero(2 * inner, 2 * inner);
  mid_b.topLeftCorner(inner, inner) = O_ref.mat();
  mid_b.bottomRightCorner(inner, inner) = -Mat::Identity(inner, inner);
  const Mat mid = tensor({Operator::identity(Space::flat(pow2(m), "B")),
                          Operator(Space::flat(static_cast<std::size_t>(2 * inner), "CAW"), mid_b)})
                      .mat();
  const Mat t = T_full(m, dW);
  return {Space::tensor({{"B", pow2(m)}, {"C", 2}, {"A", pow2(m)}, {"W", dW}}), t * mid * t};
}

Operator b_block(const Operator& op, std::size_t m, std::size_t b) {
  if (b >= pow2(m) || op.dim() % pow2(m) != 0) throw DimensionError("no such B block");
  const std::size_t n = op.dim() / pow2(m);
  const auto bn = static_cast<Eigen::Index>(n);
  const auto off = static_cast<Eigen::Index>(b) * bn;
  return {Space::flat(n, "CAW"), op.mat().block(off, off, bn, bn)};
}

double off_block_mass(const Operator& op, std::size_t m) {
  const auto bn = static_cast<Eigen::Index>(op.dim() / pow2(m));
  Mat rest = op.mat();
  for (std::size_t b = 0; b < pow2(m); ++b) {
    rest.block(static_cast<Eigen::Index>(b) * bn, static_cast<Eigen::Index>(b) * bn, bn, bn).setZero();
  }
  return rest.norm();
}

double lifted_bias(const NbInstance& inst, std::size_t b) {
  double s = 0.0;
  for (std::size_t a = 0; a < inst.p.size(); ++a) {
    if (parity_dot(a, b) == 1) s += inst.p[a];
  }
  return s;
}

Vec lifted_state(const NbInstance& inst, std::size_t b) {
  inst.validate();
  const std::size_t M = pow2(inst.m);
  const auto dw = static_cast<Eigen::Index>(inst.dW());
  Vec s = Vec::Zero(static_cast<Eigen::Index>(2 * M) * dw);
  for (std::size_t a = 0; a < M; ++a) {
    const std::size_t c = parity_dot(a, b);
    s.segment(static_cast<Eigen::Index>(c * M + a) * dw, dw) = std::sqrt(inst.p[a]) * inst.phi[a];
  }
  return s;
}

// ---- the wrapper ----

BooleanReducer qsp_reducer(const PhaseSequence& alpha) {
  return [alpha](const Operator& O) {
    Mat u = qsp_assemble(alpha, O).mat();
    const auto h = static_cast<Eigen::Index>(O.dim() / 2);
    u.bottomRows(h) *= -1.0;
    return Operator(O.space(), std::move(u));
  };
}

Operator bv_error_reduction(const BooleanReducer& R, const Operator& O_ref, std::size_t m) {
  const Operator lifted = lifted_oracle(O_ref, m);
  if (off_block_mass(lifted, m) > 1e-12) throw StructureError("lifted oracle is not block diagonal over B");
  const std::size_t dW = O_ref.dim() / pow2(m);
  const Mat h = hadamard_B(m, 2 * pow2(m) * dW);
  const Mat t = T_full(m, dW);
  return {lifted.space(), h * t * reducer_blocks(R, lifted, m) * t * h};
}

QueryAlgorithm bv_qsp_algorithm(const PhaseSequence& alpha, std::size_t m, std::size_t dW) {
  check_m(m);
  if (alpha.alpha.empty()) throw StructureError("empty phase sequence");
  const std::size_t M = pow2(m);
  const Mat h = hadamard_B(m, 2 * M * dW);
  const Mat t = T_full(m, dW);
  const Mat z = c_diag(m, dW, 1.0, -1.0);
  auto D = [&](cplx a) { return c_diag(m, dW, a, -std::conj(a)); };
  const std::size_t k = alpha.k();
  std::vector<Step> steps;
  // Between queries: T Z_C ... Z_C T; the last layer also carries the final
  // Z_C of the reducer, T and H^m.
  if (k == 0) {
    steps.emplace_back(Mat(h * t * z * D(alpha.alpha[0]) * t * h));
  } else {
    steps.emplace_back(Mat(z * t * D(alpha.alpha[0]) * t * h));
    for (std::size_t j = 1; j < k; ++j) steps.emplace_back(Mat(z * t * D(alpha.alpha[j]) * t));
    steps.emplace_back(Mat(h * t * z * D(alpha.alpha[k]) * t));
  }
  BulletSplit split{M, M * dW, {}};
  for (std::size_t b = 0; b < M; ++b) {
    for (std::size_t aw = 0; aw < M * dW; ++aw) split.index.push_back((b * 2) * M * dW + aw);
  }
  return QueryAlgorithm(Space::tensor({{"B", M}, {"C", 2}, {"A", M}, {"W", dW}}), std::move(steps),
                        std::move(split));
}

NbRun simulate_nb(const BooleanReducer& R, const NbInstance& inst) {
  inst.validate();
  NbRun run_nb;
  run_nb.r = inst.r();
  const std::size_t M = pow2(inst.m);
  const Operator O_ref = nb_reflecting_oracle(inst);
  const Operator lifted = lifted_oracle(O_ref, inst.m);
  const std::size_t dW = inst.dW();
  const auto inner = static_cast<Eigen::Index>(M * dW);
  const auto block = 2 * inner;
  const auto N = static_cast<Eigen::Index>(lifted.dim());
  const Vec phi = inst.state();

  const Mat blocks = reducer_blocks(R, lifted, inst.m);
  const Mat h = hadamard_B(inst.m, 2 * M * dW);
  const Mat t = T_full(inst.m, dW);

  Vec in = Vec::Zero(N);
  in.head(inner) = phi;
  const Vec out = h * t * blocks * t * h * in;
  Vec ideal = Vec::Zero(N);
  ideal.segment(static_cast<Eigen::Index>(run_nb.r) * block, inner) = phi;
  run_nb.fidelity = std::norm(ideal.dot(out));
  run_nb.prob_r = out.segment(static_cast<Eigen::Index>(run_nb.r) * block, block).squaredNorm();
  run_nb.imprecision = (out - ideal).norm();

  Vec psi(N), want(N);
  const double s = 1.0 / std::sqrt(static_cast<double>(M));
  for (std::size_t b = 0; b < M; ++b) {
    const Vec pb = s * lifted_state(inst, b);
    psi.segment(static_cast<Eigen::Index>(b) * block, block) = pb;
    want.segment(static_cast<Eigen::Index>(b) * block, block) =
        parity_dot(run_nb.r, b) == 1 ? Vec(-pb) : pb;
  }
  run_nb.inner_imprecision = (blocks * psi - want).norm();
  return run_nb;
}

NbAccounting nb_accounting(const NbInstance& inst, std::size_t D) {
  inst.validate();
  NbAccounting acc;
  const std::size_t M = pow2(inst.m);
  acc.bound = 1.0 / (2.0 * inst.delta());
  const Operator lifted = lifted_oracle(nb_reflecting_oracle(inst), inst.m);
  const Transducer T = build_general(D, M * inst.dW());
  for (std::size_t b = 0; b < M; ++b) {
    acc.p_prime.push_back(lifted_bias(inst, b));
    const StateVector xi(T.public_space(), lifted_state(inst, b));
    const Complexities c = complexities(T, b_block(lifted, inst.m, b), xi);
    acc.L_b.push_back(c.L);
    acc.L += c.L / static_cast<double>(M);
  }
  return acc;
}

}  // namespace tlab
