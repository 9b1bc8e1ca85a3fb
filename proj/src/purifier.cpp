#include "transduce/purifier.hpp"

#include <cmath>
#include <sstream>

namespace tlab {

void check_depth(std::size_t D) {
  if (D < 4) throw DomainError("truncation depth must be at least 4, got " + std::to_string(D));
}

namespace {

void check_gap(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p outside [0,1]");
  if (p == 0.5) throw DomainError("p = 1/2 has no gap; the purifier contract is empty");
}

Operator relabel(const Space& s, const Operator& op) { return {s, op.mat()}; }

Space general_space(std::size_t D, std::size_t dW) {
  return Space::tensor({{"J", D}, {"A", 2}, {"W", dW}});
}

// Monomial steps on J (x) A (x) W.
Permutation shift_on_answer(std::size_t D, std::size_t dW, std::size_t answer, bool up) {
  const std::size_t n = D * 2 * dW;
  Permutation p = Permutation::identity(n);
  for (std::size_t j = 0; j < D; ++j) {
    std::size_t jj = up ? (j + 1) % D : (j + D - 1) % D;
    for (std::size_t w = 0; w < dW; ++w) {
      p.target[(j * 2 + answer) * dW + w] = (jj * 2 + answer) * dW + w;
    }
  }
  return p;
}

Permutation phase_off_origin(std::size_t D, std::size_t dW) {
  const std::size_t n = D * 2 * dW;
  Permutation p = Permutation::identity(n);
  for (std::size_t i = 2 * dW; i < n; ++i) p.phase[i] = -1.0;
  return p;
}

}  // namespace

// ---- circuits ----

Operator Reflection::dense(const Space& space) const {
  Operator m = Operator::identity(space);
  for (const auto& g : gates) m = g.op * m;
  return m;
}

GateAudit audit(const std::vector<Reflection>& rs) {
  GateAudit a;
  for (const auto& r : rs) {
    for (const auto& g : r.gates) {
      switch (g.kind) {
        case GateKind::Increment: ++a.increments; break;
        case GateKind::Decrement: ++a.decrements; break;
        case GateKind::Oracle: ++a.oracle_calls; break;
        case GateKind::Phase: break;
      }
    }
  }
  return a;
}

std::vector<Reflection> simple_circuit(std::size_t D, const Operator& O) {
  check_depth(D);
  if (D % 2 != 0) throw DomainError("the K (x) A circuit needs an even depth");
  if (O.dim() != 2) throw DimensionError("simple purifier oracle must be 2x2");
  const Space N = Space::tensor({{"K", D / 2}, {"A", 2}});
  const std::size_t A[] = {1};
  const std::size_t K[] = {0};
  const std::size_t all[] = {0, 1};
  Operator inc = embed(N, relabel(N, increment_mod(D)), all);
  Operator dec = embed(N, relabel(N, decrement_mod(D)), all);

  Reflection r1;
  r1.gates.push_back({GateKind::Oracle, "O on A", embed(N, O, A)});
  Reflection r2;
  r2.gates.push_back({GateKind::Increment, "+1 on N", inc});
  r2.gates.push_back({GateKind::Oracle, "O on A | K!=0",
                      controlled(N, O, A, K, [](const BasisLabel& l) { return l.digits[0] != 0; })});
  r2.gates.push_back({GateKind::Decrement, "-1 on N", dec});
  return {r1, r2};
}

std::vector<Reflection> general_circuit(std::size_t D, const Operator& O_ref) {
  check_depth(D);
  if (O_ref.dim() % 2 != 0) throw DimensionError("oracle must act on A (x) W");
  const std::size_t dW = O_ref.dim() / 2;
  const Space S = general_space(D, dW);
  const std::size_t J[] = {0};
  const std::size_t A[] = {1};
  const std::size_t AW[] = {1, 2};
  auto on_answer = [](std::size_t a) {
    return [a](const BasisLabel& l) { return l.digits[1] == a; };
  };
  auto off_origin = [](const BasisLabel& l) { return l.digits[0] != 0; };
  Operator inc = increment_mod(D), dec = decrement_mod(D);
  Operator neg = O_ref * cplx(-1.0);

  Reflection r1;
  r1.gates.push_back({GateKind::Increment, "+1 on J | A=0", controlled(S, inc, J, A, on_answer(0))});
  r1.gates.push_back({GateKind::Oracle, "O_ref on AW | J!=0", controlled(S, O_ref, AW, J, off_origin)});
  r1.gates.push_back({GateKind::Decrement, "-1 on J | A=0", controlled(S, dec, J, A, on_answer(0))});
  Reflection r2;
  r2.gates.push_back({GateKind::Increment, "+1 on J | A=1", controlled(S, inc, J, A, on_answer(1))});
  r2.gates.push_back({GateKind::Oracle, "-O_ref on AW | J!=0", controlled(S, neg, AW, J, off_origin)});
  r2.gates.push_back({GateKind::Decrement, "-1 on J | A=1", controlled(S, dec, J, A, on_answer(1))});
  return {r1, r2};
}

namespace {

// O on every pair (a, a+1) with a = start, start+2, ... inside 0..D-1.
Operator pair_reflection(std::size_t D, const Operator& O, std::size_t start) {
  const auto n = static_cast<Eigen::Index>(D);
  Mat m = Mat::Identity(n, n);
  for (std::size_t a = start; a + 1 < D; a += 2) {
    m.block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a), 2, 2) = O.mat();
  }
  return {Space::flat(D, "N"), std::move(m)};
}

}  // namespace

ReflectionPair simple_reflections(std::size_t D, const Operator& O) {
  check_depth(D);
  if (O.dim() != 2) throw DimensionError("simple purifier oracle must be 2x2");
  if (D % 2 == 0) {
    auto rs = simple_circuit(D, O);
    const Space N = Space::tensor({{"K", D / 2}, {"A", 2}});
    const Space flat = Space::flat(D, "N");
    return {relabel(flat, rs[0].dense(N)), relabel(flat, rs[1].dense(N))};
  }
  return {pair_reflection(D, O, 0), pair_reflection(D, O, 1)};
}

ReflectionPair general_reflections(std::size_t D, const Operator& O_ref) {
  auto rs = general_circuit(D, O_ref);
  const Space S = general_space(D, O_ref.dim() / 2);
  return {rs[0].dense(S), rs[1].dense(S)};
}

// ---- transducers ----

Transducer build_simple(std::size_t D) {
  check_depth(D);
  // Position of |j>|s>: 2j + s, s = 1 is the scratch copy the oracle reads.
  const std::size_t n = 2 * D;
  const std::size_t pairs = D / 2;
  Permutation first = Permutation::identity(n);
  for (std::size_t j = 0; j < 2 * pairs; ++j) {
    first.target[2 * j] = 2 * j + 1;
    first.target[2 * j + 1] = 2 * j;
  }
  Permutation second = Permutation::identity(n);
  for (std::size_t i = 1; 2 * i < D; ++i) {
    // Pair (2i-1, 2i) goes to scratch slots (2i-2, 2i-1).
    for (std::size_t b = 0; b < 2; ++b) {
      std::size_t from = 2 * (2 * i - 1 + b);
      std::size_t to = 2 * (2 * i - 2 + b) + 1;
      second.target[from] = to;
      second.target[to] = from;
    }
  }
  BulletSplit split{pairs, 2, std::vector<std::size_t>(2 * pairs)};
  for (std::size_t u = 0; u < pairs; ++u) {
    for (std::size_t m = 0; m < 2; ++m) split.index[u * 2 + m] = 2 * (2 * u + m) + 1;
  }
  std::vector<Step> steps{first, first.then(second), second};
  QueryAlgorithm alg(Space::tensor({{"N", D}, {"S", 2}}), std::move(steps), std::move(split));
  std::vector<std::size_t> h{0}, l;
  for (std::size_t j = 1; j < D; ++j) l.push_back(2 * j);
  return Transducer::from_algorithm(std::move(alg), std::move(h), std::move(l));
}

Transducer build_general(std::size_t D, std::size_t dW) {
  check_depth(D);
  if (dW == 0) throw DomainError("workspace dimension must be positive");
  const std::size_t block = 2 * dW;
  Permutation inc0 = shift_on_answer(D, dW, 0, true);
  Permutation dec0 = shift_on_answer(D, dW, 0, false);
  Permutation inc1 = shift_on_answer(D, dW, 1, true);
  Permutation dec1 = shift_on_answer(D, dW, 1, false);
  std::vector<Step> steps{inc0, dec0.then(inc1), phase_off_origin(D, dW).then(dec1)};
  BulletSplit split = BulletSplit::contiguous(block, D - 1, block);
  QueryAlgorithm alg(general_space(D, dW), std::move(steps), std::move(split));
  return Transducer::from_algorithm(std::move(alg), block, (D - 1) * block);
}

StateVector analytic_catalyst(double p, std::size_t D) {
  check_gap(p);
  if (D < 2) throw DomainError("depth must be at least 2");
  const Space L = Space::flat(D - 1, "L");
  Vec v = Vec::Zero(static_cast<Eigen::Index>(D - 1));
  if (p < 0.5) {
    const double g = std::sqrt(p / (1.0 - p));
    double x = 1.0;
    for (std::size_t j = 1; j < D; ++j) v(static_cast<Eigen::Index>(j - 1)) = (x *= g);
  } else if (p < 1.0) {
    const double g = -std::sqrt((1.0 - p) / p);
    double x = 1.0;
    for (std::size_t j = 1; j < D; ++j) v(static_cast<Eigen::Index>(j - 1)) = (x *= g);
  }
  return {L, std::move(v)};
}

Mat sector_basis(const OracleSpec& spec, std::size_t D, int s) {
  spec.validate();
  if (s != 0 && s != 1) throw DomainError("sector index must be 0 or 1");
  const std::size_t dW = spec.dW();
  const auto n = static_cast<Eigen::Index>(D * 2 * dW);
  Mat b = Mat::Zero(n, static_cast<Eigen::Index>(D));
  static const int sign0[4] = {1, 1, -1, -1};
  static const int sign1[4] = {1, -1, -1, 1};
  for (std::size_t j = 0; j < D; ++j) {
    const std::size_t a = s == 0 ? j % 2 : 1 - j % 2;
    const double sg = s == 0 ? sign0[j % 4] : sign1[j % 4];
    const Vec& phi = a == 0 ? spec.phi0 : spec.phi1;
    for (std::size_t w = 0; w < dW; ++w) {
      b(static_cast<Eigen::Index>((j * 2 + a) * dW + w), static_cast<Eigen::Index>(j)) =
          sg * phi(static_cast<Eigen::Index>(w));
    }
  }
  return b;
}

double truncated_query_sum(double p, std::size_t D) {
  check_gap(p);
  const double g = p < 0.5 ? p / (1.0 - p) : (1.0 - p) / p;
  double a = 0.0, b = 0.0, x = 1.0;
  for (std::size_t j = 0; j < D; ++j) {
    a += x;
    if (j >= 1 && j + 2 <= D) b += x;
    x *= g;
  }
  return a + b;
}

TransductionReport verify_transduction(double p, std::size_t D, double tol) {
  check_gap(p);
  TransductionReport rep;
  rep.p = p;
  rep.D = D;
  rep.r = p > 0.5 ? 1 : 0;
  const double delta = std::abs(0.5 - p);
  rep.half_inverse_delta = 1.0 / (2.0 * delta);
  Transducer T = build_simple(D);
  Operator O = simple_oracle(p);
  const StateVector xi = StateVector::basis(T.public_space(), 0);
  if (rep.r == 0) {
    Complexities c = complexities(T, O, xi, tol);
    rep.tau_error = std::abs(c.result.tau[0] - cplx(1.0));
    rep.residual = c.result.residual;
    rep.L = c.L;
    rep.W = c.W;
    return rep;
  }
  // p > 1/2: the exact fixed point of the truncated walk belongs to the other
  // branch, so the claim is a perturbed transduction with the analytic catalyst.
  const Vec v = analytic_catalyst(p, D).amp();
  const auto& alg = T.algorithm();
  const Vec in = T.embed(xi.amp(), v);
  QueryTrace tr = trace(alg, O, StateVector(alg.space(), in));
  const Vec want = T.embed(-xi.amp(), v);
  const Vec out = tr.final_state.amp();
  rep.tau_error = (out - want).norm();
  rep.residual = rep.tau_error;
  rep.L = tr.L;
  rep.W = v.squaredNorm();
  rep.derived_bound = 2.0 * std::pow((1.0 - p) / p, 0.5 * static_cast<double>(D - 1));
  rep.stated_bound = 2.0 * std::pow(1.0 - delta, static_cast<double>(D - 1));
  return rep;
}

std::optional<double> prop_trunc1_difference(double p, std::size_t K, std::size_t D_small,
                                             std::size_t D_big) {
  if (D_small <= 2 * K || D_big <= D_small) return std::nullopt;
  Operator O = simple_oracle(p);
  const StateVector xi = StateVector::basis(Space::flat(1, "H"), 0);
  ActionResult a = implement_action(build_simple(D_small), O, xi, K);
  ActionResult b = implement_action(build_simple(D_big), O, xi, K);
  return std::max(a.tau_prime.distance(b.tau_prime), std::abs(a.garbage - b.garbage));
}

std::optional<bool> prop_trunc1_check(double p, std::size_t K, std::size_t D_small,
                                      std::size_t D_big) {
  auto d = prop_trunc1_difference(p, K, D_small, D_big);
  if (!d) return std::nullopt;
  return *d <= 1e-12;
}

// ---- state-generating accounting ----

namespace {

// O_ref = O Ref O^dagger over the slot O (+) O^dagger. The input enters in
// the O block, moves to the O^dagger block for the first query, and is
// reflected and moved back for the second.
QueryAlgorithm reflecting_oracle_algorithm(std::size_t dW) {
  const std::size_t b = 2 * dW;
  const auto B = static_cast<Eigen::Index>(b);
  const Space s = Space::tensor({{"slot", 2}, {"A", 2}, {"W", dW}});
  Mat swap = Mat::Zero(2 * B, 2 * B);
  swap.topRightCorner(B, B) = Mat::Identity(B, B);
  swap.bottomLeftCorner(B, B) = Mat::Identity(B, B);
  Mat ref = Mat::Identity(2 * B, 2 * B);
  ref(B, B) = 1.0;
  for (Eigen::Index i = B + 1; i < 2 * B; ++i) ref(i, i) = -1.0;
  std::vector<Step> steps{swap, Mat(swap * ref), Mat(Mat::Identity(2 * B, 2 * B))};
  return QueryAlgorithm(s, std::move(steps), BulletSplit::contiguous(0, 1, 2 * b));
}

}  // namespace

StateGeneratingReport state_generating_accounting(double p, std::size_t K, std::size_t D) {
  check_gap(p);
  StateGeneratingReport rep;
  rep.p = p;
  rep.r = p > 0.5 ? 1 : 0;
  rep.K = K;
  rep.L_expected = 1.0 + 1.0 / (2.0 * std::abs(0.5 - p));

  const OracleSpec spec = OracleSpec::simple(p);
  const Operator O = state_generating_oracle(spec);
  const Operator O_ref = reflecting_from_generator(O);
  const Transducer Sp = build_general(D, 1);
  const TransductionSolver inner(Sp, O_ref);
  const Vec e0 = Vec::Unit(2, 0);
  const double s = 1.0 / std::sqrt(2.0);

  // Outer algorithm on C (x) A (x) W: H_C, O|C=1, U'|C=1, O^dagger|C=1, H_C.
  // Only the C = 1 branch is queried.
  Vec b1 = s * e0;                      // fed to O
  Vec b2 = O.mat() * b1;                // fed to U'
  Vec u = inner.solve(StateVector(Sp.public_space(), b2)).tau.amp();
  Vec b3 = u;                           // fed to O^dagger
  Vec q0(4);
  q0 << b1, b3;
  rep.L_direct = q0.squaredNorm();

  const QueryAlgorithm aref = reflecting_oracle_algorithm(1);
  const Operator slot = bidirectional(O);
  auto ref_complexity = [&](const Vec& x) {
    InnerComplexity c;
    const auto m = static_cast<Eigen::Index>(2);
    for (Eigen::Index e = 0; e < x.size() / m; ++e) {
      Vec in = Vec::Zero(4);
      in.head(2) = x.segment(e * m, m);
      c.L += trace(aref, slot, StateVector(aref.space(), in)).L;
    }
    c.W = c.L;  // algorithm-as-transducer
    return c;
  };
  auto purifier_complexity = [&](const Vec& x) {
    Complexities c = complexities(Sp, O_ref, StateVector(Sp.public_space(), x));
    CompositionTotals t =
        functional_accounting(Vec::Zero(0), c.q.amp(), c.W, ref_complexity);
    return InnerComplexity{t.L_total, t.W_total};
  };
  InnerComplexity in = purifier_complexity(b2);
  rep.L_inner = in.L;
  rep.W_inner = in.W;
  CompositionTotals total =
      functional_accounting(q0, b2, q0.squaredNorm() + b2.squaredNorm(),
                            [&](const Vec&) { return in; });
  rep.L_total = total.L_total;

  if (K > 0) {
    TransductionResult tr = inner.solve(StateVector(Sp.public_space(), b2));
    ActionResult act = implement_action(inner.action(), Sp.dim_H(), StateVector(Sp.public_space(), b2), K);
    Vec branch1 = O.mat().adjoint() * act.tau_prime.amp();
    Vec branch0 = s * e0;
    Vec out0 = s * (branch0 + branch1);
    Vec out1 = s * (branch0 - branch1);
    Vec ideal0 = rep.r == 0 ? e0 : Vec(Vec::Zero(2));
    Vec ideal1 = rep.r == 1 ? e0 : Vec(Vec::Zero(2));
    double err2 = (out0 - ideal0).squaredNorm() + (out1 - ideal1).squaredNorm() +
                  act.garbage * act.garbage;
    rep.output_error = std::sqrt(err2);
    rep.error_budget = 2.0 * std::sqrt(tr.W / static_cast<double>(K));
  }
  return rep;
}

}  // namespace tlab
