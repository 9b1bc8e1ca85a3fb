#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "transduce/adversary.hpp"
#include "transduce/error.hpp"
#include "transduce/purifier.hpp"
#include "transduce/transducer.hpp"

using namespace tlab;
using tlab::test::random_algorithm;

namespace {

// Sum_{j=1}^{D-1} gamma^j |j>, computed directly.
Vec geometric_catalyst(double p, std::size_t D) {
  const double g = std::sqrt(p / (1.0 - p));
  Vec v = Vec::Zero(static_cast<Eigen::Index>(D - 1));
  double c = 1.0;
  for (std::size_t j = 1; j < D; ++j) {
    c *= g;
    v(static_cast<Eigen::Index>(j - 1)) = c;
  }
  return v;
}

}  // namespace

TEST_CASE("empty private space: the transducer is the algorithm") {
  Rng rng(1);
  const QueryAlgorithm alg = random_algorithm(4, 1, 0, 2, 2, rng);
  const Operator O(Space::flat(2), random_unitary(2, rng));
  const Transducer T = Transducer::from_algorithm(alg, 4, 0);
  const StateVector xi(T.public_space(), random_unit(4, rng));
  const TransductionResult r = transduce(T, O, xi);
  CHECK(r.W == 0.0);
  CHECK((r.tau.amp() - run(alg, O, StateVector(alg.space(), xi.amp())).amp()).norm() < 1e-12);
  const ActionResult a = implement_action(T, O, xi, 1);
  CHECK(a.tau_prime.distance(r.tau) < 1e-12);
}

TEST_CASE("simple purifier: catalyst and complexities") {
  const Transducer T = build_simple(64);
  const StateVector xi = StateVector::basis(T.public_space(), 0);
  const TransductionResult r = transduce(T, simple_oracle(0.25), xi);
  CHECK(r.tau.distance(xi) < 1e-9);
  CHECK((r.v.amp() - geometric_catalyst(0.25, 64)).norm() < 1e-9);
  CHECK(std::abs(r.W - 0.5) < 1e-9);
  CHECK(r.residual < 1e-9);
  CHECK(std::abs(complexities(T, simple_oracle(0.25), xi).L - 2.0) < 1e-9);

  const TransductionResult r75 = transduce(T, simple_oracle(0.75), xi);
  CHECK((r75.tau + xi).norm() < 1e-9);
  CHECK(std::abs(complexities(T, simple_oracle(0.75), xi).L - 2.0) < 1e-9);
}

TEST_CASE("general purifier L = 1/(2 delta)") {
  Rng rng(8);
  const OracleSpec s = OracleSpec::random(0.25, 2, rng);
  const Transducer T = build_general(64, 2);
  const Complexities c = complexities(T, general_reflecting_oracle(s), s.target());
  CHECK(std::abs(c.L - 2.0) < 1e-8);
  CHECK((c.result.tau.amp() - s.target().amp()).norm() < 1e-9);
}

TEST_CASE("implement_action within 2 sqrt(W/K)") {
  const Transducer T = build_simple(64);
  const StateVector xi = StateVector::basis(T.public_space(), 0);
  double prev = 1.0;
  for (std::size_t K : {200u, 800u}) {
    const ActionResult a = implement_action(T, simple_oracle(0.25), xi, K);
    const double err = a.tau_prime.distance(xi);
    CHECK(err <= 2.0 * std::sqrt(0.5 / static_cast<double>(K)));
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("isometry and catalyst linearity on random transducers") {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    const QueryAlgorithm alg = random_algorithm(10, 2, 4, 3, 2, rng);
    const Transducer T = Transducer::from_algorithm(alg, 3, 7);
    const Operator O(Space::flat(2), random_unitary(2, rng));
    Mat q = random_unitary(3, rng);
    const StateVector x1(T.public_space(), q.col(0)), x2(T.public_space(), q.col(1));
    const TransductionResult r1 = transduce(T, O, x1), r2 = transduce(T, O, x2);
    CHECK(std::abs(r1.tau.inner(r2.tau)) < 1e-8);
    CHECK(std::abs(r1.tau.norm() - 1.0) < 1e-8);
    const cplx a(0.6, 0.2), b(-0.3, 0.7);
    const TransductionResult r12 = transduce(T, O, x1 * a + x2 * b);
    CHECK((r12.v.amp() - (a * r1.v.amp() + b * r2.v.amp())).norm() < 1e-8);
  }
}

TEST_CASE("canonical_check") {
  CHECK_FALSE(canonical_check(build_simple(8)));
  Rng rng(3);
  std::vector<Step> steps{Mat(Mat::Identity(4, 4)), Mat(random_unitary(4, rng))};
  QueryAlgorithm alg(Space::flat(4), std::move(steps), BulletSplit::contiguous(2, 1, 2));
  CHECK(canonical_check(Transducer::from_algorithm(std::move(alg), 2, 2)));
  const StateConversionProblem pr = two_oracle_problem(0.25);
  const Transducer C = canonical_transducer(pr, transducer_to_candidate(build_simple(64), pr));
  CHECK(canonical_check(C));
}

TEST_CASE("parallel composition adds complexities") {
  const Transducer T = build_simple(64);
  const Transducer P = parallel_compose({T, T});
  const Operator O = direct_sum({simple_oracle(0.25), simple_oracle(0.75)});
  const Vec xi = tlab::test::real_vec({std::sqrt(0.5), std::sqrt(0.5)});
  const Complexities c = complexities(P, O, StateVector(P.public_space(), xi));
  const StateVector e0 = StateVector::basis(T.public_space(), 0);
  const double W1 = transduce(T, simple_oracle(0.25), e0).W;
  const double W2 = transduce(T, simple_oracle(0.75), e0).W;
  CHECK(std::abs(c.W - 0.5 * (W1 + W2)) < 1e-8);
  CHECK(std::abs(c.result.tau[0] - std::sqrt(0.5)) < 1e-9);
  CHECK(std::abs(c.result.tau[1] + std::sqrt(0.5)) < 1e-9);

  const Transducer single = parallel_compose({T});
  CHECK(single.dim_L() == T.dim_L());
  CHECK((single.action_matrix(simple_oracle(0.3)).mat() - T.action_matrix(simple_oracle(0.3)).mat()).norm() < 1e-12);

  Rng rng(5);
  const Operator A(Space::flat(2), random_unitary(2, rng)), B(Space::flat(3), random_unitary(3, rng));
  const Transducer S = parallel_compose({Transducer::from_unitary(A, 2), Transducer::from_unitary(B, 3)});
  CHECK((S.action_matrix(Operator()).mat() - direct_sum({A, B}).mat()).norm() < 1e-12);
}

TEST_CASE("functional accounting") {
  const Vec direct = tlab::test::real_vec({std::sqrt(0.5), std::sqrt(0.5)});
  const auto t0 = functional_accounting(direct, Vec::Zero(2), 0.0, [](const Vec&) { return InnerComplexity{9, 9}; });
  CHECK(std::abs(t0.L_total - 1.0) < 1e-15);
  const auto t1 = functional_accounting(direct, direct, 0.0, [](const Vec& v) {
    return InnerComplexity{2.0 * v.squaredNorm(), 0.5 * v.squaredNorm()};
  });
  CHECK(std::abs(t1.L_total - 3.0) < 1e-15);
}

TEST_CASE("span_restriction") {
  Rng rng(6);
  const Vec a = random_unit(5, rng);
  CHECK(span_restriction({a, 2.0 * a}).cols() == 1);
  CHECK(span_restriction({}).cols() == 0);
  const Vec b = random_unit(5, rng);
  const Mat B = span_restriction({a, b, a + b});
  CHECK(B.cols() == 2);
  CHECK((B.adjoint() * B - Mat::Identity(2, 2)).norm() < 1e-12);
}
