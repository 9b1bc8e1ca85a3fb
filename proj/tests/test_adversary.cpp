#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "transduce/adversary.hpp"
#include "transduce/error.hpp"
#include "transduce/purifier.hpp"

using namespace tlab;

TEST_CASE("trivial problem is feasible with zero objective") {
  StateConversionProblem pr;
  Rng rng(1);
  for (int x = 0; x < 3; ++x) {
    pr.oracles.emplace_back(Space::flat(2), random_unitary(2, rng));
    const Vec s = random_unit(3, rng);
    pr.xi.push_back(s);
    pr.tau.push_back(s);
  }
  AdversaryCandidate c;
  c.dim_up = 1;
  c.dim_m = 2;
  c.v.assign(3, Vec::Zero(2));
  const FeasibilityReport r = check_feasible(pr, c);
  CHECK(r.feasible);
  CHECK(r.objective == 0.0);
  CHECK(check_feasible(StateConversionProblem{}, AdversaryCandidate{}).feasible);
}

TEST_CASE("two-oracle bound") {
  CHECK(std::abs(two_oracle_bound(0.25) - 2.0) < 1e-12);
  CHECK(std::abs(two_oracle_bound(0.5) - 1.0) < 1e-12);
  CHECK(std::abs(two_oracle_bound(0.05) - 10.0) < 1e-10);
  CHECK_THROWS_AS(two_oracle_bound(0.0), DomainError);
}

TEST_CASE("purifier candidate meets the lower bound") {
  const Transducer T = build_simple(64);
  for (double delta : {0.25, 0.3, 0.4}) {
    const StateConversionProblem pr = two_oracle_problem(delta);
    const AdversaryCandidate c = transducer_to_candidate(T, pr);
    const FeasibilityReport r = check_feasible(pr, c);
    CHECK(r.feasible);
    CHECK(std::abs(r.objective - 1.0 / (2.0 * delta)) < 1e-6);
    CHECK_FALSE(check_feasible(pr, c.scaled(0.9)).feasible);
    // |<xi0,xi1> - <tau0,tau1>| = 2 against ||v0|| ||v1|| 2 (2 delta)
    const double chain = c.v[0].norm() * c.v[1].norm() * 2.0 * (2.0 * delta);
    CHECK(std::abs(chain - 2.0) < 1e-6);

    const AdversaryCandidate small = transducer_to_candidate(T, pr, true);
    CHECK(small.dim_up == 1);
    CHECK(check_feasible(pr, small).feasible);
    CHECK(std::abs(check_feasible(pr, small).objective - r.objective) < 1e-10);
  }
}

TEST_CASE("an exact one-query algorithm gives a feasible candidate") {
  // Query O_x on C^2 directly; xi_x = |0>, tau_x = O_x|0>.
  StateConversionProblem pr;
  Rng rng(3);
  for (int x = 0; x < 3; ++x) {
    pr.oracles.emplace_back(Space::flat(2), random_unitary(2, rng));
    pr.xi.push_back(Vec::Unit(2, 0));
    pr.tau.push_back(pr.oracles.back().mat().col(0));
  }
  std::vector<Step> steps{Mat(Mat::Identity(2, 2)), Mat(Mat::Identity(2, 2))};
  QueryAlgorithm alg(Space::flat(2), std::move(steps), BulletSplit::contiguous(0, 1, 2));
  const Transducer T = Transducer::from_algorithm(std::move(alg), 2, 0);
  const FeasibilityReport r = check_feasible(pr, transducer_to_candidate(T, pr));
  CHECK(r.feasible);
  CHECK(std::abs(r.objective - 1.0) < 1e-12);
}

TEST_CASE("canonical transducer from a feasible candidate") {
  const StateConversionProblem pr = two_oracle_problem(0.25);
  const AdversaryCandidate c = transducer_to_candidate(build_simple(64), pr, true);
  const Transducer C = canonical_transducer(pr, c);
  CHECK(canonical_check(C));
  for (std::size_t x = 0; x < 2; ++x) {
    const TransductionResult r = transduce(C, pr.oracles[x], StateVector(C.public_space(), pr.xi[x]));
    CHECK((r.tau.amp() - pr.tau[x]).norm() < 1e-8);
  }
  CHECK_THROWS_AS(canonical_transducer(pr, c.scaled(0.9)), StructureError);
}
