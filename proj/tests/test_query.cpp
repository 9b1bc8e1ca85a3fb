#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "transduce/error.hpp"
#include "transduce/oracles.hpp"
#include "transduce/purifier.hpp"
#include "transduce/query.hpp"

using namespace tlab;
using tlab::test::random_algorithm;

namespace {

QueryAlgorithm bare_query() {
  std::vector<Step> steps{Mat(Mat::Identity(2, 2)), Mat(Mat::Identity(2, 2))};
  return QueryAlgorithm(Space::flat(2), std::move(steps), BulletSplit::contiguous(0, 1, 2));
}

}  // namespace

TEST_CASE("run: trivial algorithms") {
  const Space s = Space::flat(3);
  std::vector<Step> id{Mat(Mat::Identity(3, 3))};
  const QueryAlgorithm a0(s, std::move(id), BulletSplit::contiguous(0, 0, 1));
  Rng rng(1);
  const StateVector xi(s, random_unit(3, rng));
  CHECK(run(a0, Operator::identity(Space::flat(1)), xi).distance(xi) < 1e-15);

  const QueryAlgorithm bq = bare_query();
  const Operator O = simple_oracle(0.3);
  const StateVector x2(Space::flat(2), random_unit(2, rng));
  CHECK((run(bq, O, x2).amp() - O.mat() * x2.amp()).norm() < 1e-15);
}

TEST_CASE("trace: L for bare and idle queries") {
  const QueryAlgorithm bq = bare_query();
  Rng rng(2);
  const StateVector xi(Space::flat(2), random_unit(2, rng));
  CHECK(std::abs(trace(bq, simple_oracle(0.2), xi).L - 1.0) < 1e-14);

  // H. at position 2 of C^3; xi supported on positions 0, 1 with U = I.
  std::vector<Step> steps{Mat(Mat::Identity(3, 3)), Mat(Mat::Identity(3, 3))};
  const QueryAlgorithm idle(Space::flat(3), std::move(steps), BulletSplit::contiguous(2, 1, 1));
  Vec v = Vec::Zero(3);
  v.head(2) = random_unit(2, rng);
  CHECK(trace(idle, Operator(Space::flat(1), Mat::Identity(1, 1)), StateVector(Space::flat(3), v)).L == 0.0);
}

TEST_CASE("trace: purifier at p = 0.25 has L = 2") {
  const Transducer T = build_simple(64);
  const StateVector xi = StateVector::basis(T.public_space(), 0);
  const Complexities c = complexities(T, simple_oracle(0.25), xi);
  CHECK(std::abs(c.L - 2.0) < 1e-9);
}

TEST_CASE("unitarity and L <= Q on random algorithms") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const QueryAlgorithm alg = random_algorithm(8, 3, 2, 3, 2, rng);
    const Operator O(Space::flat(2), random_unitary(2, rng));
    const StateVector xi(alg.space(), random_unit(8, rng));
    CHECK(std::abs(run(alg, O, xi).norm() - 1.0) < 1e-10);
    const QueryTrace tr = trace(alg, O, xi);
    CHECK(tr.L <= 3.0 + 1e-12);
    CHECK(tr.final_state.distance(run(alg, O, xi)) < 1e-12);
  }
}

TEST_CASE("run_perturbed obeys the triangle bound") {
  Rng rng(4);
  const QueryAlgorithm alg = random_algorithm(6, 2, 0, 3, 2, rng);
  const Operator O(Space::flat(2), random_unitary(2, rng));
  const StateVector xi(alg.space(), random_unit(6, rng));
  const StateVector clean = run(alg, O, xi);
  CHECK(run_perturbed(alg, O, xi, {}).first.distance(clean) < 1e-15);

  auto delta = [&](double norm) { return StateVector(alg.space(), norm * random_unit(6, rng)); };
  for (std::size_t step = 0; step <= 2; ++step) {
    const auto [out, log] = run_perturbed(alg, O, xi, {{step, delta(0.1)}});
    CHECK(out.distance(clean) <= 0.1 + 1e-12);
    CHECK(std::abs(log.total() - 0.1) < 1e-12);
  }
  const auto [out2, log2] = run_perturbed(alg, O, xi, {{0, delta(0.05)}, {2, delta(0.07)}});
  CHECK(out2.distance(clean) <= 0.12 + 1e-12);
  CHECK(std::abs(log2.total() - 0.12) < 1e-12);
}

TEST_CASE("query states are linear in xi") {
  Rng rng(5);
  const QueryAlgorithm alg = random_algorithm(8, 2, 0, 2, 2, rng);
  const Operator O(Space::flat(2), random_unitary(2, rng));
  const StateVector x1(alg.space(), random_unit(8, rng));
  const StateVector x2(alg.space(), random_unit(8, rng));
  CHECK(linearity_check(alg, O, x1, x2, 1.0, 0.0));
  const double s = std::sqrt(0.5);
  CHECK(linearity_check(alg, O, x1, x2, s, s));
  CHECK(linearity_check(alg, O, x1, x2, cplx(0.3, -1.2), cplx(2.0, 0.5)));
  const double L1 = trace(alg, O, x1).L;
  CHECK(std::abs(trace(alg, O, x1 * 2.0).L - 4.0 * L1) < 1e-12);
}

TEST_CASE("malformed algorithms are rejected") {
  std::vector<Step> bad{Mat(Mat::Identity(3, 3))};
  CHECK_THROWS_AS(QueryAlgorithm(Space::flat(2), std::move(bad), BulletSplit::contiguous(0, 1, 2)),
                  DimensionError);
  Mat nonu = Mat::Identity(2, 2) * 2.0;
  std::vector<Step> bad2{nonu};
  CHECK_THROWS_AS(QueryAlgorithm(Space::flat(2), std::move(bad2), BulletSplit::contiguous(0, 1, 2)),
                  StructureError);
  const QueryAlgorithm bq = bare_query();
  CHECK_THROWS_AS(run(bq, Operator::identity(Space::flat(3)), StateVector::basis(Space::flat(2), 0)),
                  DimensionError);
}
