#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "transduce/error.hpp"
#include "transduce/nonboolean.hpp"

using namespace tlab;

namespace {

QspReduction reducer_for(double delta, double eps) {
  return qsp_error_reduction(simple_oracle(0.5 - delta), OracleSpec::simple(0.5 - delta), delta, eps);
}

}  // namespace

TEST_CASE("instances and the unique label") {
  Rng rng(1);
  const NbInstance inst = nb_instance(2, 1, 2, 0.8, rng);
  CHECK(inst.r() == 2);
  CHECK(std::abs(inst.delta() - 0.3) < 1e-15);
  CHECK(std::abs(inst.state().norm() - 1.0) < 1e-12);
  NbInstance flat = inst;
  flat.p = {0.25, 0.25, 0.25, 0.25};
  CHECK_THROWS_AS(flat.r(), ContractError);
  CHECK_THROWS_AS(nb_instance(4, 1, 0, 0.8, rng), DomainError);
  CHECK(parity_dot(0b11, 0b01) == 1);
  CHECK(parity_dot(0b11, 0b11) == 0);
}

TEST_CASE("lifted oracle is block diagonal with the right biases") {
  Rng rng(2);
  for (std::size_t m : {1u, 2u, 3u}) {
    const NbInstance inst = nb_instance(m, 2, 1, 0.75, rng);
    const Operator lifted = lifted_oracle(nb_reflecting_oracle(inst), m);
    CHECK(lifted.is_unitary());
    CHECK(off_block_mass(lifted, m) <= 1e-12);
    for (std::size_t b = 0; b < (std::size_t{1} << m); ++b) {
      const double pb = lifted_bias(inst, b);
      const bool flips = parity_dot(inst.r(), b) == 1;
      CHECK((flips ? pb - 0.5 : 0.5 - pb) >= inst.delta() - 1e-12);
      // O'_b reflects about T_b |0>_C phi
      const Vec phi = lifted_state(inst, b);
      const Operator Ob = b_block(lifted, m, b);
      CHECK((Ob.mat() * phi - phi).norm() < 1e-12);
      // the C = 1 weight of phi'_b is p'_b
      CHECK(std::abs(phi.tail(phi.size() / 2).squaredNorm() - pb) < 1e-12);
    }
  }
}

TEST_CASE("wrapper output and imprecision") {
  Rng rng(3);
  const NbInstance inst = nb_instance(2, 1, 2, 0.8, rng);
  const QspReduction red = reducer_for(0.3, 0.1);
  const NbRun run = simulate_nb(qsp_reducer(red.alpha), inst);
  CHECK(run.r == 2);
  CHECK(std::abs(run.imprecision - run.inner_imprecision) < 1e-10);
  CHECK(run.fidelity >= 1.0 - run.inner_imprecision - 1e-8);
  CHECK(run.imprecision <= 0.1);
  CHECK(run.prob_r >= run.fidelity - 1e-12);
}

TEST_CASE("query-algorithm form matches the operator form") {
  Rng rng(4);
  const QspReduction red = reducer_for(0.3, 0.3);
  for (std::size_t m : {1u, 2u}) {
    const NbInstance inst = nb_instance(m, 2, 1, 0.8, rng);
    const Operator O = nb_reflecting_oracle(inst);
    const QueryAlgorithm alg = bv_qsp_algorithm(red.alpha, m, 2);
    CHECK(alg.queries() == red.degree);
    const Operator U = bv_error_reduction(qsp_reducer(red.alpha), O, m);
    CHECK((alg.full_operator(O).mat() - U.mat()).norm() < 1e-10);
    // B, C, A, W: one qubit beyond the answer and workspace registers
    CHECK(U.dim() == (std::size_t{1} << m) * 2 * (std::size_t{1} << m) * 2);
  }
}

TEST_CASE("m = 1 reproduces the Boolean reducer") {
  Rng rng(5);
  const NbInstance inst = nb_instance(1, 1, 1, 0.8, rng);
  const QspReduction red = reducer_for(0.3, 0.1);
  const NbRun run = simulate_nb(qsp_reducer(red.alpha), inst);
  // Block b carries the Boolean problem with p'_b (p'_0 = 0, p'_1 = p_1),
  // each with weight 1/2 in the uniform superposition over b.
  CHECK(std::abs(lifted_bias(inst, 1) - 0.8) < 1e-15);
  auto boolean_err = [&](double p) {
    const OracleSpec spec = OracleSpec::simple(p);
    const Operator U = qsp_reducer(red.alpha)(simple_oracle(p));
    const double sign = p > 0.5 ? -1.0 : 1.0;
    return (U.mat() * spec.target().amp() - sign * spec.target().amp()).norm();
  };
  const double e0 = boolean_err(0.0), e1 = boolean_err(0.8);
  CHECK(std::abs(run.imprecision - std::sqrt(0.5 * (e0 * e0 + e1 * e1))) < 1e-10);
}

TEST_CASE("accounting stays below 1/(2 delta)") {
  Rng rng(6);
  const NbInstance inst = nb_instance(2, 1, 3, 0.75, rng);
  const NbAccounting acc = nb_accounting(inst, 64);
  CHECK(std::abs(acc.bound - 2.0) < 1e-12);
  CHECK(acc.L <= acc.bound + 1e-9);
  CHECK(acc.L_b.size() == 4);
  CHECK(acc.p_prime[0] == 0.0);
  CHECK(acc.L_b[0] <= 1.0 + 1e-12);
}
