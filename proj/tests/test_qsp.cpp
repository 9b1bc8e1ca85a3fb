#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "transduce/error.hpp"
#include "transduce/qsp.hpp"

using namespace tlab;
using tlab::test::gap;
using tlab::test::real_mat;

constexpr cplx kI(0.0, 1.0);

namespace {

PhaseSequence random_phases(std::size_t k, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  PhaseSequence s;
  for (std::size_t j = 0; j <= k; ++j) s.alpha.push_back(std::polar(1.0, u(rng)));
  return s;
}

}  // namespace

TEST_CASE("signal unitary") {
  CHECK(gap(signal_unitary(1, 0).mat(), real_mat({{1, 0}, {0, -1}})) < 1e-15);
  CHECK(gap(signal_unitary(0, 1).mat(), real_mat({{0, 1}, {1, 0}})) < 1e-15);
  const double p = 0.25;
  CHECK(gap(signal_unitary(1 - 2 * p, 2 * std::sqrt(p * (1 - p))).mat(), simple_oracle(p).mat()) < 1e-15);
  CHECK_THROWS_AS(signal_unitary(1, 1), NormalizationError);
}

TEST_CASE("qsp_assemble") {
  const Operator W = signal_unitary(0.6, 0.8);
  CHECK(gap(qsp_assemble(PhaseSequence{{1.0}}, W).mat(), real_mat({{1, 0}, {0, -1}})) < 1e-15);
  Mat ii = Mat::Identity(2, 2) * kI;
  CHECK(gap(qsp_assemble(PhaseSequence{{kI}}, W).mat(), ii) < 1e-15);
  Rng rng(1);
  const PhaseSequence s = random_phases(5, rng);
  const cplx top = qsp_assemble(s, signal_unitary(1, 0)).mat()(0, 0);
  CHECK(std::abs(top - pair_from_phases(s).P_at(1.0)) < 1e-13);
  CHECK(std::abs(std::abs(top) - 1.0) < 1e-13);
  // phases act on the leading qubit only
  const Operator big(Space::flat(6), random_unitary(6, rng));
  CHECK(qsp_assemble(s, big).dim() == 6);
}

TEST_CASE("sign polynomial") {
  const RealPolynomial R = sign_polynomial(0.4, 0.1);
  CHECK(R.degree() <= 40);
  CHECK(R.degree() % 2 == 1);
  CHECK(std::abs(R(0.0)) < 1e-15);
  for (int i = 0; i <= 2000; ++i) {
    const double x = -1.0 + i / 1000.0;
    CHECK(std::abs(R(x)) <= 1.0);
    if (x >= 0.4) CHECK(R(x) >= 0.9);
  }
  CHECK(sign_polynomial(0.9, 0.5).degree() <= 3);
  CHECK_THROWS_AS(sign_polynomial(0.1, 1e-4), DegreeCapError);
}

TEST_CASE("completion") {
  const PolynomialPair x = complete(RealPolynomial{{0.0, 1.0}, 1});
  CHECK(std::abs(x.P[1] - cplx(1.0)) < 1e-12);
  CHECK(std::abs(std::abs(x.Q[0]) - 1.0) < 1e-12);
  CHECK(complete(RealPolynomial{{0, 0, 0, 1}, 1}).condition_residual() <= 1e-8);
  const PolynomialPair z = complete(RealPolynomial{{0.0, 0.0}, 1}, 1);
  CHECK(std::abs(z.P[1].real()) < 1e-12);
  CHECK(std::abs(std::abs(z.P[1]) - 1.0) < 1e-12);
  CHECK(z.condition_residual() <= 1e-8);
  CHECK_THROWS_AS(complete(RealPolynomial{{0.0, 1.2}, 1}), CompletionError);
  CHECK_THROWS_AS(complete(RealPolynomial{{0.5, 0.0, 0.1}, 0}, 3), CompletionError);
  // |R| very close to 1 leaves near-double roots in 1 - R^2
  const RealPolynomial R = sign_polynomial(0.5, 0.01 * 0.01 / 6.0);
  const PolynomialPair pq = complete(R);
  CHECK(pq.condition_residual() <= 1e-8);
  CHECK(qsp_main_residual(phase_factors(pq), pq) <= 1e-8);
}

TEST_CASE("phase factors round trip") {
  const PolynomialPair x = complete(RealPolynomial{{0.0, 1.0}, 1});
  const PhaseSequence a = phase_factors(x);
  CHECK(a.k() == 1);
  CHECK(a.unimodularity_defect() < 1e-12);
  CHECK(qsp_main_residual(a, x) < 1e-12);

  PolynomialPair one;
  one.P = {1.0};
  CHECK(std::abs(phase_factors(one).alpha[0] - cplx(1.0)) < 1e-15);

  Rng rng(7);
  for (std::size_t k : {1u, 2u, 5u, 9u, 12u}) {
    const PhaseSequence s = random_phases(k, rng);
    const PolynomialPair pq = pair_from_phases(s);
    CHECK(pq.condition_residual() < 1e-12);
    CHECK(pq.parity_defect() < 1e-12);
    CHECK(qsp_main_residual(phase_factors(pq), pq) <= 1e-8);
  }
}

TEST_CASE("error reduction") {
  for (double p : {0.2, 0.8}) {
    const OracleSpec s = OracleSpec::simple(p);
    const QspReduction red = qsp_error_reduction(simple_oracle(p), s, 0.3, 0.2);
    CHECK(red.U.dim() == 2);
    CHECK(red.degree == red.alpha.k());
    const Vec phi = s.target().amp();
    const double sign = p < 0.5 ? 1.0 : -1.0;
    CHECK((red.U.mat() * phi - sign * phi).norm() <= 0.2);
  }
  Rng rng(4);
  for (double p : {0.0, 0.15, 0.85, 1.0}) {
    const OracleSpec s = OracleSpec::random(p, 2, rng);
    const Operator O = general_reflecting_oracle(s, random_complement_action(s, rng));
    const QspReduction red = qsp_error_reduction(O, s, 0.3, 0.1);
    CHECK(red.U.dim() == O.dim());
    Mat B(4, 2);
    B << s.target().amp(), s.negated().amp();
    const double sign = s.r() == 1 ? -1.0 : 1.0;
    const Mat diff = red.U.mat() * B - sign * B;
    CHECK(diff.operatorNorm() <= std::sqrt(6.0 * red.eps_prime) + 1e-12);
  }
  CHECK_THROWS_AS(qsp_error_reduction(simple_oracle(0.4), OracleSpec::simple(0.4), 0.3, 0.1), DomainError);
}
