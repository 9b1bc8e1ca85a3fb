#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "transduce/error.hpp"
#include "transduce/linalg.hpp"
#include "transduce/random.hpp"

using namespace tlab;
using tlab::test::gap;
using tlab::test::real_mat;
using tlab::test::real_vec;

TEST_CASE("space indexing is big-endian and blocks concatenate") {
  const Space s = Space::tensor({{"a", 2}, {"b", 3}});
  CHECK(s.dim() == 6);
  CHECK(s.index({0, {1, 2}}) == 5);
  CHECK(s.label(4).digits == std::vector<std::size_t>{1, 1});
  const Space d = Space::direct_sum({Space::flat(2, "h"), s});
  CHECK(d.dim() == 8);
  CHECK(d.block_offset(1) == 2);
  CHECK(d.index({1, {0, 1}}) == 3);
}

TEST_CASE("reflection_about") {
  const Space q = Space::flat(2);
  CHECK(gap(reflection_about(StateVector::basis(q, 0)).mat(), real_mat({{1, 0}, {0, -1}})) < 1e-15);
  const double s = std::sqrt(0.5);
  CHECK(gap(reflection_about(StateVector(q, real_vec({s, s}))).mat(), real_mat({{0, 1}, {1, 0}})) < 1e-15);
  const StateVector phi(q, real_vec({std::sqrt(0.75), 0.5}));
  const double h = std::sqrt(3.0) / 2.0;
  CHECK(gap(reflection_about(phi).mat(), real_mat({{0.5, h}, {h, -0.5}})) < 1e-15);

  Rng rng(3);
  const StateVector psi(Space::flat(5), random_unit(5, rng));
  const Mat r = reflection_about(psi).mat();
  CHECK(gap(r * r, Mat::Identity(5, 5)) < 1e-10);
  CHECK_THROWS_AS(reflection_about(StateVector(q, real_vec({1, 1}))), NormalizationError);
}

TEST_CASE("direct_sum and tensor") {
  const Operator I2 = Operator::identity(Space::flat(2));
  CHECK(gap(direct_sum({I2, I2}).mat(), Mat::Identity(4, 4)) < 1e-15);
  Mat d = Mat::Identity(4, 4);
  d(1, 1) = -1;
  CHECK(gap(direct_sum({pauli_z(), I2}).mat(), d) < 1e-15);

  Mat iz = Mat::Identity(4, 4);
  iz(1, 1) = iz(3, 3) = -1;
  CHECK(gap(tensor({I2, pauli_z()}).mat(), iz) < 1e-15);
  Mat zi = Mat::Identity(4, 4);
  zi(2, 2) = zi(3, 3) = -1;
  CHECK(gap(tensor({pauli_z(), I2}).mat(), zi) < 1e-15);
  const Operator xx = tensor({pauli_x(), pauli_x()});
  const StateVector out = xx.apply(StateVector::basis(xx.space(), 0));
  CHECK(std::abs(out[3] - cplx(1.0)) < 1e-15);

  Rng rng(5);
  const Operator u(Space::flat(3), random_unitary(3, rng));
  CHECK(tensor({u, hadamard()}).is_unitary());
  CHECK(direct_sum({u, hadamard()}).is_unitary());
}

TEST_CASE("controlled builds CNOT") {
  const Space s = Space::qubits(2);
  const std::size_t t[] = {1}, c[] = {0};
  const Operator cx = controlled(s, pauli_x(), t, c, [](const BasisLabel& l) { return l.digits[0] == 1; });
  CHECK(gap(cx.mat(), real_mat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}})) < 1e-15);
  const std::size_t bad[] = {1};
  CHECK_THROWS_AS(controlled(s, pauli_x(), t, bad, [](const BasisLabel&) { return true; }), StructureError);
}

TEST_CASE("increment and decrement mod D") {
  const Operator inc = increment_mod(4);
  CHECK(std::abs(inc.apply(StateVector::basis(inc.space(), 3))[0] - cplx(1.0)) < 1e-15);
  CHECK(std::abs(inc.apply(StateVector::basis(inc.space(), 1))[2] - cplx(1.0)) < 1e-15);
  CHECK_THROWS_AS(increment_mod(1), DomainError);
  for (std::size_t D : {2u, 4u, 7u}) {
    CHECK(((increment_mod(D) * decrement_mod(D)).mat() - Mat::Identity(D, D)).norm() == 0.0);
    CHECK((decrement_mod(D).mat() - increment_mod(D).mat().adjoint()).norm() == 0.0);
  }
}

TEST_CASE("unitarity certification") {
  Mat m = Mat::Identity(2, 2);
  m(0, 0) = 1.0 + 1e-6;
  CHECK_THROWS_AS(Operator(Space::flat(2), m).certify_unitary(), StructureError);
  CHECK_NOTHROW(hadamard().certify_unitary());
  CHECK_THROWS_AS(Operator(Space::flat(3), Mat::Identity(2, 2)), DimensionError);
}
