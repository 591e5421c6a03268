#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cmath>

#include "qrev/classical.hpp"
#include "qrev/reversal.hpp"

using namespace qrev;
using namespace qrev::test;

namespace {

StochasticMatrix two_state() {
  RMatrix m(2, 2);
  m << 0.9, 0.2, 0.1, 0.8;
  return StochasticMatrix(m);
}

StochasticMatrix three_cycle() {
  // 0 -> 1 -> 2 -> 0; m(j, i) = P(i -> j).
  RMatrix m = RMatrix::Zero(3, 3);
  m(1, 0) = m(2, 1) = m(0, 2) = 1.0;
  return StochasticMatrix(m);
}

RVector vec_of(std::initializer_list<double> xs) {
  RVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

}  // namespace

TEST_CASE("validation") {
  RMatrix rows(2, 2);
  rows << 0.9, 0.1, 0.2, 0.8;  // row-stochastic, columns do not sum to 1
  CHECK(thrown_code([&] { StochasticMatrix{rows}; }) == "NotStochastic");
  CHECK(thrown_code([] { ProbVector(vec_of({0.5, 0.6})); }) == "InvalidArgument");
  CHECK(thrown_code([] { ProbVector(vec_of({1.5, -0.5})); }) == "InvalidArgument");
}

TEST_CASE("stationary") {
  CHECK(thrown_code([] { stationary(StochasticMatrix(RMatrix::Identity(2, 2))); }) == "NonUniqueStationary");
  auto p = stationary(two_state());
  CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  RMatrix ds(3, 3);
  ds << 0.5, 0.3, 0.2, 0.2, 0.5, 0.3, 0.3, 0.2, 0.5;
  auto u = stationary(StochasticMatrix(ds));
  for (int i = 0; i < 3; ++i) CHECK(u[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  auto c = stationary(three_cycle());
  for (int i = 0; i < 3; ++i) CHECK(c[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("markov_reverse") {
  auto m = two_state();
  auto rev = markov_reverse(m, ProbVector(vec_of({2.0 / 3.0, 1.0 / 3.0})));
  CHECK((rev.m() - m.m()).norm() < 1e-12);

  auto cyc = three_cycle();
  auto rc = markov_reverse(cyc, ProbVector(vec_of({1.0 / 3, 1.0 / 3, 1.0 / 3})));
  CHECK((rc.m() - cyc.m().transpose()).norm() < 1e-12);

  CHECK(thrown_code([&] { markov_reverse(m, ProbVector(vec_of({1.0, 0.0}))); }) == "ZeroProbabilityState");
  CHECK(thrown_code([&] { markov_reverse(m, ProbVector(vec_of({0.5, 0.5}))); }) == "NotBalanced");
}

TEST_CASE("markov_reverse on a random chain: entrywise formula, stationarity, involution") {
  Rng rng(30);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  RMatrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(j, i) = u(rng);
  for (int i = 0; i < 4; ++i) m.col(i) /= m.col(i).sum();
  StochasticMatrix sm(m);
  auto p = stationary(sm);
  auto rev = markov_reverse(sm, p);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(rev.m()(i, j) == doctest::Approx(p[i] * m(j, i) / p[j]).epsilon(1e-12));
  CHECK((rev.m() * p.p() - p.p()).norm() < 1e-12);
  CHECK((markov_reverse(rev, p).m() - m).norm() < 1e-12);
}

TEST_CASE("extract_markov") {
  auto id = extract_markov(super_matrix(KrausChannel({CMatrix::Identity(3, 3)})));
  CHECK((id.m() - RMatrix::Identity(3, 3)).norm() < 1e-14);

  Rng rng(31);
  CMatrix u = fixtures::random_unitary(3, rng);
  auto mu = extract_markov(super_matrix(KrausChannel({u})));
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) CHECK(mu.m()(a, c) == doctest::Approx(std::norm(u(a, c))).epsilon(1e-12));

  // Partial dephasing followed by a unitary, against a brute-force sum over
  // Kraus operators of |<a|A|c>|^2.
  CMatrix v = fixtures::random_unitary(2, rng);
  KrausChannel dep({std::sqrt(0.7) * CMatrix::Identity(2, 2), std::sqrt(0.3) * fixtures::pauli_z()});
  auto ch = compose(KrausChannel({v}), dep);
  auto md = extract_markov(super_matrix(ch));
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) {
      double brute = 0.0;
      for (const auto& k : ch.kraus) brute += std::norm(k(a, c));
      CHECK(md.m()(a, c) == doctest::Approx(brute).epsilon(1e-12));
    }

  CMatrix bad = CMatrix::Identity(3, 3);
  bad(0, 1) = 0.1;
  CHECK(thrown_code([&] { extract_markov(super_matrix(KrausChannel({u})), bad); }) == "BasisNotOrthonormal");
}

TEST_CASE("extract_markov in a rotated basis") {
  Rng rng(32);
  CMatrix w = fixtures::random_unitary(3, rng);
  // Embed a chain in the basis given by w's columns, then read it back there.
  auto emb = embed_markov(three_cycle());
  std::vector<CMatrix> rotated;
  for (const auto& k : emb.kraus) rotated.push_back(w * k * w.adjoint());
  auto back = extract_markov(super_matrix(KrausChannel(rotated)), w);
  CHECK((back.m() - three_cycle().m()).norm() < 1e-12);
}

TEST_CASE("embed_markov") {
  auto e = embed_markov(StochasticMatrix(RMatrix::Identity(2, 2)));
  REQUIRE(e.size() == 2);
  CHECK(distance(e.kraus[0], ket_bra(2, 0, 0)) == 0.0);
  CHECK(distance(e.kraus[1], ket_bra(2, 1, 1)) == 0.0);

  auto ch = embed_markov(two_state());
  CHECK(check_tcp(ch).is_tcp);
  CHECK((extract_markov(super_matrix(ch)).m() - two_state().m()).norm() < 1e-14);
}

TEST_CASE("reversal commutes with extraction") {
  Rng rng(33);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 2 + trial % 3;
    auto [ch, pi] = fixtures::random_balanced_channel(d, rng);
    auto eig = herm_eig(pi.mat());
    auto m = extract_markov(super_matrix(ch), eig.vectors);
    auto m_rev = extract_markov(super_matrix(reverse_channel(ch, pi)), eig.vectors);
    auto expected = markov_reverse(m, ProbVector(eig.values / eig.values.sum()), 1e-8);
    CHECK((m_rev.m() - expected.m()).norm() < 1e-9);
  }

  // Classical chains survive the embed -> reverse -> extract loop unchanged.
  auto m = two_state();
  auto p = stationary(m);
  DensityMatrix pi(p.p().cast<cplx>().asDiagonal());
  auto via_channel = extract_markov(super_matrix(reverse_channel(embed_markov(m), pi)));
  CHECK((via_channel.m() - markov_reverse(m, p).m()).norm() < 1e-12);
}
