#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cmath>

using namespace qrev;
using namespace qrev::test;

TEST_CASE("herm_eig on small matrices") {
  auto e = herm_eig(CMatrix::Identity(2, 2));
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(1.0));

  auto z = herm_eig(fixtures::pauli_z());
  CHECK(z.values(0) == doctest::Approx(-1.0));
  CHECK(z.values(1) == doctest::Approx(1.0));
}

TEST_CASE("herm_eig reconstructs and returns a unitary") {
  Rng rng(1);
  for (int d : {1, 3, 4, 7}) {
    CMatrix h = fixtures::random_hermitian(d, rng);
    auto e = herm_eig(h);
    CMatrix back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    CHECK(distance(back, h) < 1e-10);
    CHECK(distance(e.vectors.adjoint() * e.vectors, CMatrix::Identity(d, d)) < 1e-12);
    for (int k = 1; k < d; ++k) CHECK(e.values(k) >= e.values(k - 1));
  }
}

TEST_CASE("herm_eig rejects bad input") {
  CMatrix nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK(thrown_code([&] { herm_eig(nh); }) == "NotHermitian");
  CHECK(thrown_code([&] { herm_eig(CMatrix::Zero(2, 3)); }) == "NotSquare");
}

TEST_CASE("pd_power examples") {
  CHECK(distance(pd_power(CMatrix::Identity(3, 3), -0.5), CMatrix::Identity(3, 3)) < 1e-14);
  CHECK(distance(pd_power(diag({4, 1}), 0.5), diag({2, 1})) < 1e-14);
  CHECK(distance(pd_power(diag({4, 1}), -1.0), diag({0.25, 1})) < 1e-14);
  CHECK(thrown_code([] { pd_power(diag({1, 0}), 0.5); }) == "SingularOrIndefinite");
  CHECK(thrown_code([] { pd_power(diag({1, -0.1}), 0.5); }) == "SingularOrIndefinite");
}

TEST_CASE("pd_power exponents add") {
  Rng rng(2);
  for (int d = 1; d <= 6; ++d) {
    CMatrix p = fixtures::random_density(d, rng).mat();
    for (double a : {-1.0, -0.5, 0.5, 1.0})
      for (double b : {-1.0, -0.5, 0.5, 1.0}) {
        CMatrix lhs = pd_power(p, a) * pd_power(p, b);
        CMatrix rhs = pd_power(p, a + b);
        CHECK(distance(lhs, rhs) <= 1e-10 * std::max(1.0, opnorm(rhs)));
      }
    CHECK(distance(pd_power(p, 1.0), p) < 1e-12);
  }
}

TEST_CASE("unitary_of") {
  CMatrix h = fixtures::pauli_z();
  CHECK(distance(unitary_of(h, 0.0), CMatrix::Identity(2, 2)) < 1e-15);
  CHECK(distance(unitary_of(h, M_PI), -CMatrix::Identity(2, 2)) < 1e-12);

  Rng rng(3);
  CMatrix g = fixtures::random_hermitian(4, rng);
  CMatrix u = unitary_of(g, 0.7);
  CHECK(distance(u * unitary_of(g, -0.7), CMatrix::Identity(4, 4)) < 1e-12);
  CHECK(distance(u.adjoint() * u, CMatrix::Identity(4, 4)) < 1e-12);
  // Group property in t.
  CHECK(distance(unitary_of(g, 0.3) * unitary_of(g, 0.4), u) < 1e-12);
}

TEST_CASE("kron") {
  CHECK(distance(kron(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)), CMatrix::Identity(4, 4)) == 0.0);
  CMatrix k = kron(diag({2, 3}), CMatrix::Identity(2, 2));
  CHECK(distance(k, diag({2, 2, 3, 3})) == 0.0);

  // Element formula (A (x) B)_{i*p+k, j*q+l} = A_ij B_kl.
  Rng rng(4);
  CMatrix a = fixtures::ginibre(2, 3, rng), b = fixtures::ginibre(3, 2, rng);
  CMatrix ab = kron(a, b);
  REQUIRE(ab.rows() == 6);
  REQUIRE(ab.cols() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 2; ++q) CHECK(std::abs(ab(i * 3 + p, j * 2 + q) - a(i, j) * b(p, q)) < 1e-15);

  // Works for real scalars too.
  RMatrix r = kron(RMatrix::Identity(2, 2), RMatrix::Constant(1, 1, 5.0));
  CHECK(r(1, 1) == 5.0);
}

TEST_CASE("partial_trace") {
  CMatrix rho = diag({0.3, 0.7}), sigma = diag({0.6, 0.4});
  CHECK(distance(partial_trace(kron(rho, sigma), 2, 2, Keep::System), rho) < 1e-15);
  CHECK(distance(partial_trace(kron(rho, sigma), 2, 2, Keep::Environment), sigma) < 1e-15);
  CHECK(distance(partial_trace(CMatrix(CMatrix::Identity(4, 4) / 2.0), 2, 2, Keep::System),
                 CMatrix::Identity(2, 2)) < 1e-15);

  // Bell state (|00> + |11>)/sqrt2: reduced state is I/2 on either side.
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CMatrix b = bell * bell.adjoint();
  CHECK(distance(partial_trace(b, 2, 2, Keep::System), CMatrix(CMatrix::Identity(2, 2) / 2.0)) < 1e-15);
  CHECK(distance(partial_trace(b, 2, 2, Keep::Environment), CMatrix(CMatrix::Identity(2, 2) / 2.0)) < 1e-15);

  CHECK(thrown_code([&] { partial_trace(b, 2, 3, Keep::System); }) == "DimensionMismatch");
}

TEST_CASE("partial_trace against the defining identity tr[(X (x) I) M] = tr[X tr_E M]") {
  Rng rng(5);
  for (auto [ds, de] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{1, 4}}) {
    CMatrix m = fixtures::ginibre(ds * de, ds * de, rng);
    CMatrix x = fixtures::ginibre(ds, ds, rng);
    CMatrix y = fixtures::ginibre(de, de, rng);
    cplx lhs_s = (kron(x, CMatrix::Identity(de, de)) * m).trace();
    cplx rhs_s = (x * partial_trace(m, ds, de, Keep::System)).trace();
    CHECK(std::abs(lhs_s - rhs_s) < 1e-12);
    cplx lhs_e = (kron(CMatrix::Identity(ds, ds), y) * m).trace();
    cplx rhs_e = (y * partial_trace(m, ds, de, Keep::Environment)).trace();
    CHECK(std::abs(lhs_e - rhs_e) < 1e-12);
  }
}

TEST_CASE("vec is column stacking: vec(AXB) = (B^T (x) A) vec(X)") {
  Rng rng(6);
  CMatrix a = fixtures::ginibre(3, 3, rng), x = fixtures::ginibre(3, 3, rng), b = fixtures::ginibre(3, 3, rng);
  CVector lhs = vec(a * x * b);
  CVector rhs = kron(b.transpose(), a) * vec(x);
  CHECK((lhs - rhs).norm() < 1e-12);
  CHECK(vec(x)(1) == x(1, 0));
  CHECK(distance(unvec(vec(x), 3), x) == 0.0);
}

TEST_CASE("opnorm is the largest singular value") {
  CHECK(opnorm(diag({-3, 2})) == doctest::Approx(3.0));
  CMatrix n(2, 2);
  n << 0, 1, 0, 0;
  CHECK(opnorm(n) == doctest::Approx(1.0));
  CHECK(opnorm(CMatrix(0, 0)) == 0.0);
}
