#include "qrev/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "qrev/reversal.hpp"

namespace qrev::fixtures {

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  CMatrix g(rows, cols);
  for (Eigen::Index k = 0; k < g.size(); ++k) g.data()[k] = cplx(n(rng), n(rng));
  return g;
}

CMatrix random_hermitian(Eigen::Index d, Rng& rng, double scale) {
  const CMatrix g = ginibre(d, d, rng);
  return scale * 0.5 * (g + g.adjoint());
}

CMatrix random_unitary(Eigen::Index d, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(ginibre(d, d, rng));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

DensityMatrix random_density(Eigen::Index d, Rng& rng) {
  const CMatrix g = ginibre(d, d, rng);
  const CMatrix rho = g * g.adjoint() + 0.05 * CMatrix::Identity(d, d);
  return DensityMatrix::normalized(rho);
}

KrausChannel random_channel(Eigen::Index d, std::size_t kraus_count, Rng& rng) {
  std::vector<CMatrix> ops;
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < kraus_count; ++k) {
    ops.push_back(ginibre(d, d, rng));
    total += ops.back().adjoint() * ops.back();
  }
  const CMatrix norm = pd_power(total, -0.5);
  for (auto& a : ops) a = a * norm;
  return KrausChannel(std::move(ops));
}

ChannelWithFixedPoint random_balanced_channel(Eigen::Index d, Rng& rng, double min_eig, double min_spacing) {
  std::uniform_int_distribution<std::size_t> count(2, static_cast<std::size_t>(std::max<Eigen::Index>(2, d)));
  while (true) {
    KrausChannel ch = random_channel(d, count(rng), rng);
    try {
      DensityMatrix pi = fixed_point(ch);
      const RVector ev = herm_eig(pi.mat()).values;
      bool ok = ev(0) >= min_eig;
      for (Eigen::Index k = 1; k < ev.size(); ++k) ok = ok && (ev(k) - ev(k - 1) >= min_spacing);
      if (ok) return {std::move(ch), std::move(pi)};
    } catch (const Error&) {
    }
  }
}

CMatrix unitary_commuting_with(const DensityMatrix& pi, Rng& rng) {
  const HermEig eig = herm_eig(pi.mat());
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  CVector ph(eig.values.size());
  for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::exp(cplx(0.0, phase(rng)));
  return eig.vectors * ph.asDiagonal() * eig.vectors.adjoint();
}

KrausChannel symmetrize(const KrausChannel& ch, const DensityMatrix& pi) {
  return mix({ch, reverse_channel(ch, pi)}, {0.5, 0.5});
}

KrausChannel depolarizing_qubit() {
  return KrausChannel({0.5 * CMatrix::Identity(2, 2), 0.5 * pauli_x(), 0.5 * pauli_y(), 0.5 * pauli_z()});
}

SuperMatrix lindblad_generator(const CMatrix& h, const std::vector<CMatrix>& jumps) {
  const Eigen::Index d = h.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix l = cplx(0, -1) * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& j : jumps) {
    const CMatrix jj = j.adjoint() * j;
    l += kron(j.conjugate(), j) - 0.5 * kron(id, jj) - 0.5 * kron(jj.transpose(), id);
  }
  return {d, l};
}

}  // namespace qrev::fixtures
