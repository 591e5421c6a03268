#ifndef QREV_FIXTURES_HPP
#define QREV_FIXTURES_HPP

#include <random>
#include <utility>

#include "qrev/channel.hpp"

namespace qrev::fixtures {

using Rng = std::mt19937_64;

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);
CMatrix random_hermitian(Eigen::Index d, Rng& rng, double scale = 1.0);
CMatrix random_unitary(Eigen::Index d, Rng& rng);
/// Full-rank state with spectrum drawn from a Dirichlet-like distribution.
DensityMatrix random_density(Eigen::Index d, Rng& rng);

/// Random TCP channel: Gaussian operators G_k normalized by (sum G^dagger G)^{-1/2}.
KrausChannel random_channel(Eigen::Index d, std::size_t kraus_count, Rng& rng);

struct ChannelWithFixedPoint {
  KrausChannel channel;
  DensityMatrix pi;
};

/// Redraws until the fixed point is unique, has smallest eigenvalue at least
/// `min_eig` and adjacent eigenvalue spacing at least `min_spacing`.
ChannelWithFixedPoint random_balanced_channel(Eigen::Index d, Rng& rng, double min_eig = 1e-2,
                                              double min_spacing = 1e-3);

/// Unitary diagonal in the eigenbasis of pi, with random phases.
CMatrix unitary_commuting_with(const DensityMatrix& pi, Rng& rng);

/// (S + S~)/2 as a Kraus channel.
KrausChannel symmetrize(const KrausChannel& ch, const DensityMatrix& pi);

KrausChannel depolarizing_qubit();

/// Lindblad generator -i[H, .] + sum_k (L_k . L_k^dagger - {L_k^dagger L_k, .}/2).
SuperMatrix lindblad_generator(const CMatrix& h, const std::vector<CMatrix>& jumps);

}  // namespace qrev::fixtures

#endif  // QREV_FIXTURES_HPP
