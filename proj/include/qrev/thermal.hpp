#ifndef QREV_THERMAL_HPP
#define QREV_THERMAL_HPP

#include <utility>
#include <vector>

#include "qrev/channel.hpp"

namespace qrev {

struct BathSpec {
  CMatrix h_bath;
  double beta = 1.0;
};

/// Interaction term epsilon * h_int on the joint (system-first) space.
struct CouplingSpec {
  CMatrix h_int;
  double epsilon = 0.0;
};

/// Thermostated channel with Kraus index alpha <-> bath transition (i, j),
/// i the initial and j the final bath energy level.
struct HeatLabeledChannel {
  KrausChannel base;
  std::vector<std::pair<int, int>> bath_index;
  double beta = 1.0;
};

struct ThermalState {
  DensityMatrix state;
  double log_z = 0.0;
};

/// exp(-beta H) / Z with the spectrum shifted by its minimum before exponentiating.
ThermalState thermal_state(const CMatrix& h, double beta);

/// Bath eigenbasis in ascending energy with each eigenvector's first
/// non-negligible component made real and positive.
HermEig bath_eigenbasis(const CMatrix& h_bath);

CMatrix joint_hamiltonian(const CMatrix& h_sys, const BathSpec& bath, const CouplingSpec& cpl);

/// Kraus operators sqrt(w_i) <b_j| U_SB |b_i> with w the bath Gibbs weights and
/// heat labels Q_ij = E_i - E_j. Index alpha = i * d_B + j.
HeatLabeledChannel channel_from_joint_unitary(const CMatrix& u_sb, Eigen::Index dim_sys, const BathSpec& bath);

HeatLabeledChannel thermostated_channel(const CMatrix& h_sys, const BathSpec& bath, const CouplingSpec& cpl,
                                        double t);

/// tr_B U_SB (rho (x) pi_B) U_SB^dagger, evaluated on the joint space.
CMatrix dilation_apply(const CMatrix& h_sys, const BathSpec& bath, const CouplingSpec& cpl, double t,
                       const CMatrix& rho);

/// max_alpha || pi^{1/2} A_alpha^dagger pi^{-1/2} - exp(beta Q_alpha / 2) A_alpha^dagger ||.
double weak_coupling_residual(const HeatLabeledChannel& hlc, const DensityMatrix& pi_sys);

}  // namespace qrev

#endif  // QREV_THERMAL_HPP
