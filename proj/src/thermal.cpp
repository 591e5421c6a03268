#include "qrev/thermal.hpp"

#include <cmath>
#include <string>

#include "qrev/reversal.hpp"

namespace qrev {

ThermalState thermal_state(const CMatrix& h, double beta) {
  if (!std::isfinite(beta) || beta < 0.0)
    throw Error(ErrorCode::InvalidArgument, "thermal_state: beta must be finite and non-negative");
  const HermEig eig = herm_eig(h);
  if (eig.values.size() == 0) throw Error(ErrorCode::InvalidArgument, "thermal_state: empty Hamiltonian");
  const double e0 = eig.values.minCoeff();
  const RVector boltz = (-beta * (eig.values.array() - e0)).exp();
  const double z_shifted = boltz.sum();
  const RVector w = boltz / z_shifted;
  CMatrix rho = eig.vectors * w.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return {DensityMatrix(std::move(rho)), std::log(z_shifted) - beta * e0};
}

HermEig bath_eigenbasis(const CMatrix& h_bath) {
  HermEig eig = herm_eig(h_bath);
  for (Eigen::Index k = 0; k < eig.vectors.cols(); ++k) {
    auto col = eig.vectors.col(k);
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (std::abs(col(r)) > 1e-12) {
        col *= std::conj(col(r)) / std::abs(col(r));
        col(r) = std::abs(col(r));
        break;
      }
    }
  }
  return eig;
}

CMatrix joint_hamiltonian(const CMatrix& h_sys, const BathSpec& bath, const CouplingSpec& cpl) {
  const Eigen::Index ds = h_sys.rows();
  const Eigen::Index db = bath.h_bath.rows();
  if (h_sys.cols() != ds || bath.h_bath.cols() != db)
    throw Error(ErrorCode::DimensionMismatch, "joint_hamiltonian: Hamiltonians must be square");
  if (cpl.h_int.rows() != ds * db || cpl.h_int.cols() != ds * db)
    throw Error(ErrorCode::DimensionMismatch, "joint_hamiltonian: h_int must act on the d_S*d_B joint space");
  if (!is_hermitian(h_sys) || !is_hermitian(bath.h_bath) || !is_hermitian(cpl.h_int))
    throw Error(ErrorCode::NotHermitian, "joint_hamiltonian: inputs must be Hermitian");
  return kron(h_sys, CMatrix::Identity(db, db)) + kron(CMatrix::Identity(ds, ds), bath.h_bath) +
         cpl.epsilon * cpl.h_int;
}

HeatLabeledChannel channel_from_joint_unitary(const CMatrix& u_sb, Eigen::Index dim_sys, const BathSpec& bath) {
  const Eigen::Index db = bath.h_bath.rows();
  if (!std::isfinite(bath.beta) || bath.beta < 0.0)
    throw Error(ErrorCode::InvalidArgument, "bath beta must be finite and non-negative");
  if (u_sb.rows() != dim_sys * db || u_sb.cols() != dim_sys * db)
    throw Error(ErrorCode::DimensionMismatch, "joint unitary does not match d_S * d_B");
  const HermEig beig = bath_eigenbasis(bath.h_bath);
  // Gibbs weights in the same eigenbasis ordering.
  const double e0 = beig.values.minCoeff();
  RVector w = (-bath.beta * (beig.values.array() - e0)).exp();
  w /= w.sum();

  // W = (I (x) V_B)^dagger U (I (x) V_B); block (j, i) over the bath index is <b_j|U|b_i>.
  const CMatrix lift = kron(CMatrix::Identity(dim_sys, dim_sys), beig.vectors);
  const CMatrix w_sb = lift.adjoint() * u_sb * lift;

  std::vector<CMatrix> ops;
  std::vector<double> heat;
  std::vector<std::pair<int, int>> index;
  for (Eigen::Index i = 0; i < db; ++i)
    for (Eigen::Index j = 0; j < db; ++j) {
      CMatrix a(dim_sys, dim_sys);
      for (Eigen::Index s = 0; s < dim_sys; ++s)
        for (Eigen::Index r = 0; r < dim_sys; ++r) a(s, r) = w_sb(s * db + j, r * db + i);
      ops.push_back(std::sqrt(w(i)) * a);
      heat.push_back(beig.values(i) - beig.values(j));
      index.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  return {KrausChannel(std::move(ops), std::move(heat)), std::move(index), bath.beta};
}

HeatLabeledChannel thermostated_channel(const CMatrix& h_sys, const BathSpec& bath, const CouplingSpec& cpl,
                                        double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidArgument, "thermostated_channel: time must be positive");
  const CMatrix u = unitary_of(joint_hamiltonian(h_sys, bath, cpl), t);
  return channel_from_joint_unitary(u, h_sys.rows(), bath);
}

CMatrix dilation_apply(const CMatrix& h_sys, const BathSpec& bath, const CouplingSpec& cpl, double t,
                       const CMatrix& rho) {
  const CMatrix u = unitary_of(joint_hamiltonian(h_sys, bath, cpl), t);
  const CMatrix joint = kron(rho, thermal_state(bath.h_bath, bath.beta).state.mat());
  return partial_trace(u * joint * u.adjoint(), h_sys.rows(), bath.h_bath.rows(), Keep::System);
}

double weak_coupling_residual(const HeatLabeledChannel& hlc, const DensityMatrix& pi_sys) {
  const KrausChannel& ch = hlc.base;
  if (!ch.heat) throw Error(ErrorCode::InvalidChannel, "weak_coupling_residual: channel has no heat labels");
  const PiDual pd(pi_sys);
  double worst = 0.0;
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const CMatrix& a = ch.kraus[k];
    const CMatrix reversed = pd.sqrt_pi() * a.adjoint() * pd.inv_sqrt_pi();
    const CMatrix joint_reversed = std::exp(0.5 * hlc.beta * (*ch.heat)[k]) * a.adjoint();
    worst = std::max(worst, distance(reversed, joint_reversed));
  }
  return worst;
}

}  // namespace qrev
