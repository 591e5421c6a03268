#ifndef QREV_REVERSAL_HPP
#define QREV_REVERSAL_HPP

#include "qrev/channel.hpp"

namespace qrev {

/// The conjugation D_pi X = pi^{1/2} X pi^{1/2} and its inverse, with the
/// square roots computed once.
class PiDual {
 public:
  explicit PiDual(const DensityMatrix& pi, double rank_tol = 1e-12);

  const DensityMatrix& pi() const noexcept { return pi_; }
  const CMatrix& sqrt_pi() const noexcept { return sqrt_pi_; }
  const CMatrix& inv_sqrt_pi() const noexcept { return inv_sqrt_pi_; }

  /// D_pi and D_pi^{-1} as superoperator matrices on column-stacked operators.
  SuperMatrix forward_super() const;
  SuperMatrix inverse_super() const;

 private:
  DensityMatrix pi_;
  CMatrix sqrt_pi_;
  CMatrix inv_sqrt_pi_;
};

enum class Direction { Forward, Inverse };

CMatrix d_pi(const PiDual& pd, const CMatrix& x, Direction direction);

enum class BalancePolicy { Fail, Ignore };

struct ReversalOptions {
  double balance_tol = 1e-8;
  BalancePolicy on_unbalanced = BalancePolicy::Fail;
  double rank_tol = 1e-12;
};

/// pi-dual of a channel: Kraus operators pi^{1/2} A^dagger pi^{-1/2} in the
/// same order as the input; heat labels are negated.
KrausChannel reverse_channel(const KrausChannel& ch, const DensityMatrix& pi, const ReversalOptions& opts = {});
KrausChannel reverse_channel(const KrausChannel& ch, const PiDual& pd, const ReversalOptions& opts = {});

/// D_pi S^x D_pi^{-1} on superoperator matrices. Valid for channels and
/// generators alike.
SuperMatrix reverse_super(const SuperMatrix& sm, const PiDual& pd);

SuperMatrix reverse_generator(const SuperMatrix& generator, const DensityMatrix& pi);

struct BalanceReport {
  bool balanced = false;
  bool detailed_balanced = false;
  /// ||S~ - S|| on superoperator matrices.
  double deviation = 0.0;
  /// ||S pi - pi||.
  double balance_residual = 0.0;
};

BalanceReport is_detailed_balanced(const KrausChannel& ch, const DensityMatrix& pi, double tol = 1e-8);

}  // namespace qrev

#endif  // QREV_REVERSAL_HPP
