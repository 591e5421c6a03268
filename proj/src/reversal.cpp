#include "qrev/reversal.hpp"

#include <string>

namespace qrev {

PiDual::PiDual(const DensityMatrix& pi, double rank_tol)
    : pi_(pi), sqrt_pi_(pd_power(pi.mat(), 0.5, rank_tol)), inv_sqrt_pi_(pd_power(pi.mat(), -0.5, rank_tol)) {}

SuperMatrix PiDual::forward_super() const {
  return {pi_.dim(), kron(sqrt_pi_.transpose(), sqrt_pi_)};
}

SuperMatrix PiDual::inverse_super() const {
  return {pi_.dim(), kron(inv_sqrt_pi_.transpose(), inv_sqrt_pi_)};
}

CMatrix d_pi(const PiDual& pd, const CMatrix& x, Direction direction) {
  if (x.rows() != pd.pi().dim() || x.cols() != pd.pi().dim())
    throw Error(ErrorCode::DimensionMismatch, "d_pi: operator dimension does not match pi");
  const CMatrix& s = direction == Direction::Forward ? pd.sqrt_pi() : pd.inv_sqrt_pi();
  return s * x * s;
}

KrausChannel reverse_channel(const KrausChannel& ch, const DensityMatrix& pi, const ReversalOptions& opts) {
  return reverse_channel(ch, PiDual(pi, opts.rank_tol), opts);
}

KrausChannel reverse_channel(const KrausChannel& ch, const PiDual& pd, const ReversalOptions& opts) {
  const CMatrix& pi = pd.pi().mat();
  if (ch.dim() != pi.rows()) throw Error(ErrorCode::DimensionMismatch, "reverse_channel: pi dimension mismatch");
  if (opts.on_unbalanced == BalancePolicy::Fail) {
    const double residual = distance(apply_map(ch, pi), pi);
    if (residual > opts.balance_tol)
      throw Error(ErrorCode::NotBalanced, "reverse_channel: ||S pi - pi|| = " + std::to_string(residual) +
                                              " exceeds balance_tol " + std::to_string(opts.balance_tol));
  }
  std::vector<CMatrix> ops;
  ops.reserve(ch.size());
  for (const auto& a : ch.kraus) ops.emplace_back(pd.sqrt_pi() * a.adjoint() * pd.inv_sqrt_pi());
  std::optional<std::vector<double>> heat;
  if (ch.heat) {
    heat.emplace();
    heat->reserve(ch.heat->size());
    for (double q : *ch.heat) heat->push_back(-q);
  }
  return KrausChannel(std::move(ops), std::move(heat));
}

SuperMatrix reverse_super(const SuperMatrix& sm, const PiDual& pd) {
  if (sm.dim != pd.pi().dim()) throw Error(ErrorCode::DimensionMismatch, "reverse_super: pi dimension mismatch");
  // The Hilbert-Schmidt adjoint of a superoperator matrix is its conjugate transpose.
  return {sm.dim, pd.forward_super().mat * sm.mat.adjoint() * pd.inverse_super().mat};
}

SuperMatrix reverse_generator(const SuperMatrix& generator, const DensityMatrix& pi) {
  return reverse_super(generator, PiDual(pi));
}

BalanceReport is_detailed_balanced(const KrausChannel& ch, const DensityMatrix& pi, double tol) {
  const PiDual pd(pi);
  BalanceReport rep;
  rep.balance_residual = distance(apply_map(ch, pi.mat()), pi.mat());
  rep.balanced = rep.balance_residual <= tol;
  const KrausChannel rev = reverse_channel(ch, pd, {.on_unbalanced = BalancePolicy::Ignore});
  rep.deviation = channel_distance(rev, ch);
  rep.detailed_balanced = rep.balanced && rep.deviation <= tol;
  return rep;
}

}  // namespace qrev
