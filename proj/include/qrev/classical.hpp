#ifndef QREV_CLASSICAL_HPP
#define QREV_CLASSICAL_HPP

#include "qrev/channel.hpp"

namespace qrev {

/// Probability distribution over a finite state set.
class ProbVector {
 public:
  explicit ProbVector(RVector p, double tol = 1e-12);

  const RVector& p() const noexcept { return p_; }
  Eigen::Index size() const noexcept { return p_.size(); }
  double operator[](Eigen::Index i) const { return p_(i); }

 private:
  RVector p_;
};

/// Column-stochastic transition matrix: m(j, i) is the probability of i -> j.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(RMatrix m, double tol = 1e-12);

  const RMatrix& m() const noexcept { return m_; }
  Eigen::Index size() const noexcept { return m_.rows(); }

 private:
  RMatrix m_;
};

ProbVector stationary(const StochasticMatrix& m, double gap_tol = 1e-8);

/// diag(p) M^T diag(p)^{-1}.
StochasticMatrix markov_reverse(const StochasticMatrix& m, const ProbVector& p, double balance_tol = 1e-8);

/// M_ac = S_aacc in the orthonormal basis given by the columns of `basis`.
StochasticMatrix extract_markov(const SuperMatrix& sm, const CMatrix& basis);
StochasticMatrix extract_markov(const SuperMatrix& sm);

/// Kraus set {sqrt(M_ji) |e_j><e_i|}.
KrausChannel embed_markov(const StochasticMatrix& m);

}  // namespace qrev

#endif  // QREV_CLASSICAL_HPP
