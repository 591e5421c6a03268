#include "qrev/classical.hpp"

#include <cmath>
#include <string>

namespace qrev {

ProbVector::ProbVector(RVector p, double tol) : p_(std::move(p)) {
  if (p_.size() == 0) throw Error(ErrorCode::InvalidArgument, "probability vector is empty");
  for (Eigen::Index i = 0; i < p_.size(); ++i)
    if (!std::isfinite(p_(i)) || p_(i) < 0.0)
      throw Error(ErrorCode::InvalidArgument, "probability vector has a negative or non-finite entry");
  if (std::abs(p_.sum() - 1.0) > tol)
    throw Error(ErrorCode::InvalidArgument, "probabilities sum to " + std::to_string(p_.sum()));
}

StochasticMatrix::StochasticMatrix(RMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw Error(ErrorCode::NotStochastic, "transition matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < m_.cols(); ++i) {
    for (Eigen::Index j = 0; j < m_.rows(); ++j)
      if (!std::isfinite(m_(j, i)) || m_(j, i) < 0.0)
        throw Error(ErrorCode::NotStochastic, "transition matrix has a negative or non-finite entry");
    if (std::abs(m_.col(i).sum() - 1.0) > tol)
      throw Error(ErrorCode::NotStochastic, "column " + std::to_string(i) + " sums to " +
                                                std::to_string(m_.col(i).sum()));
  }
}

ProbVector stationary(const StochasticMatrix& m, double gap_tol) {
  const Eigen::Index n = m.size();
  const RMatrix shifted = m.m() - RMatrix::Identity(n, n);
  Eigen::JacobiSVD<RMatrix> svd(shifted, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  Eigen::Index nullity = 0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (sv(k) <= gap_tol) ++nullity;
  if (nullity != 1)
    throw Error(ErrorCode::NonUniqueStationary, "unit eigenvalue has multiplicity " + std::to_string(nullity));
  RVector p = svd.matrixV().col(n - 1);
  p /= p.sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p(i) < -1e-12) throw Error(ErrorCode::NonPositiveStationary, "stationary vector has a negative entry");
    if (p(i) < 0.0) p(i) = 0.0;
  }
  p /= p.sum();
  return ProbVector(std::move(p));
}

StochasticMatrix markov_reverse(const StochasticMatrix& m, const ProbVector& p, double balance_tol) {
  const Eigen::Index n = m.size();
  if (p.size() != n) throw Error(ErrorCode::DimensionMismatch, "markov_reverse: distribution size mismatch");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(p[i] > 0.0))
      throw Error(ErrorCode::ZeroProbabilityState, "markov_reverse: state " + std::to_string(i) + " has zero probability");
  const double residual = (m.m() * p.p() - p.p()).cwiseAbs().maxCoeff();
  if (residual > balance_tol)
    throw Error(ErrorCode::NotBalanced, "markov_reverse: ||M p - p|| = " + std::to_string(residual));
  RMatrix rev(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) rev(i, j) = p[i] * m.m()(j, i) / p[j];
  return StochasticMatrix(std::move(rev), std::max(1e-12, 2 * balance_tol / p.p().minCoeff()));
}

StochasticMatrix extract_markov(const SuperMatrix& sm, const CMatrix& basis) {
  const Eigen::Index d = sm.dim;
  if (basis.rows() != d || basis.cols() != d)
    throw Error(ErrorCode::DimensionMismatch, "extract_markov: basis dimension mismatch");
  if (distance(basis.adjoint() * basis, CMatrix::Identity(d, d)) > 1e-10)
    throw Error(ErrorCode::BasisNotOrthonormal, "extract_markov: basis is not unitary within 1e-10");
  RMatrix m(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const CMatrix proj = basis.col(c) * basis.col(c).adjoint();
    const CMatrix out = sm.apply(proj);
    for (Eigen::Index a = 0; a < d; ++a) {
      double v = (basis.col(a).adjoint() * out * basis.col(a))(0, 0).real();
      if (v < 0.0 && v >= -1e-9) v = 0.0;
      m(a, c) = v;
    }
  }
  return StochasticMatrix(std::move(m), 1e-9);
}

StochasticMatrix extract_markov(const SuperMatrix& sm) {
  return extract_markov(sm, CMatrix::Identity(sm.dim, sm.dim));
}

KrausChannel embed_markov(const StochasticMatrix& m) {
  const Eigen::Index n = m.size();
  std::vector<CMatrix> ops;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (m.m()(j, i) == 0.0) continue;
      CMatrix a = CMatrix::Zero(n, n);
      a(j, i) = std::sqrt(m.m()(j, i));
      ops.push_back(std::move(a));
    }
  return KrausChannel(std::move(ops));
}

}  // namespace qrev
