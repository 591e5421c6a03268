#ifndef QREV_MATCORE_HPP
#define QREV_MATCORE_HPP

#include <complex>

#include <Eigen/Dense>

#include "qrev/errors.hpp"

namespace qrev {

using cplx = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Matrix<cplx>;
using CVector = Vector<cplx>;
using RMatrix = Matrix<double>;
using RVector = Vector<double>;

/// Eigendecomposition of a Hermitian matrix: H = V diag(values) V^dagger,
/// values ascending, V unitary (eigenvectors in columns).
struct HermEig {
  RVector values;
  CMatrix vectors;
};

enum class Keep { System, Environment };

/// Largest singular value.
template <typename Derived>
double opnorm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return svd.singularValues()(0);
}

template <typename DerivedA, typename DerivedB>
double distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return opnorm((a - b).eval());
}

/// True when ||H - H^dagger|| <= rel_tol * ||H||.
bool is_hermitian(const CMatrix& h, double rel_tol = 1e-10);

HermEig herm_eig(const CMatrix& h);

/// P^s for positive-definite P. Refuses P whose smallest eigenvalue is at or
/// below rank_tol * lambda_max.
CMatrix pd_power(const CMatrix& p, double s, double rank_tol = 1e-12);

/// exp(-i H t) with hbar = 1.
CMatrix unitary_of(const CMatrix& h, double t);

/// Kronecker product; the left factor indexes the slow (system) subspace.
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b) {
  Matrix<typename DerivedA::Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Partial trace over a (dim_sys * dim_env)-dimensional operator with the
/// system factor first.
template <typename Derived>
Matrix<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& m,
                                               Eigen::Index dim_sys, Eigen::Index dim_env,
                                               Keep keep) {
  const Eigen::Index n = dim_sys * dim_env;
  if (dim_sys <= 0 || dim_env <= 0 || m.rows() != n || m.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "partial_trace: operator is not (dim_sys*dim_env)^2");
  using Scalar = typename Derived::Scalar;
  if (keep == Keep::System) {
    Matrix<Scalar> out = Matrix<Scalar>::Zero(dim_sys, dim_sys);
    for (Eigen::Index s = 0; s < dim_sys; ++s)
      for (Eigen::Index t = 0; t < dim_sys; ++t)
        for (Eigen::Index e = 0; e < dim_env; ++e) out(s, t) += m(s * dim_env + e, t * dim_env + e);
    return out;
  }
  Matrix<Scalar> out = Matrix<Scalar>::Zero(dim_env, dim_env);
  for (Eigen::Index e = 0; e < dim_env; ++e)
    for (Eigen::Index f = 0; f < dim_env; ++f)
      for (Eigen::Index s = 0; s < dim_sys; ++s) out(e, f) += m(s * dim_env + e, s * dim_env + f);
  return out;
}

/// Column-stacking vectorization and its inverse.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Eigen::Index dim);

bool all_finite(const CMatrix& m);

}  // namespace qrev

#endif  // QREV_MATCORE_HPP
