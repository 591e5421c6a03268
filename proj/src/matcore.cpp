#include "qrev/matcore.hpp"

#include <cmath>
#include <string>

namespace qrev {

namespace {

void require_square(const CMatrix& m, const char* where) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::NotSquare, std::string(where) + ": matrix is " + std::to_string(m.rows()) +
                                          "x" + std::to_string(m.cols()));
}

}  // namespace

bool is_hermitian(const CMatrix& h, double rel_tol) {
  if (h.rows() != h.cols()) return false;
  return distance(h, h.adjoint()) <= rel_tol * opnorm(h);
}

HermEig herm_eig(const CMatrix& h) {
  require_square(h, "herm_eig");
  if (!all_finite(h)) throw Error(ErrorCode::NotHermitian, "herm_eig: non-finite entries");
  if (!is_hermitian(h)) throw Error(ErrorCode::NotHermitian, "herm_eig: ||H - H^dagger|| exceeds 1e-10 ||H||");
  if (h.size() == 0) return {};
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  return {es.eigenvalues(), es.eigenvectors()};
}

CMatrix pd_power(const CMatrix& p, double s, double rank_tol) {
  const HermEig eig = herm_eig(p);
  const double lmax = eig.values.size() ? eig.values.maxCoeff() : 0.0;
  const double lmin = eig.values.size() ? eig.values.minCoeff() : 0.0;
  if (!(lmax > 0.0) || !(lmin > rank_tol * lmax))
    throw Error(ErrorCode::SingularOrIndefinite,
                "pd_power: smallest eigenvalue " + std::to_string(lmin) + " is not above " +
                    std::to_string(rank_tol) + " * lambda_max");
  const RVector powered = eig.values.array().pow(s);
  return eig.vectors * powered.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

CMatrix unitary_of(const CMatrix& h, double t) {
  const HermEig eig = herm_eig(h);
  CVector phases(eig.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(cplx(0.0, -eig.values(k) * t));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

CMatrix unvec(const CVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw Error(ErrorCode::DimensionMismatch, "unvec: length is not dim^2");
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k)
    if (!std::isfinite(m.data()[k].real()) || !std::isfinite(m.data()[k].imag())) return false;
  return true;
}

}  // namespace qrev
