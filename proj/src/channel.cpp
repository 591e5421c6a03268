#include "qrev/channel.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace qrev {

DensityMatrix::DensityMatrix(CMatrix mat, double tol) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0)
    throw Error(ErrorCode::InvalidState, "density matrix must be square and non-empty");
  if (!all_finite(mat_)) throw Error(ErrorCode::InvalidState, "density matrix has non-finite entries");
  if (distance(mat_, mat_.adjoint()) > tol) throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
  const cplx tr = mat_.trace();
  if (std::abs(tr - 1.0) > tol)
    throw Error(ErrorCode::InvalidState, "density matrix trace is " + std::to_string(tr.real()));
  const CMatrix sym = 0.5 * (mat_ + mat_.adjoint());
  const double lmin = Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (lmin < -tol)
    throw Error(ErrorCode::InvalidState, "density matrix has eigenvalue " + std::to_string(lmin));
}

DensityMatrix DensityMatrix::normalized(const CMatrix& mat, double tol) {
  CMatrix sym = 0.5 * (mat + mat.adjoint());
  const double tr = sym.trace().real();
  if (!(std::abs(tr) > 0.0)) throw Error(ErrorCode::InvalidState, "cannot normalize a traceless operator");
  return DensityMatrix(sym / tr, tol);
}

KrausChannel::KrausChannel(std::vector<CMatrix> ops, std::optional<std::vector<double>> heat_labels)
    : kraus(std::move(ops)), heat(std::move(heat_labels)) {
  if (kraus.empty()) throw Error(ErrorCode::InvalidChannel, "channel needs at least one Kraus operator");
  const Eigen::Index d = kraus.front().rows();
  for (const auto& a : kraus) {
    if (a.rows() != d || a.cols() != d)
      throw Error(ErrorCode::InvalidChannel, "Kraus operators must all be square with a common dimension");
    if (!all_finite(a)) throw Error(ErrorCode::InvalidChannel, "Kraus operator has non-finite entries");
  }
  if (heat && heat->size() != kraus.size())
    throw Error(ErrorCode::InvalidChannel, "heat labels must match the number of Kraus operators");
}

CMatrix SuperMatrix::caves_layout() const {
  CMatrix out(dim * dim, dim * dim);
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b)
      for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index d = 0; d < dim; ++d) out(a * dim + d, b * dim + c) = element(a, b, c, d);
  return out;
}

CMatrix SuperMatrix::terhal_layout() const {
  CMatrix out(dim * dim, dim * dim);
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b)
      for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index d = 0; d < dim; ++d) out(a * dim + b, d * dim + c) = element(a, b, c, d);
  return out;
}

CMatrix apply_map(const KrausChannel& ch, const CMatrix& x) {
  if (x.rows() != ch.dim() || x.cols() != ch.dim())
    throw Error(ErrorCode::DimensionMismatch, "apply: operator dimension does not match channel");
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (const auto& a : ch.kraus) out.noalias() += a * x * a.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  const CMatrix out = apply_map(ch, rho.mat());
  return DensityMatrix(0.5 * (out + out.adjoint()), 1e-9);
}

KrausChannel adjoint(const KrausChannel& ch) {
  std::vector<CMatrix> ops;
  ops.reserve(ch.size());
  for (const auto& a : ch.kraus) ops.emplace_back(a.adjoint());
  return KrausChannel(std::move(ops));
}

TcpReport check_tcp(const KrausChannel& ch, double tol) {
  CMatrix sum = CMatrix::Zero(ch.dim(), ch.dim());
  for (const auto& a : ch.kraus) sum.noalias() += a.adjoint() * a;
  TcpReport rep;
  rep.max_violation = distance(sum, CMatrix::Identity(ch.dim(), ch.dim()));
  rep.is_tcp = rep.max_violation <= tol;
  return rep;
}

SuperMatrix super_matrix(const KrausChannel& ch) {
  const Eigen::Index d = ch.dim();
  SuperMatrix sm{d, CMatrix::Zero(d * d, d * d)};
  // vec(A X A^dagger) = (conj(A) (x) A) vec(X)
  for (const auto& a : ch.kraus) sm.mat.noalias() += kron(a.conjugate(), a);
  return sm;
}

DensityMatrix fixed_point(const KrausChannel& ch, double gap_tol) {
  if (!check_tcp(ch).is_tcp) throw Error(ErrorCode::InvalidChannel, "fixed_point: channel is not trace preserving");
  const Eigen::Index d = ch.dim();
  const SuperMatrix sm = super_matrix(ch);
  const CMatrix shifted = sm.mat - CMatrix::Identity(d * d, d * d);
  Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  Eigen::Index nullity = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) <= gap_tol) ++nullity;
  if (nullity > 1)
    throw Error(ErrorCode::NonUniqueFixedPoint,
                "unit eigenvalue has multiplicity " + std::to_string(nullity));
  if (nullity == 0)
    throw Error(ErrorCode::NoPositiveFixedPoint,
                "no singular value of S - I below gap_tol (smallest " + std::to_string(sv(sv.size() - 1)) + ")");
  const CMatrix x = unvec(svd.matrixV().col(d * d - 1), d);
  try {
    DensityMatrix pi = DensityMatrix::normalized(x);
    if (distance(sm.apply(pi.mat()), pi.mat()) > 1e-9)
      throw Error(ErrorCode::NoPositiveFixedPoint, "fixed point residual above 1e-9");
    return pi;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoPositiveFixedPoint) throw;
    throw Error(ErrorCode::NoPositiveFixedPoint, e.what());
  }
}

Observation observe(const KrausChannel& ch, const DensityMatrix& rho, std::size_t alpha, double p_floor) {
  if (alpha >= ch.size())
    throw Error(ErrorCode::IndexOutOfRange, "observe: Kraus index " + std::to_string(alpha) + " out of range");
  if (rho.dim() != ch.dim()) throw Error(ErrorCode::DimensionMismatch, "observe: state dimension mismatch");
  const CMatrix& a = ch.kraus[alpha];
  const CMatrix branch = a * rho.mat() * a.adjoint();
  const double p = branch.trace().real();
  if (!(p > p_floor))
    throw Error(ErrorCode::ZeroProbabilityBranch, "observe: branch probability " + std::to_string(p));
  return {p, DensityMatrix::normalized(branch, 1e-9)};
}

KrausChannel compose(const KrausChannel& after, const KrausChannel& before) {
  if (after.dim() != before.dim()) throw Error(ErrorCode::DimensionMismatch, "compose: dimension mismatch");
  std::vector<CMatrix> ops;
  ops.reserve(after.size() * before.size());
  for (const auto& b : after.kraus)
    for (const auto& a : before.kraus) ops.emplace_back(b * a);
  return KrausChannel(std::move(ops));
}

KrausChannel mix(const std::vector<KrausChannel>& channels, const std::vector<double>& weights) {
  if (channels.empty() || channels.size() != weights.size())
    throw Error(ErrorCode::InvalidArgument, "mix: need one weight per channel");
  std::vector<CMatrix> ops;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (weights[k] < 0.0) throw Error(ErrorCode::InvalidArgument, "mix: negative weight");
    if (channels[k].dim() != channels.front().dim())
      throw Error(ErrorCode::DimensionMismatch, "mix: dimension mismatch");
    const double s = std::sqrt(weights[k]);
    for (const auto& a : channels[k].kraus) ops.emplace_back(s * a);
  }
  return KrausChannel(std::move(ops));
}

CMatrix choi(const SuperMatrix& sm) {
  const Eigen::Index d = sm.dim;
  CMatrix out(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) out(i * d + a, j * d + b) = sm.element(a, b, j, i);
  return out;
}

double choi_min_eigenvalue(const SuperMatrix& sm) {
  const CMatrix c = choi(sm);
  const CMatrix sym = 0.5 * (c + c.adjoint());
  return Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

KrausChannel kraus_from_super(const SuperMatrix& sm, double tol) {
  const CMatrix c = choi(sm);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (c + c.adjoint()));
  std::vector<CMatrix> ops;
  for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < -tol)
      throw Error(ErrorCode::InvalidChannel, "kraus_from_super: map is not completely positive");
    if (lambda <= tol) continue;
    ops.emplace_back(std::sqrt(lambda) * unvec(es.eigenvectors().col(k), sm.dim));
  }
  if (ops.empty()) ops.emplace_back(CMatrix::Zero(sm.dim, sm.dim));
  return KrausChannel(std::move(ops));
}

SuperMatrix exp_generator(const SuperMatrix& generator, double t) {
  const CMatrix scaled = generator.mat * cplx(t, 0.0);
  return {generator.dim, scaled.exp()};
}

double super_distance(const SuperMatrix& a, const SuperMatrix& b) {
  if (a.dim != b.dim) throw Error(ErrorCode::DimensionMismatch, "super_distance: dimension mismatch");
  return distance(a.mat, b.mat);
}

double channel_distance(const KrausChannel& a, const KrausChannel& b) {
  return super_distance(super_matrix(a), super_matrix(b));
}

cplx hs_inner(const CMatrix& a, const CMatrix& b) { return (a.adjoint() * b).trace(); }

}  // namespace qrev
