#ifndef QREV_CHANNEL_HPP
#define QREV_CHANNEL_HPP

#include <optional>
#include <vector>

#include "qrev/matcore.hpp"

namespace qrev {

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and spectrum at `tol`.
  explicit DensityMatrix(CMatrix mat, double tol = 1e-10);

  /// Symmetrizes (M + M^dagger)/2 and rescales to unit trace before validating.
  static DensityMatrix normalized(const CMatrix& mat, double tol = 1e-10);

  const CMatrix& mat() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

 private:
  CMatrix mat_;
};

/// Operator-sum representation {A_alpha}, optionally carrying one heat label
/// per operator. Not required to be trace preserving; see check_tcp.
struct KrausChannel {
  std::vector<CMatrix> kraus;
  std::optional<std::vector<double>> heat;

  KrausChannel() = default;
  explicit KrausChannel(std::vector<CMatrix> ops, std::optional<std::vector<double>> heat_labels = {});

  Eigen::Index dim() const noexcept { return kraus.empty() ? 0 : kraus.front().rows(); }
  std::size_t size() const noexcept { return kraus.size(); }
};

/// Matrix of a superoperator acting on column-stacked operators.
struct SuperMatrix {
  Eigen::Index dim = 0;
  CMatrix mat;

  /// S_abcd = <e_a| S(|e_d><e_c|) |e_b>.
  cplx element(Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d) const {
    return mat(b * dim + a, c * dim + d);
  }

  CMatrix apply(const CMatrix& x) const { return unvec(mat * vec(x), dim); }

  /// Same elements laid out as S_{ad,bc} (row a*dim+d, column b*dim+c).
  CMatrix caves_layout() const;
  /// Same elements laid out as S_{ab,dc} (row a*dim+b, column d*dim+c).
  CMatrix terhal_layout() const;
};

struct TcpReport {
  double max_violation = 0.0;
  bool is_tcp = false;
};

struct Observation {
  double probability = 0.0;
  DensityMatrix state;
};

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);
/// Kraus sum on an arbitrary operator.
CMatrix apply_map(const KrausChannel& ch, const CMatrix& x);

KrausChannel adjoint(const KrausChannel& ch);

TcpReport check_tcp(const KrausChannel& ch, double tol = 1e-9);

SuperMatrix super_matrix(const KrausChannel& ch);

/// Unique invariant state, from the null space of S - I.
DensityMatrix fixed_point(const KrausChannel& ch, double gap_tol = 1e-8);

Observation observe(const KrausChannel& ch, const DensityMatrix& rho, std::size_t alpha,
                    double p_floor = 1e-15);

/// `after` o `before`; Kraus operators are all products B_beta A_alpha.
KrausChannel compose(const KrausChannel& after, const KrausChannel& before);

/// Convex combination sum_k w_k S_k, realized by scaling Kraus operators by sqrt(w_k).
KrausChannel mix(const std::vector<KrausChannel>& channels, const std::vector<double>& weights);

/// Choi matrix sum_ij |i><j| (x) S(|i><j|).
CMatrix choi(const SuperMatrix& sm);
/// Smallest eigenvalue of the Hermitized Choi matrix.
double choi_min_eigenvalue(const SuperMatrix& sm);

/// Kraus operators recovered from the Choi eigendecomposition; eigenvalues
/// below -tol are rejected, those in [-tol, tol] dropped.
KrausChannel kraus_from_super(const SuperMatrix& sm, double tol = 1e-10);

/// exp(L t) for a generator given as a superoperator matrix.
SuperMatrix exp_generator(const SuperMatrix& generator, double t);

double channel_distance(const KrausChannel& a, const KrausChannel& b);
double super_distance(const SuperMatrix& a, const SuperMatrix& b);

/// Hilbert-Schmidt inner product tr(A^dagger B).
cplx hs_inner(const CMatrix& a, const CMatrix& b);

}  // namespace qrev

#endif  // QREV_CHANNEL_HPP
