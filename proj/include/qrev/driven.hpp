#ifndef QREV_DRIVEN_HPP
#define QREV_DRIVEN_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qrev/classical.hpp"
#include "qrev/reversal.hpp"
#include "qrev/thermal.hpp"

namespace qrev {

/// Time-ordered heat-labeled channels with the system Hamiltonian of each
/// interval and the bases of the two endpoint projective measurements.
struct Protocol {
  std::vector<HeatLabeledChannel> steps;
  std::vector<CMatrix> h_sys;
  double beta = 1.0;
  CMatrix init_basis;
  CMatrix final_basis;
  /// Coupling strength the steps were built with, when known. Sets the
  /// default balance tolerance of reverse_protocol.
  std::optional<double> epsilon;

  std::size_t length() const noexcept { return steps.size(); }
  Eigen::Index dim() const noexcept { return h_sys.empty() ? 0 : h_sys.front().rows(); }
};

/// Recipe for a protocol of thermostated steps sharing one bath and coupling.
struct ThermostatedProtocolSpec {
  std::vector<CMatrix> h_sys;
  CMatrix h_bath;
  CMatrix h_int;
  double beta = 1.0;
  double epsilon = 1e-2;
  double time = 1.0;
};

/// Eigenbasis of a Hermitian matrix with the bath phase convention applied.
CMatrix energy_basis(const CMatrix& h);

/// Builds a protocol with endpoint bases set to the energy eigenbases of the
/// first and last Hamiltonians; validates shared dimension and beta.
Protocol make_protocol(std::vector<HeatLabeledChannel> steps, std::vector<CMatrix> h_sys, double beta,
                       std::optional<double> epsilon = {});
Protocol build_protocol(const ThermostatedProtocolSpec& spec);
void validate_protocol(const Protocol& p);

struct Trajectory {
  int e0 = 0;
  std::vector<int> alphas;
  int e_tau = 0;
  std::vector<double> heats;
  double q_total = 0.0;
};

/// Correctly rounded sum; independent of order and odd under negation.
double exact_sum(const std::vector<double>& xs);

Trajectory make_trajectory(const Protocol& p, int e0, std::vector<int> alphas, int e_tau);
/// (e_tau; alpha_tau .. alpha_1; e0) with heats negated.
Trajectory reverse_trajectory(const Trajectory& tr);

/// Occupations of `basis` states in the Gibbs state of h.
ProbVector thermal_occupations(const CMatrix& h, const CMatrix& basis, double beta);

double trajectory_prob(const Protocol& p, const Trajectory& tr, const ProbVector& initial);
/// Probability of the Kraus record and final outcome given the initial basis state.
double conditional_prob(const Protocol& p, const Trajectory& tr);

struct ProtocolReversalOptions {
  /// Multiplies the protocol epsilon to give the per-step balance tolerance.
  double balance_scale = 10.0;
  /// Used when larger than the scaled tolerance, and when epsilon is unknown.
  double min_balance_tol = 1e-8;
};

Protocol reverse_protocol(const Protocol& p, const ProtocolReversalOptions& opts = {});

struct MrResult {
  double p_fwd = 0.0;
  double p_rev = 0.0;
  double log_ratio = 0.0;
  double minus_beta_q = 0.0;
  double residual = 0.0;
};

MrResult mr_check(const Protocol& p, const Trajectory& tr, double p_floor = 1e-15);
/// Same, reusing an already reversed protocol.
MrResult mr_check(const Protocol& p, const Protocol& reversed, const Trajectory& tr, double p_floor = 1e-15);

struct WeightedTrajectory {
  Trajectory trajectory;
  double probability = 0.0;
};

std::vector<WeightedTrajectory> enumerate_trajectories(const Protocol& p, const ProbVector& initial,
                                                       double p_floor = 1e-15, double cap = 1e7);

std::vector<Trajectory> sample_trajectories(const Protocol& p, const ProbVector& initial, std::size_t n,
                                            std::uint64_t seed, unsigned workers = 1);

struct JarzynskiResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

/// <exp(-beta W)> with W = Delta E_S - Q over the enumerated ensemble started
/// from the Gibbs occupations of the first Hamiltonian, against Z_tau / Z_1.
JarzynskiResult jarzynski_check(const Protocol& p, double cap = 1e7);

}  // namespace qrev

#endif  // QREV_DRIVEN_HPP
