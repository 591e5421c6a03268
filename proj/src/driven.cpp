#include "qrev/driven.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

namespace qrev {

namespace {

double basis_error(const CMatrix& b) {
  return distance(b.adjoint() * b, CMatrix::Identity(b.cols(), b.cols()));
}

/// True when the columns of `basis` diagonalize h.
bool is_eigenbasis(const CMatrix& h, const CMatrix& basis, double tol = 1e-9) {
  const CMatrix rotated = basis.adjoint() * h * basis;
  CMatrix off = rotated;
  off.diagonal().setZero();
  return opnorm(off) <= tol * std::max(1.0, opnorm(h));
}

RVector basis_energies(const CMatrix& h, const CMatrix& basis) {
  return (basis.adjoint() * h * basis).diagonal().real();
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent generator for one trajectory ordinal.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t ordinal) {
    std::uint64_t s = seed;
    const std::uint64_t a = splitmix64(s);
    s = a ^ (ordinal * 0xd1b54a32d192ed03ULL);
    engine_.seed(splitmix64(s));
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

template <typename Weights>
int pick(const Weights& w, double u) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(w.size()); ++k) total += w[k];
  double acc = 0.0;
  const double target = u * total;
  int last = -1;
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(w.size()); ++k) {
    if (w[k] <= 0.0) continue;
    last = static_cast<int>(k);
    acc += w[k];
    if (target < acc) return last;
  }
  return last;
}

void check_indices(const Protocol& p, const Trajectory& tr) {
  const int d = static_cast<int>(p.dim());
  if (tr.alphas.size() != p.length())
    throw Error(ErrorCode::IndexOutOfRange, "trajectory length does not match the protocol");
  if (tr.e0 < 0 || tr.e0 >= d || tr.e_tau < 0 || tr.e_tau >= d)
    throw Error(ErrorCode::IndexOutOfRange, "endpoint index out of range");
  for (std::size_t t = 0; t < tr.alphas.size(); ++t)
    if (tr.alphas[t] < 0 || static_cast<std::size_t>(tr.alphas[t]) >= p.steps[t].base.size())
      throw Error(ErrorCode::IndexOutOfRange, "Kraus index out of range at step " + std::to_string(t + 1));
}

}  // namespace

CMatrix energy_basis(const CMatrix& h) { return bath_eigenbasis(h).vectors; }

void validate_protocol(const Protocol& p) {
  if (p.steps.empty()) throw Error(ErrorCode::InvalidArgument, "protocol has no steps");
  if (p.h_sys.size() != p.steps.size())
    throw Error(ErrorCode::DimensionMismatch, "protocol needs one system Hamiltonian per step");
  if (!std::isfinite(p.beta) || p.beta < 0.0) throw Error(ErrorCode::InvalidArgument, "protocol beta invalid");
  const Eigen::Index d = p.dim();
  for (std::size_t t = 0; t < p.steps.size(); ++t) {
    if (p.steps[t].base.dim() != d || p.h_sys[t].rows() != d || p.h_sys[t].cols() != d)
      throw Error(ErrorCode::DimensionMismatch, "protocol step " + std::to_string(t + 1) + " has the wrong dimension");
    if (!p.steps[t].base.heat)
      throw Error(ErrorCode::InvalidChannel, "protocol step " + std::to_string(t + 1) + " lacks heat labels");
    if (p.steps[t].beta != p.beta)
      throw Error(ErrorCode::InvalidArgument, "protocol steps must share beta");
  }
  for (const CMatrix* b : {&p.init_basis, &p.final_basis}) {
    if (b->rows() != d || b->cols() != d) throw Error(ErrorCode::DimensionMismatch, "endpoint basis dimension");
    if (basis_error(*b) > 1e-10) throw Error(ErrorCode::BasisNotOrthonormal, "endpoint basis is not unitary");
  }
}

Protocol make_protocol(std::vector<HeatLabeledChannel> steps, std::vector<CMatrix> h_sys, double beta,
                       std::optional<double> epsilon) {
  if (h_sys.empty()) throw Error(ErrorCode::InvalidArgument, "protocol has no steps");
  Protocol p;
  p.init_basis = energy_basis(h_sys.front());
  p.final_basis = energy_basis(h_sys.back());
  p.steps = std::move(steps);
  p.h_sys = std::move(h_sys);
  p.beta = beta;
  p.epsilon = epsilon;
  validate_protocol(p);
  return p;
}

Protocol build_protocol(const ThermostatedProtocolSpec& spec) {
  std::vector<HeatLabeledChannel> steps;
  const BathSpec bath{spec.h_bath, spec.beta};
  const CouplingSpec cpl{spec.h_int, spec.epsilon};
  for (const auto& h : spec.h_sys) steps.push_back(thermostated_channel(h, bath, cpl, spec.time));
  return make_protocol(std::move(steps), spec.h_sys, spec.beta, spec.epsilon);
}

double exact_sum(const std::vector<double>& xs) {
  std::vector<double> partials;
  for (double x : xs) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  std::size_t n = partials.size();
  if (n == 0) return 0.0;
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

Trajectory make_trajectory(const Protocol& p, int e0, std::vector<int> alphas, int e_tau) {
  Trajectory tr{e0, std::move(alphas), e_tau, {}, 0.0};
  check_indices(p, tr);
  for (std::size_t t = 0; t < tr.alphas.size(); ++t) tr.heats.push_back((*p.steps[t].base.heat)[tr.alphas[t]]);
  tr.q_total = exact_sum(tr.heats);
  return tr;
}

Trajectory reverse_trajectory(const Trajectory& tr) {
  Trajectory rev;
  rev.e0 = tr.e_tau;
  rev.e_tau = tr.e0;
  rev.alphas.assign(tr.alphas.rbegin(), tr.alphas.rend());
  for (auto it = tr.heats.rbegin(); it != tr.heats.rend(); ++it) rev.heats.push_back(-*it);
  rev.q_total = -tr.q_total;
  return rev;
}

ProbVector thermal_occupations(const CMatrix& h, const CMatrix& basis, double beta) {
  const RVector e = basis_energies(h, basis);
  RVector w = (-beta * (e.array() - e.minCoeff())).exp();
  w /= w.sum();
  return ProbVector(std::move(w));
}

double conditional_prob(const Protocol& p, const Trajectory& tr) {
  check_indices(p, tr);
  CVector psi = p.init_basis.col(tr.e0);
  for (std::size_t t = 0; t < p.length(); ++t) psi = p.steps[t].base.kraus[tr.alphas[t]] * psi;
  return std::norm(p.final_basis.col(tr.e_tau).dot(psi));
}

double trajectory_prob(const Protocol& p, const Trajectory& tr, const ProbVector& initial) {
  if (initial.size() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "initial distribution size");
  return initial[tr.e0] * conditional_prob(p, tr);
}

Protocol reverse_protocol(const Protocol& p, const ProtocolReversalOptions& opts) {
  validate_protocol(p);
  ReversalOptions ropts;
  ropts.balance_tol = std::max(opts.min_balance_tol, p.epsilon ? opts.balance_scale * *p.epsilon : 0.0);
  Protocol rev;
  rev.beta = p.beta;
  rev.epsilon = p.epsilon;
  rev.init_basis = p.final_basis;
  rev.final_basis = p.init_basis;
  for (std::size_t k = p.length(); k-- > 0;) {
    const HeatLabeledChannel& step = p.steps[k];
    const DensityMatrix pi = thermal_state(p.h_sys[k], p.beta).state;
    HeatLabeledChannel r{reverse_channel(step.base, pi, ropts), {}, step.beta};
    for (const auto& [i, j] : step.bath_index) r.bath_index.emplace_back(j, i);
    rev.steps.push_back(std::move(r));
    rev.h_sys.push_back(p.h_sys[k]);
  }
  return rev;
}

MrResult mr_check(const Protocol& p, const Trajectory& tr, double p_floor) {
  return mr_check(p, reverse_protocol(p), tr, p_floor);
}

MrResult mr_check(const Protocol& p, const Protocol& reversed, const Trajectory& tr, double p_floor) {
  MrResult r;
  r.p_fwd = conditional_prob(p, tr);
  r.p_rev = conditional_prob(reversed, reverse_trajectory(tr));
  if (!(r.p_fwd > p_floor))
    throw Error(ErrorCode::ZeroProbabilityBranch, "forward trajectory probability " + std::to_string(r.p_fwd));
  if (!(r.p_rev > p_floor))
    throw Error(ErrorCode::ZeroProbabilityBranch, "reverse trajectory probability " + std::to_string(r.p_rev));
  r.log_ratio = std::log(r.p_fwd) - std::log(r.p_rev);
  r.minus_beta_q = -p.beta * tr.q_total;
  r.residual = std::abs(r.log_ratio - r.minus_beta_q);
  return r;
}

std::vector<WeightedTrajectory> enumerate_trajectories(const Protocol& p, const ProbVector& initial, double p_floor,
                                                       double cap) {
  validate_protocol(p);
  const Eigen::Index d = p.dim();
  if (initial.size() != d) throw Error(ErrorCode::DimensionMismatch, "initial distribution size");
  double count = static_cast<double>(d) * static_cast<double>(d);
  for (const auto& s : p.steps) count *= static_cast<double>(s.base.size());
  if (count > cap)
    throw Error(ErrorCode::EnumerationTooLarge, std::to_string(count) + " trajectories exceed the cap");

  std::vector<WeightedTrajectory> out;
  const std::size_t tau = p.length();
  std::vector<int> alphas(tau, 0);
  std::vector<CVector> psi(tau + 1);
  for (int e0 = 0; e0 < d; ++e0) {
    if (!(initial[e0] > 0.0)) continue;
    psi[0] = p.init_basis.col(e0);
    // Odometer over Kraus index tuples, reusing prefix products.
    std::size_t depth = 0;
    std::fill(alphas.begin(), alphas.end(), 0);
    while (true) {
      for (std::size_t t = depth; t < tau; ++t) psi[t + 1] = p.steps[t].base.kraus[alphas[t]] * psi[t];
      for (int e = 0; e < d; ++e) {
        const double prob = initial[e0] * std::norm(p.final_basis.col(e).dot(psi[tau]));
        if (prob > p_floor) out.push_back({make_trajectory(p, e0, alphas, e), prob});
      }
      std::size_t t = tau;
      while (t > 0) {
        --t;
        if (static_cast<std::size_t>(++alphas[t]) < p.steps[t].base.size()) break;
        alphas[t] = 0;
        if (t == 0) {
          t = tau + 1;
          break;
        }
      }
      if (t > tau || tau == 0) break;
      depth = t;
    }
  }
  return out;
}

std::vector<Trajectory> sample_trajectories(const Protocol& p, const ProbVector& initial, std::size_t n,
                                            std::uint64_t seed, unsigned workers) {
  validate_protocol(p);
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be at least 1");
  const Eigen::Index d = p.dim();
  if (initial.size() != d) throw Error(ErrorCode::DimensionMismatch, "initial distribution size");

  std::vector<Trajectory> out(n);
  auto draw = [&](std::size_t ordinal) {
    StreamRng rng(seed, ordinal);
    Trajectory tr;
    tr.e0 = pick(initial.p(), rng.uniform());
    CVector psi = p.init_basis.col(tr.e0);
    for (std::size_t t = 0; t < p.length(); ++t) {
      const auto& ops = p.steps[t].base.kraus;
      std::vector<double> w(ops.size());
      std::vector<CVector> branches(ops.size());
      for (std::size_t k = 0; k < ops.size(); ++k) {
        branches[k] = ops[k] * psi;
        w[k] = branches[k].squaredNorm();
      }
      const int alpha = pick(w, rng.uniform());
      tr.alphas.push_back(alpha);
      psi = branches[alpha] / std::sqrt(w[alpha]);
    }
    RVector w(d);
    for (Eigen::Index e = 0; e < d; ++e) w(e) = std::norm(p.final_basis.col(e).dot(psi));
    tr.e_tau = pick(w, rng.uniform());
    return make_trajectory(p, tr.e0, std::move(tr.alphas), tr.e_tau);
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t k = 0; k < n; ++k) out[k] = draw(k);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, begin, end] {
      for (std::size_t k = begin; k < end; ++k) out[k] = draw(k);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

JarzynskiResult jarzynski_check(const Protocol& p, double cap) {
  validate_protocol(p);
  const CMatrix& h1 = p.h_sys.front();
  const CMatrix& hn = p.h_sys.back();
  if (!is_eigenbasis(h1, p.init_basis) || !is_eigenbasis(hn, p.final_basis))
    throw Error(ErrorCode::InvalidArgument, "jarzynski_check: endpoint bases must be energy eigenbases");
  const RVector e_init = basis_energies(h1, p.init_basis);
  const RVector e_final = basis_energies(hn, p.final_basis);
  const ProbVector initial = thermal_occupations(h1, p.init_basis, p.beta);

  std::vector<double> terms;
  for (const auto& wt : enumerate_trajectories(p, initial, 0.0, cap)) {
    const Trajectory& tr = wt.trajectory;
    const double work = (e_final(tr.e_tau) - e_init(tr.e0)) - tr.q_total;
    terms.push_back(wt.probability * std::exp(-p.beta * work));
  }
  JarzynskiResult r;
  r.lhs = exact_sum(terms);
  r.rhs = std::exp(thermal_state(hn, p.beta).log_z - thermal_state(h1, p.beta).log_z);
  r.rel_err = std::abs(r.lhs - r.rhs) / r.rhs;
  return r;
}

}  // namespace qrev
