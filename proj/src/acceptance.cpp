#include "qrev/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qrev/driven.hpp"
#include "qrev/fixtures.hpp"

namespace qrev::acceptance {

namespace {

using fixtures::Rng;

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << x;
  return ss.str();
}

bool in_ratio_band(double r) { return r >= 1.6 && r <= 2.4; }

/// Qubit system coupled to a two-level bath; shared by criteria 5-9.
struct ThermalSetup {
  CMatrix h1, h2, h_bath, h_int;
  double beta = 1.0;
  double time = 1.0;

  BathSpec bath() const { return {h_bath, beta}; }
  ThermostatedProtocolSpec protocol(std::vector<CMatrix> hs, double eps) const {
    return {std::move(hs), h_bath, h_int, beta, eps, time};
  }
};

ThermalSetup make_setup(std::uint64_t seed) {
  Rng rng(seed ^ 0x5eedULL);
  ThermalSetup s;
  s.h1 = 0.5 * fixtures::pauli_z() + 0.2 * fixtures::pauli_x();
  s.h2 = 0.8 * fixtures::pauli_z() - 0.3 * fixtures::pauli_y();
  s.h_bath = CMatrix::Zero(2, 2);
  s.h_bath(1, 1) = 0.8;
  s.h_int = fixtures::random_hermitian(4, rng);
  return s;
}

/// Reverse protocol built from the time-reversed joint unitaries, with each
/// operator stored at the Kraus index of the forward operator it mirrors.
Protocol joint_reversed_protocol(const ThermostatedProtocolSpec& spec, const Protocol& fwd) {
  Protocol rev;
  rev.beta = fwd.beta;
  rev.epsilon = fwd.epsilon;
  rev.init_basis = fwd.final_basis;
  rev.final_basis = fwd.init_basis;
  const BathSpec bath{spec.h_bath, spec.beta};
  const Eigen::Index db = spec.h_bath.rows();
  for (std::size_t k = fwd.length(); k-- > 0;) {
    const CMatrix u = unitary_of(joint_hamiltonian(spec.h_sys[k], bath, {spec.h_int, spec.epsilon}), spec.time);
    const HeatLabeledChannel back = channel_from_joint_unitary(u.adjoint(), fwd.dim(), bath);
    std::vector<CMatrix> ops;
    std::vector<double> heat;
    HeatLabeledChannel step;
    step.beta = fwd.beta;
    for (const auto& [i, j] : fwd.steps[k].bath_index) {
      const std::size_t mirrored = static_cast<std::size_t>(j * db + i);
      ops.push_back(back.base.kraus[mirrored]);
      heat.push_back((*back.base.heat)[mirrored]);
      step.bath_index.emplace_back(j, i);
    }
    step.base = KrausChannel(std::move(ops), std::move(heat));
    rev.steps.push_back(std::move(step));
    rev.h_sys.push_back(spec.h_sys[k]);
  }
  return rev;
}

struct MrSweep {
  double max_residual = 0.0;
  double violating_weight = 0.0;
  std::size_t count = 0;
  std::size_t violations = 0;
  double worst_energy_mismatch = 0.0;
};

MrSweep sweep_mr(const Protocol& p, const Protocol& rev, double bound) {
  MrSweep out;
  const ProbVector initial = thermal_occupations(p.h_sys.front(), p.init_basis, p.beta);
  const CMatrix e1 = p.init_basis.adjoint() * p.h_sys.front() * p.init_basis;
  const CMatrix en = p.final_basis.adjoint() * p.h_sys.back() * p.final_basis;
  for (const auto& wt : enumerate_trajectories(p, initial)) {
    if (conditional_prob(p, wt.trajectory) <= 1e-12) continue;
    const MrResult r = mr_check(p, rev, wt.trajectory);
    ++out.count;
    if (r.residual > out.max_residual) {
      out.max_residual = r.residual;
      const double de = en(wt.trajectory.e_tau, wt.trajectory.e_tau).real() - e1(wt.trajectory.e0, wt.trajectory.e0).real();
      out.worst_energy_mismatch = p.beta * std::abs(de - wt.trajectory.q_total);
    }
    if (r.residual > bound) {
      ++out.violations;
      out.violating_weight += wt.probability;
    }
  }
  return out;
}

class Runner {
 public:
  explicit Runner(const Config& cfg) : cfg_(cfg), rng_(cfg.seed), setup_(make_setup(cfg.seed)) {}

  CriterionResult reversal_algebra() {
    CriterionResult r{1, "reversal algebra", false, {}, {}};
    double inv = 0, fix = 0, tcp = 0, choi_min = 0;
    for (int k = 0; k < 50; ++k) {
      const Eigen::Index d = 2 + k % 3;
      const auto [ch, pi] = fixtures::random_balanced_channel(d, rng_);
      const KrausChannel rev = reverse_channel(ch, pi);
      inv = std::max(inv, channel_distance(reverse_channel(rev, pi), ch));
      fix = std::max(fix, distance(apply_map(rev, pi.mat()), pi.mat()));
      tcp = std::max(tcp, check_tcp(rev).max_violation);
      choi_min = std::min(choi_min, choi_min_eigenvalue(super_matrix(rev)));
    }
    r.pass = inv <= 1e-9 && fix <= 1e-9 && tcp <= 1e-8 && choi_min >= -1e-9;
    r.metrics = {{"involution", inv}, {"fixed_point", fix}, {"tcp_violation", tcp}, {"choi_min_eig", choi_min}};
    r.detail = "50 channels: involution " + fmt(inv) + " <= 1e-9, |S~pi - pi| " + fmt(fix) + " <= 1e-9, TCP " +
               fmt(tcp) + " <= 1e-8, Choi min eig " + fmt(choi_min) + " >= -1e-9";
    return r;
  }

  CriterionResult contravariance() {
    CriterionResult r{2, "contravariance", false, {}, {}};
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
      const Eigen::Index d = 2 + k % 3;
      const auto [base, pi] = fixtures::random_balanced_channel(d, rng_);
      const KrausChannel u{{fixtures::unitary_commuting_with(pi, rng_)}};
      const KrausChannel rch = fixtures::symmetrize(base, pi);
      const KrausChannel sch = fixtures::symmetrize(compose(u, compose(base, base)), pi);
      const KrausChannel lhs = reverse_channel(compose(rch, sch), pi);
      const KrausChannel rhs = compose(reverse_channel(sch, pi), reverse_channel(rch, pi));
      worst = std::max(worst, channel_distance(lhs, rhs));
    }
    r.pass = worst <= 1e-9;
    r.metrics = {{"max_distance", worst}};
    r.detail = "20 pairs: ||(RS)~ - S~R~|| " + fmt(worst) + " <= 1e-9";
    return r;
  }

  CriterionResult isolated_system() {
    CriterionResult r{3, "isolated system", false, {}, {}};
    double worst = 0;
    std::uniform_real_distribution<double> time(0.1, 3.0);
    for (int k = 0; k < 10; ++k) {
      const Eigen::Index d = 2 + k % 3;
      const CMatrix u = unitary_of(fixtures::random_hermitian(d, rng_), time(rng_));
      const DensityMatrix mixed(CMatrix::Identity(d, d) / static_cast<double>(d));
      const KrausChannel rev = reverse_channel(KrausChannel({u}), mixed);
      worst = std::max(worst, channel_distance(rev, KrausChannel({u.adjoint()})));
    }
    r.pass = worst <= 1e-12;
    r.metrics = {{"max_distance", worst}};
    r.detail = "10 Hamiltonians: ||S~ - {U^dagger}|| " + fmt(worst) + " <= 1e-12";
    return r;
  }

  CriterionResult classical_equivariance() {
    CriterionResult r{4, "classical equivariance", false, {}, {}};
    double equiv = 0, invol = 0, entry = 0;
    for (int k = 0; k < 20; ++k) {
      const Eigen::Index d = 2 + k % 3;
      const auto [ch, pi] = fixtures::random_balanced_channel(d, rng_);
      const HermEig eig = herm_eig(pi.mat());
      const ProbVector p(eig.values / eig.values.sum());
      const StochasticMatrix m = extract_markov(super_matrix(ch), eig.vectors);
      const StochasticMatrix m_rev = markov_reverse(m, p);
      const StochasticMatrix via_quantum = extract_markov(super_matrix(reverse_channel(ch, pi)), eig.vectors);
      equiv = std::max(equiv, (via_quantum.m() - m_rev.m()).cwiseAbs().maxCoeff());
      invol = std::max(invol, (markov_reverse(m_rev, p).m() - m.m()).cwiseAbs().maxCoeff());
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
          entry = std::max(entry, std::abs(m_rev.m()(i, j) * p[j] - m.m()(j, i) * p[i]));
    }
    r.pass = equiv <= 1e-9 && invol <= 1e-12 && entry <= 1e-12;
    r.metrics = {{"equivariance", equiv}, {"involution", invol}, {"entrywise", entry}};
    r.detail = "20 channels: extract/reverse commute " + fmt(equiv) + " <= 1e-9, involution " + fmt(invol) +
               " <= 1e-12, M~_ij p_j = M_ji p_i " + fmt(entry) + " <= 1e-12";
    return r;
  }

  CriterionResult thermostated_construction() {
    CriterionResult r{5, "thermostated construction", false, {}, {}};
    const BathSpec bath = setup_.bath();
    double dil = 0, tcp = 0;
    for (double eps : {0.0, 1e-2, 1e-1}) {
      const CouplingSpec cpl{setup_.h_int, eps};
      const HeatLabeledChannel ch = thermostated_channel(setup_.h1, bath, cpl, setup_.time);
      tcp = std::max(tcp, check_tcp(ch.base).max_violation);
      for (int k = 0; k < 5; ++k) {
        const DensityMatrix rho = fixtures::random_density(2, rng_);
        dil = std::max(dil, distance(apply(ch.base, rho).mat(),
                                     dilation_apply(setup_.h1, bath, cpl, setup_.time, rho.mat())));
      }
    }
    const DensityMatrix pi_s = thermal_state(setup_.h1, setup_.beta).state;
    auto balance = [&](double eps) {
      const HeatLabeledChannel ch = thermostated_channel(setup_.h1, bath, {setup_.h_int, eps}, setup_.time);
      return distance(apply_map(ch.base, pi_s.mat()), pi_s.mat());
    };
    const double b1 = balance(1e-2), b2 = balance(5e-3);
    const double ratio = b1 / b2;
    r.pass = dil <= 1e-10 && tcp < 1e-12 && in_ratio_band(ratio);
    r.metrics = {{"dilation", dil}, {"tcp_violation", tcp}, {"balance_eps", b1}, {"balance_half_eps", b2}, {"ratio", ratio}};
    r.detail = "Kraus vs dilation " + fmt(dil) + " <= 1e-10, TCP " + fmt(tcp) + " < 1e-12, |S pi - pi| " + fmt(b1) +
               " / " + fmt(b2) + " = " + fmt(ratio) + " in [1.6, 2.4]";
    return r;
  }

  CriterionResult weak_coupling() {
    CriterionResult r{6, "weak-coupling reversed operators", false, {}, {}};
    const BathSpec bath = setup_.bath();
    const DensityMatrix pi_s = thermal_state(setup_.h1, setup_.beta).state;
    auto residual = [&](double eps) {
      return weak_coupling_residual(thermostated_channel(setup_.h1, bath, {setup_.h_int, eps}, setup_.time), pi_s);
    };
    const double r0 = residual(0.0);
    residual_eps_ = residual(1e-2);
    const double r_half = residual(5e-3);
    const double ratio = residual_eps_ / r_half;
    prefactor_ = residual_eps_ / 1e-2;
    r.pass = r0 < 1e-10 && in_ratio_band(ratio);
    r.metrics = {{"residual_zero", r0}, {"residual_eps", residual_eps_}, {"residual_half_eps", r_half},
                 {"ratio", ratio}, {"prefactor_C", prefactor_}};
    r.detail = "eps=0 " + fmt(r0) + " < 1e-10, eps 1e-2/5e-3: " + fmt(residual_eps_) + " / " + fmt(r_half) + " = " +
               fmt(ratio) + " in [1.6, 2.4], C = " + fmt(prefactor_);
    return r;
  }

  CriterionResult microscopic_reversibility() {
    CriterionResult r{7, "microscopic reversibility", false, {}, {}};
    const double tau = 3.0;
    const double bound = 1e-2 * tau * prefactor_;
    const auto spec = setup_.protocol({setup_.h1, setup_.h1, setup_.h1}, 1e-2);
    const auto spec_half = setup_.protocol({setup_.h1, setup_.h1, setup_.h1}, 5e-3);
    const Protocol p = build_protocol(spec), p_half = build_protocol(spec_half);
    const MrSweep full = sweep_mr(p, reverse_protocol(p), bound);
    const MrSweep half = sweep_mr(p_half, reverse_protocol(p_half), bound * 0.5);
    const MrSweep joint = sweep_mr(p, joint_reversed_protocol(spec, p), bound);
    const double ratio = full.max_residual / half.max_residual;
    r.pass = full.violations == 0 && in_ratio_band(ratio);
    r.metrics = {{"bound", bound},
                 {"max_residual", full.max_residual},
                 {"max_residual_half_eps", half.max_residual},
                 {"ratio", ratio},
                 {"trajectories", static_cast<double>(full.count)},
                 {"violations", static_cast<double>(full.violations)},
                 {"violating_weight", full.violating_weight},
                 {"violating_weight_half_eps", half.violating_weight},
                 {"worst_beta_dE_minus_Q", full.worst_energy_mismatch},
                 {"joint_unitary_reversal_max_residual", joint.max_residual}};
    r.detail = std::to_string(full.violations) + "/" + std::to_string(full.count) + " trajectories above bound " +
               fmt(bound) + " (max " + fmt(full.max_residual) + " = beta|dE_S - Q| " +
               fmt(full.worst_energy_mismatch) + "), eps-halving ratio " + fmt(ratio) +
               "; violating weight " + fmt(full.violating_weight) + " -> " + fmt(half.violating_weight) +
               "; joint-unitary reversal residual " + fmt(joint.max_residual);
    return r;
  }

  CriterionResult jarzynski() {
    CriterionResult r{8, "Jarzynski identity", false, {}, {}};
    const double tau = 2.0;
    const JarzynskiResult sw = jarzynski_check(build_protocol(setup_.protocol({setup_.h1, setup_.h2}, 1e-2)));
    const JarzynskiResult flat = jarzynski_check(build_protocol(setup_.protocol({setup_.h1, setup_.h1}, 1e-2)));
    const double bound = 5.0 * residual_eps_ * tau;
    r.pass = sw.rel_err <= bound && flat.rel_err <= 1e-9;
    r.metrics = {{"lhs", sw.lhs}, {"rhs", sw.rhs}, {"rel_err", sw.rel_err}, {"bound", bound},
                 {"constant_rel_err", flat.rel_err}};
    r.detail = "switch <e^-bW> " + fmt(sw.lhs) + " vs Z2/Z1 " + fmt(sw.rhs) + ": rel err " + fmt(sw.rel_err) +
               " <= " + fmt(bound) + "; constant H rel err " + fmt(flat.rel_err) + " <= 1e-9";
    return r;
  }

  CriterionResult sampler() {
    CriterionResult r{9, "sampler consistency", false, {}, {}};
    const Protocol p = build_protocol(setup_.protocol({setup_.h1, setup_.h2}, 1e-1));
    const ProbVector initial = thermal_occupations(p.h_sys.front(), p.init_basis, p.beta);
    const auto cells = enumerate_trajectories(p, initial);
    const auto one = sample_trajectories(p, initial, cfg_.samples, cfg_.seed, 1);
    const auto many = sample_trajectories(p, initial, cfg_.samples, cfg_.seed, cfg_.workers);
    bool identical = one.size() == many.size();
    for (std::size_t k = 0; identical && k < one.size(); ++k)
      identical = one[k].e0 == many[k].e0 && one[k].alphas == many[k].alphas && one[k].e_tau == many[k].e_tau;

    std::map<std::vector<int>, std::size_t> counts;
    auto key = [](const Trajectory& t) {
      std::vector<int> k{t.e0};
      k.insert(k.end(), t.alphas.begin(), t.alphas.end());
      k.push_back(t.e_tau);
      return k;
    };
    for (const auto& t : one) ++counts[key(t)];
    const double n = static_cast<double>(cfg_.samples);
    std::size_t inside = 0;
    for (const auto& c : cells) {
      const double expected = n * c.probability;
      const double sigma = std::sqrt(n * c.probability * (1.0 - c.probability));
      const auto it = counts.find(key(c.trajectory));
      const double seen = it == counts.end() ? 0.0 : static_cast<double>(it->second);
      if (std::abs(seen - expected) <= 3.0 * sigma) ++inside;
    }
    const double frac = static_cast<double>(inside) / static_cast<double>(cells.size());
    r.pass = frac >= 0.95 && identical;
    r.metrics = {{"cells", static_cast<double>(cells.size())}, {"fraction_in_band", frac},
                 {"identical_across_workers", identical ? 1.0 : 0.0}};
    r.detail = std::to_string(cfg_.samples) + " samples, " + std::to_string(cells.size()) + " cells: " +
               fmt(frac) + " within 3 sigma (>= 0.95); 1 vs " + std::to_string(cfg_.workers) +
               " workers identical: " + (identical ? "yes" : "no");
    return r;
  }

 private:
  Config cfg_;
  Rng rng_;
  ThermalSetup setup_;
  double residual_eps_ = 0.0;
  double prefactor_ = 0.0;
};

template <typename F>
CriterionResult guarded(int id, const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {id, name, false, std::string("error: ") + e.what(), {}};
  }
}

}  // namespace

std::vector<CriterionResult> run_all(const Config& cfg) {
  Runner run(cfg);
  std::vector<CriterionResult> out;
  out.push_back(guarded(1, "reversal algebra", [&] { return run.reversal_algebra(); }));
  out.push_back(guarded(2, "contravariance", [&] { return run.contravariance(); }));
  out.push_back(guarded(3, "isolated system", [&] { return run.isolated_system(); }));
  out.push_back(guarded(4, "classical equivariance", [&] { return run.classical_equivariance(); }));
  out.push_back(guarded(5, "thermostated construction", [&] { return run.thermostated_construction(); }));
  out.push_back(guarded(6, "weak-coupling reversed operators", [&] { return run.weak_coupling(); }));
  out.push_back(guarded(7, "microscopic reversibility", [&] { return run.microscopic_reversibility(); }));
  out.push_back(guarded(8, "Jarzynski identity", [&] { return run.jarzynski(); }));
  out.push_back(guarded(9, "sampler consistency", [&] { return run.sampler(); }));
  return out;
}

std::string format_line(const CriterionResult& r) {
  return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

}  // namespace qrev::acceptance
