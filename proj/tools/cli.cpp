#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qrev/acceptance.hpp"
#include "qrev/io.hpp"

namespace qrev::cli {

namespace {

using io::json;

struct Options {
  std::string channel, pi, matrix, protocol, out;
  std::string hsys, hbath, hint;
  std::string format = "json";
  std::string eps_sweep;
  double beta = 1.0, eps = 1e-2, time = 1.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  unsigned workers = 1;
  bool no_meta = false, row_stochastic = false, allow_unbalanced = false;
  double tol_tcp = 1e-9, tol_balance = 1e-8, tol_gap = 1e-8, tol_db = 1e-8, tol_mr = 1e-3, tol_rel = 1e-8;
  double tol_floor = 1e-15, tol_traj = 1e-12;
};

/// Machine-readable record of one command run.
class RunReport {
 public:
  explicit RunReport(std::string command) : command_(std::move(command)) {}

  void input(const std::string& path) {
    const std::string bytes = io::read_text(path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    std::ostringstream ss;
    ss << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    inputs_[path] = ss.str();
  }
  void metric(const std::string& name, double v) { metrics_[name] = v; }
  void check(const std::string& name, bool ok) { pass_[name] = ok; }
  void result(json j) { result_ = std::move(j); }
  void seed(std::uint64_t s) { seed_ = s; }

  bool all_pass() const {
    for (const auto& [k, v] : pass_)
      if (!v) return false;
    return true;
  }

  json to_json(bool meta, double wall) const {
    json j{{"command", command_}, {"inputs", inputs_}, {"metrics", json::object()}, {"pass", pass_}};
    for (const auto& [k, v] : metrics_) j["metrics"][k] = std::isfinite(v) ? json(v) : json(nullptr);
    if (seed_) j["seed"] = *seed_;
    if (!result_.is_null()) j["result"] = result_;
    if (meta) j["wall_time"] = wall;
    return j;
  }

 private:
  std::string command_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, double> metrics_;
  std::map<std::string, bool> pass_;
  std::optional<std::uint64_t> seed_;
  json result_;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("QREV_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::UsageError, "QREV_SEED is not an unsigned integer");
    }
  }
  return 0;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> xs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      xs.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::UsageError, "cannot parse '" + item + "' as a number");
    }
  }
  return xs;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorCode::UsageError, std::string(flag) + " is required");
}

void maybe_write(const Options& o, const json& j) {
  if (!o.out.empty()) io::write_file(o.out, j);
}

std::string alpha_string(const std::vector<int>& a) {
  std::string s;
  for (std::size_t k = 0; k < a.size(); ++k) s += (k ? ";" : "") + std::to_string(a[k]);
  return s;
}

struct Row {
  Trajectory tr;
  double p_fwd = 0, p_rev = 0, log_ratio = 0, residual = 0;
  bool reachable = true;
};

Row evaluate(const Protocol& p, const Protocol& rev, const Trajectory& tr, double p_floor) {
  Row row{tr};
  row.p_fwd = conditional_prob(p, tr);
  row.p_rev = conditional_prob(rev, reverse_trajectory(tr));
  if (row.p_fwd > p_floor && row.p_rev > p_floor) {
    const MrResult r = mr_check(p, rev, tr, p_floor);
    row.log_ratio = r.log_ratio;
    row.residual = r.residual;
  } else {
    row.reachable = false;
  }
  return row;
}

json rows_json(const std::vector<Row>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    json j = io::to_json(r.tr);
    j["p_fwd"] = r.p_fwd;
    j["p_rev"] = r.p_rev;
    j["reachable"] = r.reachable;
    j["log_ratio"] = r.reachable ? json(r.log_ratio) : json(nullptr);
    j["residual"] = r.reachable ? json(r.residual) : json(nullptr);
    a.push_back(std::move(j));
  }
  return a;
}

std::string rows_csv(const std::vector<Row>& rows) {
  std::ostringstream ss;
  ss.precision(17);
  ss << "e0,alphas,e_tau,p_fwd,p_rev,Q,log_ratio,residual\n";
  for (const auto& r : rows) {
    ss << r.tr.e0 << ',' << alpha_string(r.tr.alphas) << ',' << r.tr.e_tau << ',' << r.p_fwd << ',' << r.p_rev << ','
       << r.tr.q_total << ',';
    if (r.reachable) ss << r.log_ratio << ',' << r.residual << '\n';
    else ss << "unreachable,unreachable\n";
  }
  return ss.str();
}

using Handler = std::function<void(const Options&, RunReport&, std::ostream& csv)>;

void cmd_reverse(const Options& o, RunReport& rep, std::ostream&) {
  require(o.channel, "--channel");
  require(o.pi, "--pi");
  rep.input(o.channel);
  rep.input(o.pi);
  const json cj = io::read_file(o.channel);
  const KrausChannel ch = io::channel_from_json(cj);
  const DensityMatrix pi = io::density_from_json(io::read_file(o.pi));
  ReversalOptions ropts;
  ropts.balance_tol = o.tol_balance;
  ropts.on_unbalanced = o.allow_unbalanced ? BalancePolicy::Ignore : BalancePolicy::Fail;
  const KrausChannel rev = reverse_channel(ch, pi, ropts);
  json rj = io::to_json(rev);
  if (cj.contains("bath_index")) {
    json swapped = json::array();
    for (const auto& pair : cj.at("bath_index")) swapped.push_back({pair[1], pair[0]});
    rj["bath_index"] = swapped;
  }
  const double tcp = check_tcp(rev, o.tol_tcp).max_violation;
  rep.metric("tcp_violation", tcp);
  rep.metric("balance_residual", distance(apply_map(ch, pi.mat()), pi.mat()));
  rep.check("reversed_tcp", tcp <= 1e-8);
  rep.result(rj);
  maybe_write(o, rj);
}

void cmd_fixpoint(const Options& o, RunReport& rep, std::ostream&) {
  require(o.channel, "--channel");
  rep.input(o.channel);
  const KrausChannel ch = io::channel_from_json(io::read_file(o.channel));
  const DensityMatrix pi = fixed_point(ch, o.tol_gap);
  const double residual = distance(apply_map(ch, pi.mat()), pi.mat());
  rep.metric("fixed_point_residual", residual);
  rep.metric("min_eigenvalue", herm_eig(pi.mat()).values.minCoeff());
  rep.check("invariant", residual <= 1e-9);
  const json pj = io::to_json(pi.mat());
  rep.result(pj);
  maybe_write(o, pj);
}

void cmd_check_db(const Options& o, RunReport& rep, std::ostream&) {
  require(o.channel, "--channel");
  require(o.pi, "--pi");
  rep.input(o.channel);
  rep.input(o.pi);
  const KrausChannel ch = io::channel_from_json(io::read_file(o.channel));
  const DensityMatrix pi = io::density_from_json(io::read_file(o.pi));
  const BalanceReport br = is_detailed_balanced(ch, pi, o.tol_db);
  rep.metric("deviation", br.deviation);
  rep.metric("balance_residual", br.balance_residual);
  rep.check("balanced", br.balanced);
  rep.check("detailed_balanced", br.detailed_balanced);
}

void cmd_markov_reverse(const Options& o, RunReport& rep, std::ostream&) {
  require(o.matrix, "--matrix");
  rep.input(o.matrix);
  const StochasticMatrix m = io::stochastic_from_json(io::read_file(o.matrix), o.row_stochastic);
  std::optional<ProbVector> p;
  if (!o.pi.empty()) {
    rep.input(o.pi);
    p = io::prob_from_json(io::read_file(o.pi));
  } else {
    p = stationary(m, o.tol_gap);
  }
  const StochasticMatrix rev = markov_reverse(m, *p, o.tol_balance);
  rep.metric("deviation", (rev.m() - m.m()).cwiseAbs().maxCoeff());
  const json rj{{"matrix", io::to_json(rev)}, {"pi", io::to_json(*p)}};
  rep.result(rj);
  maybe_write(o, rj);
}

void cmd_thermal_channel(const Options& o, RunReport& rep, std::ostream&) {
  require(o.hsys, "--hsys");
  require(o.hbath, "--hbath");
  require(o.hint, "--hint");
  for (const auto* path : {&o.hsys, &o.hbath, &o.hint}) rep.input(*path);
  const CMatrix hs = io::matrix_from_json(io::read_file(o.hsys));
  const BathSpec bath{io::matrix_from_json(io::read_file(o.hbath)), o.beta};
  const CouplingSpec cpl{io::matrix_from_json(io::read_file(o.hint)), o.eps};
  const HeatLabeledChannel ch = thermostated_channel(hs, bath, cpl, o.time);
  const double tcp = check_tcp(ch.base, o.tol_tcp).max_violation;
  rep.metric("tcp_violation", tcp);
  rep.metric("weak_coupling_residual", weak_coupling_residual(ch, thermal_state(hs, o.beta).state));
  rep.check("tcp", tcp <= o.tol_tcp);
  const json cj = io::to_json(ch);
  rep.result(cj);
  maybe_write(o, cj);
}

void cmd_run_protocol(const Options& o, RunReport& rep, std::ostream& csv) {
  require(o.protocol, "--protocol");
  rep.input(o.protocol);
  const Protocol p = io::protocol_from_json(io::read_file(o.protocol));
  const Protocol rev = reverse_protocol(p);
  const ProbVector initial = thermal_occupations(p.h_sys.front(), p.init_basis, p.beta);
  std::vector<Row> rows;
  if (o.n) {
    const std::uint64_t seed = resolve_seed(o);
    rep.seed(seed);
    for (const auto& tr : sample_trajectories(p, initial, *o.n, seed, o.workers))
      rows.push_back(evaluate(p, rev, tr, o.tol_floor));
  } else {
    for (const auto& wt : enumerate_trajectories(p, initial, o.tol_floor))
      rows.push_back(evaluate(p, rev, wt.trajectory, o.tol_floor));
  }
  std::size_t unreachable = 0;
  for (const auto& r : rows) unreachable += r.reachable ? 0 : 1;
  rep.metric("trajectories", static_cast<double>(rows.size()));
  rep.metric("unreachable", static_cast<double>(unreachable));
  if (o.format == "csv") {
    csv << rows_csv(rows);
  } else {
    rep.result(rows_json(rows));
  }
}

void cmd_verify_mr(const Options& o, RunReport& rep, std::ostream& csv) {
  require(o.protocol, "--protocol");
  rep.input(o.protocol);
  const json pj = io::read_file(o.protocol);
  std::vector<Protocol> runs;
  std::vector<double> eps;
  if (!o.eps_sweep.empty()) {
    auto spec = io::protocol_spec_from_json(pj);
    if (!spec) throw Error(ErrorCode::UsageError, "--eps-sweep needs a protocol with a builder block");
    for (double e : parse_list(o.eps_sweep)) {
      spec->epsilon = e;
      runs.push_back(build_protocol(*spec));
      eps.push_back(e);
    }
  } else {
    runs.push_back(io::protocol_from_json(pj));
    eps.push_back(runs.back().epsilon.value_or(std::nan("")));
  }
  json table = json::array();
  std::vector<double> maxima;
  std::vector<Row> all_rows;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Protocol& p = runs[k];
    const Protocol rev = reverse_protocol(p);
    const ProbVector initial = thermal_occupations(p.h_sys.front(), p.init_basis, p.beta);
    double worst = 0.0;
    std::size_t count = 0, unreachable = 0;
    for (const auto& wt : enumerate_trajectories(p, initial, o.tol_floor)) {
      if (conditional_prob(p, wt.trajectory) <= o.tol_traj) continue;
      Row row = evaluate(p, rev, wt.trajectory, o.tol_floor);
      ++count;
      if (!row.reachable) ++unreachable;
      else worst = std::max(worst, row.residual);
      if (k == 0) all_rows.push_back(std::move(row));
    }
    maxima.push_back(worst);
    table.push_back({{"epsilon", std::isfinite(eps[k]) ? json(eps[k]) : json(nullptr)},
                     {"trajectories", count},
                     {"unreachable", unreachable},
                     {"max_residual", worst}});
    rep.metric("max_residual[" + std::to_string(k) + "]", worst);
    rep.check("residual_within_tol[" + std::to_string(k) + "]", worst <= o.tol_mr && unreachable == 0);
  }
  if (maxima.size() >= 2) {
    const double ratio = maxima[0] / maxima[1];
    rep.metric("scaling_ratio", ratio);
    rep.check("first_order_scaling", ratio >= 1.6 && ratio <= 2.4);
  }
  if (o.format == "csv") csv << rows_csv(all_rows);
  else rep.result(table);
}

void cmd_jarzynski(const Options& o, RunReport& rep, std::ostream&) {
  require(o.protocol, "--protocol");
  rep.input(o.protocol);
  const Protocol p = io::protocol_from_json(io::read_file(o.protocol));
  const JarzynskiResult jr = jarzynski_check(p);
  rep.metric("lhs", jr.lhs);
  rep.metric("rhs", jr.rhs);
  rep.metric("rel_err", jr.rel_err);
  rep.check("jarzynski", jr.rel_err <= o.tol_rel);
}

void cmd_selftest(const Options& o, RunReport& rep, std::ostream& text) {
  acceptance::Config cfg;
  cfg.seed = o.seed || std::getenv("QREV_SEED") ? resolve_seed(o) : cfg.seed;
  if (o.n) cfg.samples = *o.n;
  if (o.workers > 1) cfg.workers = o.workers;
  rep.seed(cfg.seed);
  for (const auto& r : acceptance::run_all(cfg)) {
    const std::string key = "criterion_" + std::to_string(r.id);
    rep.check(key, r.pass);
    for (const auto& [name, v] : r.metrics) rep.metric(key + "." + name, v);
    if (o.format != "json") text << acceptance::format_line(r) << '\n';
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"qrev: time reversal of quantum operations"};
  app.require_subcommand(1);
  std::map<CLI::App*, std::pair<std::string, Handler>> handlers;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", o.out, "Write the primary result to this path");
    sub->add_flag("--no-meta", o.no_meta, "Omit wall-clock metadata from the report");
    sub->add_option("--seed", o.seed, "RNG seed (falls back to QREV_SEED)");
    sub->add_option("--workers", o.workers, "Worker threads for sampling");
    sub->add_option("--tol-tcp", o.tol_tcp, "Trace-preservation tolerance");
    sub->add_option("--tol-balance", o.tol_balance, "Tolerance on ||S pi - pi||");
    sub->add_option("--tol-gap", o.tol_gap, "Unit-eigenvalue gap tolerance");
    sub->add_option("--tol-floor", o.tol_floor, "Probability floor for reachable trajectories");
  };
  auto add = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    handlers[sub] = {name, std::move(h)};
    return sub;
  };

  auto* rev = add("reverse", "Reverse a channel with respect to pi", cmd_reverse);
  rev->add_option("--channel", o.channel, "Channel JSON");
  rev->add_option("--pi", o.pi, "Invariant state JSON");
  rev->add_flag("--allow-unbalanced", o.allow_unbalanced, "Reverse even when S pi != pi");

  auto* fix = add("fixpoint", "Compute the unique invariant state of a channel", cmd_fixpoint);
  fix->add_option("--channel", o.channel, "Channel JSON");

  auto* db = add("check-db", "Test balance and detailed balance", cmd_check_db);
  db->add_option("--channel", o.channel, "Channel JSON");
  db->add_option("--pi", o.pi, "Reference state JSON");
  db->add_option("--tol,--tol-db", o.tol_db, "Detailed-balance tolerance");

  auto* mk = add("markov-reverse", "Reverse a column-stochastic Markov matrix", cmd_markov_reverse);
  mk->add_option("--matrix", o.matrix, "Transition matrix JSON, entry [j][i] = P(i -> j)");
  mk->add_option("--pi", o.pi, "Stationary distribution JSON (computed when omitted)");
  mk->add_flag("--row-stochastic", o.row_stochastic, "Input rows sum to one; transpose on ingest");

  auto* th = add("thermal-channel", "Build a thermostated heat-labeled channel", cmd_thermal_channel);
  th->add_option("--hsys", o.hsys, "System Hamiltonian JSON");
  th->add_option("--hbath", o.hbath, "Bath Hamiltonian JSON");
  th->add_option("--hint", o.hint, "Interaction Hamiltonian JSON on the joint space");
  th->add_option("--eps", o.eps, "Coupling constant");
  th->add_option("--beta", o.beta, "Inverse temperature");
  th->add_option("--time", o.time, "Evolution time per step");

  auto* run = add("run-protocol", "Enumerate or sample protocol trajectories", cmd_run_protocol);
  run->add_option("--protocol", o.protocol, "Protocol JSON");
  run->add_option("--n", o.n, "Sample this many trajectories instead of enumerating");

  auto* mr = add("verify-mr", "Check p/p~ = exp(-beta Q) over all trajectories", cmd_verify_mr);
  mr->add_option("--protocol", o.protocol, "Protocol JSON");
  mr->add_option("--eps-sweep", o.eps_sweep, "Comma-separated coupling constants (needs a builder block)");
  mr->add_option("--tol-mr", o.tol_mr, "Per-trajectory residual tolerance");
  mr->add_option("--tol-traj", o.tol_traj, "Forward probability threshold for checked trajectories");

  auto* jz = add("jarzynski", "Check <exp(-beta W)> = Z_tau / Z_1 by enumeration", cmd_jarzynski);
  jz->add_option("--protocol", o.protocol, "Protocol JSON");
  jz->add_option("--tol-rel", o.tol_rel, "Relative error tolerance");

  auto* st = add("selftest", "Run the acceptance suite", cmd_selftest);
  st->add_option("--n", o.n, "Sampler size for the sampling criterion");

  std::vector<std::string> argv_store{"qrev"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "UsageError: " << e.what() << '\n' << app.help();
    json j{{"error", {{"code", "UsageError"}, {"message", e.what()}}}};
    out << j.dump(2) << '\n';
    return kInputError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const auto& [name, handler] = handlers.at(chosen);
  RunReport rep(name);
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream text;
  try {
    handler(o, rep, text);
  } catch (const Error& e) {
    json j = rep.to_json(false, 0.0);
    j["error"] = {{"code", std::string(error_name(e.code()))}, {"message", e.what()}};
    out << j.dump(2) << '\n';
    err << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    json j = rep.to_json(false, 0.0);
    j["error"] = {{"code", "ParseError"}, {"message", e.what()}};
    out << j.dump(2) << '\n';
    err << "ParseError: " << e.what() << '\n';
    return kInputError;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // Commands without a tabular form answer every format with the JSON report.
  if (o.format == "json" || text.str().empty()) out << rep.to_json(!o.no_meta, wall).dump(2) << '\n';
  else out << text.str();
  return rep.all_pass() ? kOk : kCheckFailed;
}

}  // namespace qrev::cli
