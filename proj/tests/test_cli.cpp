#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "qrev/io.hpp"

using namespace qrev;
using namespace qrev::test;
using qrev::io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

// Scratch directory with input documents shared by the tests below.
struct Files {
  fs::path dir;

  Files() {
    dir = fs::temp_directory_path() / "qrev_cli_test";
    fs::create_directories(dir);
    io::write_file(path("id.json"), io::to_json(KrausChannel({CMatrix::Identity(2, 2)})));
    io::write_file(path("maxmixed.json"), io::to_json(CMatrix(CMatrix::Identity(2, 2) / 2.0)));
    io::write_file(path("singular.json"), io::to_json(diag({1.0, 0.0})));
    io::write_file(path("unitary.json"), io::to_json(KrausChannel({unitary_of(fixtures::pauli_z(), 0.7)})));
    io::write_file(path("diag.json"), io::to_json(diag({0.8, 0.2})));
    io::write_file(path("dep.json"), io::to_json(fixtures::depolarizing_qubit()));
    io::write_file(path("chain_rows.json"), json::parse("[[0.9, 0.1], [0.2, 0.8]]"));
    io::write_file(path("hsys.json"), io::to_json(CMatrix(0.5 * fixtures::pauli_z() + 0.2 * fixtures::pauli_x())));
    io::write_file(path("hbath.json"), io::to_json(diag({0.0, 0.8})));
    Rng rng(70);
    const CMatrix hint = fixtures::random_hermitian(4, rng);
    io::write_file(path("hint.json"), io::to_json(hint));

    ThermostatedProtocolSpec spec;
    spec.h_sys = {0.5 * fixtures::pauli_z() + 0.2 * fixtures::pauli_x(), 0.8 * fixtures::pauli_z() - 0.3 * fixtures::pauli_y()};
    spec.h_bath = diag({0.0, 0.8});
    spec.h_int = hint;
    spec.epsilon = 1e-2;
    io::write_file(path("protocol.json"), io::to_json(spec));
    spec.epsilon = 0.0;
    io::write_file(path("decoupled.json"), io::to_json(build_protocol(spec)));
  }
  ~Files() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const char* name) const { return (dir / name).string(); }
};

const Files& files() {
  static Files f;
  return f;
}

}  // namespace

TEST_CASE("reverse") {
  const auto& f = files();
  auto r = run({"reverse", "--channel", f.path("id.json"), "--pi", f.path("maxmixed.json")});
  CHECK(r.code == 0);
  auto rep = r.report();
  CHECK(rep["command"] == "reverse");
  CHECK(rep["pass"]["reversed_tcp"] == true);
  auto ch = io::channel_from_json(rep["result"]);
  CHECK(super_distance(super_matrix(ch), super_matrix(KrausChannel({CMatrix::Identity(2, 2)}))) < 1e-12);
  CHECK(rep["inputs"].size() == 2);
  CHECK(rep.contains("wall_time"));

  auto bad = run({"reverse", "--channel", f.path("id.json"), "--pi", f.path("singular.json")});
  CHECK(bad.code == 1);
  CHECK(bad.report()["error"]["code"] == "SingularOrIndefinite");

  // --out writes the reversed channel itself.
  auto out = f.path("rev.json");
  CHECK(run({"reverse", "--channel", f.path("unitary.json"), "--pi", f.path("diag.json"), "--out", out}).code == 0);
  auto rev = io::channel_from_json(io::read_file(out));
  CHECK(super_distance(super_matrix(rev), super_matrix(KrausChannel({unitary_of(fixtures::pauli_z(), -0.7)}))) < 1e-12);
}

TEST_CASE("usage errors") {
  auto r = run({"frobnicate"});
  CHECK(r.code == 1);
  CHECK(r.report()["error"]["code"] == "UsageError");
  CHECK(run({}).code == 1);
  CHECK(run({"reverse", "--pi", files().path("maxmixed.json")}).report()["error"]["code"] == "UsageError");
  auto missing = run({"fixpoint", "--channel", "/nonexistent.json"});
  CHECK(missing.code == 1);
  CHECK(missing.report()["error"]["code"] == "ParseError");
  CHECK(run({"reverse", "--format", "xml"}).code == 1);
}

TEST_CASE("fixpoint and check-db") {
  const auto& f = files();
  auto fp = run({"fixpoint", "--channel", f.path("dep.json")});
  CHECK(fp.code == 0);
  CHECK(distance(io::matrix_from_json(fp.report()["result"]), CMatrix(CMatrix::Identity(2, 2) / 2.0)) < 1e-12);

  auto db = run({"check-db", "--channel", f.path("id.json"), "--pi", f.path("maxmixed.json")});
  CHECK(db.code == 0);
  auto u = run({"check-db", "--channel", f.path("unitary.json"), "--pi", f.path("diag.json")});
  CHECK(u.code == 2);
  CHECK(u.report()["pass"]["balanced"] == true);
  CHECK(u.report()["pass"]["detailed_balanced"] == false);
  // A loose enough tolerance accepts it.
  CHECK(run({"check-db", "--channel", f.path("unitary.json"), "--pi", f.path("diag.json"), "--tol", "10"}).code == 0);
}

TEST_CASE("markov-reverse") {
  const auto& f = files();
  auto r = run({"markov-reverse", "--matrix", f.path("chain_rows.json"), "--row-stochastic"});
  CHECK(r.code == 0);
  auto res = r.report()["result"];
  CHECK(res["pi"][0].get<double>() == doctest::Approx(2.0 / 3.0));
  // Detailed balanced two-state chain: reverse equals the input (column form).
  auto m = io::stochastic_from_json(res["matrix"]);
  CHECK(m.m()(1, 0) == doctest::Approx(0.1));
  CHECK(r.report()["metrics"]["deviation"].get<double>() < 1e-12);

  auto not_cols = run({"markov-reverse", "--matrix", f.path("chain_rows.json")});
  CHECK(not_cols.code == 1);
  CHECK(not_cols.report()["error"]["code"] == "NotStochastic");
}

TEST_CASE("thermal-channel") {
  const auto& f = files();
  auto out = f.path("thermal.json");
  auto r = run({"thermal-channel", "--hsys", f.path("hsys.json"), "--hbath", f.path("hbath.json"), "--hint",
                f.path("hint.json"), "--eps", "0.01", "--beta", "1", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.report()["metrics"]["tcp_violation"].get<double>() < 1e-12);
  auto hlc = io::heat_channel_from_json(io::read_file(out), 1.0);
  CHECK(hlc.base.size() == 4);
  CHECK(hlc.bath_index.size() == 4);
}

TEST_CASE("run-protocol") {
  const auto& f = files();
  auto r = run({"run-protocol", "--protocol", f.path("protocol.json"), "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("e0,alphas,e_tau,p_fwd,p_rev,Q,log_ratio,residual\n", 0) == 0);

  auto j = run({"run-protocol", "--protocol", f.path("protocol.json")});
  auto rep = j.report();
  CHECK(rep["metrics"]["trajectories"].get<double>() == rep["result"].size());
  CHECK_FALSE(rep.contains("seed"));

  auto s = run({"run-protocol", "--protocol", f.path("protocol.json"), "--n", "50", "--seed", "5", "--no-meta"});
  CHECK(s.report()["seed"] == 5);
  CHECK(s.report()["result"].size() == 50);
}

TEST_CASE("reports are reproducible with --no-meta") {
  const auto& f = files();
  std::vector<std::string> args{"run-protocol", "--protocol", f.path("protocol.json"), "--n", "200", "--seed", "11",
                                "--no-meta"};
  auto a = run(args), b = run(args);
  CHECK(a.out == b.out);
  auto args8 = args;
  args8.insert(args8.end(), {"--workers", "8"});
  CHECK(run(args8).out == a.out);
  CHECK_FALSE(a.report().contains("wall_time"));

  // The environment seed is used when --seed is absent.
  std::vector<std::string> no_seed(args.begin(), args.begin() + 5);
  no_seed.push_back("--no-meta");
  ::setenv("QREV_SEED", "11", 1);
  auto env = run(no_seed);
  ::unsetenv("QREV_SEED");
  CHECK(env.out == a.out);
}

TEST_CASE("verify-mr") {
  const auto& f = files();
  auto d = run({"verify-mr", "--protocol", f.path("decoupled.json")});
  CHECK(d.code == 0);
  CHECK(d.report()["metrics"]["max_residual[0]"].get<double>() < 1e-9);

  auto sweep = run({"verify-mr", "--protocol", f.path("protocol.json"), "--eps-sweep", "1e-2,5e-3"});
  auto rep = sweep.report();
  REQUIRE(rep["result"].size() == 2);
  CHECK(rep["result"][1]["epsilon"].get<double>() == 5e-3);
  CHECK(rep["metrics"].contains("scaling_ratio"));
  // The exact system-side reversal leaves an O(1) residual on the rare
  // trajectories whose heat differs from the system energy change.
  CHECK(sweep.code == 2);

  auto no_builder = run({"verify-mr", "--protocol", f.path("decoupled.json"), "--eps-sweep", "1e-2"});
  CHECK(no_builder.code == 1);
  CHECK(no_builder.report()["error"]["code"] == "UsageError");
}

TEST_CASE("jarzynski") {
  const auto& f = files();
  auto r = run({"jarzynski", "--protocol", f.path("protocol.json")});
  CHECK(r.code == 0);
  auto m = r.report()["metrics"];
  CHECK(m["rel_err"].get<double>() < 1e-8);
  CHECK(m["lhs"].get<double>() == doctest::Approx(m["rhs"].get<double>()));
}

TEST_CASE("formats without a table fall back to JSON") {
  const auto& f = files();
  auto r = run({"fixpoint", "--channel", f.path("dep.json"), "--format", "text"});
  CHECK(r.code == 0);
  CHECK(r.report()["command"] == "fixpoint");
}
