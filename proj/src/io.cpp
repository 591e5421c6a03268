#include "qrev/io.hpp"

#include <fstream>
#include <sstream>

namespace qrev::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double number(const json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

json to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    parse_fail("matrix needs rows, cols and data");
  if (!j.at("rows").is_number_integer() || !j.at("cols").is_number_integer())
    parse_fail("matrix rows and cols must be integers");
  const auto rows = j.at("rows").get<long>();
  const auto cols = j.at("cols").get<long>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || !data.is_array() || static_cast<long>(data.size()) != rows * cols)
    parse_fail("matrix data length must equal rows * cols");
  CMatrix m(rows, cols);
  for (long k = 0; k < rows * cols; ++k) {
    const json& z = data[k];
    if (!z.is_array() || z.size() != 2) parse_fail("complex entries are [re, im] pairs");
    m(k / cols, k % cols) = cplx(number(z[0], "real part"), number(z[1], "imaginary part"));
  }
  if (!all_finite(m)) parse_fail("matrix has non-finite entries");
  return m;
}

json to_json(const KrausChannel& ch) {
  json j{{"dim", ch.dim()}, {"kraus", json::array()}};
  for (const auto& a : ch.kraus) j["kraus"].push_back(to_json(a));
  if (ch.heat) j["heat"] = *ch.heat;
  return j;
}

json to_json(const HeatLabeledChannel& ch) {
  json j = to_json(ch.base);
  json idx = json::array();
  for (const auto& [i, k] : ch.bath_index) idx.push_back({i, k});
  j["bath_index"] = std::move(idx);
  j["beta"] = ch.beta;
  return j;
}

KrausChannel channel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kraus") || !j.at("kraus").is_array()) parse_fail("channel needs a kraus array");
  std::vector<CMatrix> ops;
  for (const auto& m : j.at("kraus")) ops.push_back(matrix_from_json(m));
  std::optional<std::vector<double>> heat;
  if (j.contains("heat") && !j.at("heat").is_null()) {
    heat.emplace();
    for (const auto& q : j.at("heat")) heat->push_back(number(q, "heat label"));
  }
  KrausChannel ch(std::move(ops), std::move(heat));
  if (j.contains("dim") && j.at("dim").get<long>() != ch.dim()) parse_fail("channel dim does not match Kraus operators");
  return ch;
}

HeatLabeledChannel heat_channel_from_json(const json& j, double default_beta) {
  HeatLabeledChannel hlc{channel_from_json(j), {}, default_beta};
  if (!hlc.base.heat) parse_fail("protocol steps need heat labels");
  if (j.contains("bath_index")) {
    for (const auto& pair : j.at("bath_index")) {
      if (!pair.is_array() || pair.size() != 2) parse_fail("bath_index entries are [i, j] pairs");
      hlc.bath_index.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
    if (hlc.bath_index.size() != hlc.base.size()) parse_fail("bath_index must have one pair per Kraus operator");
  }
  if (j.contains("beta")) hlc.beta = number(j.at("beta"), "beta");
  return hlc;
}

DensityMatrix density_from_json(const json& j, double tol) { return DensityMatrix(matrix_from_json(j), tol); }

json to_json(const StochasticMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.size(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.size(); ++c) row.push_back(m.m()(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

StochasticMatrix stochastic_from_json(const json& j, bool row_stochastic) {
  if (!j.is_array() || j.empty()) parse_fail("stochastic matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  RMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != n) parse_fail("stochastic matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = number(j[r][c], "matrix entry");
  }
  if (row_stochastic) m.transposeInPlace();
  return StochasticMatrix(std::move(m));
}

json to_json(const ProbVector& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

ProbVector prob_from_json(const json& j) {
  if (!j.is_array()) parse_fail("probability vector must be an array");
  RVector p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p(static_cast<Eigen::Index>(i)) = number(j[i], "probability");
  return ProbVector(std::move(p));
}

json to_json(const ThermostatedProtocolSpec& spec) {
  json hs = json::array();
  for (const auto& h : spec.h_sys) hs.push_back(to_json(h));
  return {{"beta", spec.beta},
          {"hsys", std::move(hs)},
          {"builder",
           {{"hbath", to_json(spec.h_bath)},
            {"hint", to_json(spec.h_int)},
            {"time", spec.time},
            {"epsilon", spec.epsilon}}}};
}

json to_json(const Protocol& p) {
  json j{{"beta", p.beta}, {"steps", json::array()}, {"hsys", json::array()}};
  for (const auto& s : p.steps) j["steps"].push_back(to_json(s));
  for (const auto& h : p.h_sys) j["hsys"].push_back(to_json(h));
  if (p.epsilon) j["epsilon"] = *p.epsilon;
  j["init_basis"] = to_json(p.init_basis);
  j["final_basis"] = to_json(p.final_basis);
  return j;
}

std::optional<ThermostatedProtocolSpec> protocol_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("builder")) return std::nullopt;
  const json& b = j.at("builder");
  ThermostatedProtocolSpec spec;
  spec.beta = number(j.at("beta"), "beta");
  for (const auto& h : j.at("hsys")) spec.h_sys.push_back(matrix_from_json(h));
  spec.h_bath = matrix_from_json(b.at("hbath"));
  spec.h_int = matrix_from_json(b.at("hint"));
  spec.time = number(b.at("time"), "time");
  spec.epsilon = number(b.at("epsilon"), "epsilon");
  return spec;
}

Protocol protocol_from_json(const json& j) {
  if (!j.is_object() || !j.contains("beta") || !j.contains("hsys")) parse_fail("protocol needs beta and hsys");
  if (!j.contains("steps")) {
    const auto spec = protocol_spec_from_json(j);
    if (!spec) parse_fail("protocol needs steps or a builder block");
    return build_protocol(*spec);
  }
  const double beta = number(j.at("beta"), "beta");
  std::vector<HeatLabeledChannel> steps;
  for (const auto& s : j.at("steps")) steps.push_back(heat_channel_from_json(s, beta));
  std::vector<CMatrix> hs;
  for (const auto& h : j.at("hsys")) hs.push_back(matrix_from_json(h));
  std::optional<double> eps;
  if (j.contains("epsilon")) eps = number(j.at("epsilon"), "epsilon");
  else if (j.contains("builder")) eps = number(j.at("builder").at("epsilon"), "epsilon");
  Protocol p = make_protocol(std::move(steps), std::move(hs), beta, eps);
  if (j.contains("init_basis")) p.init_basis = matrix_from_json(j.at("init_basis"));
  if (j.contains("final_basis")) p.final_basis = matrix_from_json(j.at("final_basis"));
  validate_protocol(p);
  return p;
}

json to_json(const Trajectory& tr) {
  return {{"e0", tr.e0}, {"alphas", tr.alphas}, {"e_tau", tr.e_tau}, {"heats", tr.heats}, {"q_total", tr.q_total}};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_file(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace qrev::io
