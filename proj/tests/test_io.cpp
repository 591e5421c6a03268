#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cstring>
#include <filesystem>

#include "qrev/io.hpp"

using namespace qrev;
using namespace qrev::test;
using qrev::io::json;

namespace {

bool bit_equal(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(), sizeof(cplx) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("matrix round trip is bit exact, through text too") {
  Rng rng(60);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix m = fixtures::ginibre(1 + trial % 4, 1 + (trial * 7) % 5, rng);
    if (trial % 3 == 0) m(0, 0) = cplx(1e-300, -3.0e300);
    CHECK(bit_equal(io::matrix_from_json(io::to_json(m)), m));
    CHECK(bit_equal(io::matrix_from_json(json::parse(io::to_json(m).dump())), m));
  }
  CMatrix empty(0, 0);
  CHECK(io::matrix_from_json(io::to_json(empty)).size() == 0);
}

TEST_CASE("matrix layout is row major") {
  json j = json::parse(R"({"rows": 2, "cols": 2, "data": [[1, 0], [2, 0], [3, 0], [4, 1]]})");
  CMatrix m = io::matrix_from_json(j);
  CHECK(m(0, 1) == cplx(2.0));
  CHECK(m(1, 0) == cplx(3.0));
  CHECK(m(1, 1) == cplx(4.0, 1.0));
}

TEST_CASE("malformed documents") {
  auto code = [](const char* text) {
    return thrown_code([&] { io::matrix_from_json(json::parse(text)); });
  };
  CHECK(code(R"({"rows": 2, "cols": 2, "data": [[1, 0]]})") == "ParseError");
  CHECK(code(R"({"rows": 1, "cols": 1, "data": [1]})") == "ParseError");
  CHECK(code(R"({"rows": "1", "cols": 1, "data": [[1, 0]]})") == "ParseError");
  CHECK(code(R"({"rows": 1, "cols": 1, "data": [["x", 0]]})") == "ParseError");
  CHECK(code(R"([1, 2])") == "ParseError");
  CHECK(thrown_code([] { io::channel_from_json(json::parse(R"({"dim": 2})")); }) == "ParseError");
  CHECK(thrown_code([] { io::read_file("/nonexistent/qrev.json"); }) == "ParseError");
}

TEST_CASE("channel round trip keeps heat labels and bath indices") {
  Rng rng(61);
  auto ch = fixtures::random_channel(3, 2, rng);
  ch.heat = std::vector<double>{0.25, -0.75};
  auto back = io::channel_from_json(io::to_json(ch));
  REQUIRE(back.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) CHECK(bit_equal(back.kraus[k], ch.kraus[k]));
  CHECK(*back.heat == *ch.heat);

  HeatLabeledChannel hlc{ch, {{0, 1}, {1, 0}}, 0.5};
  auto hb = io::heat_channel_from_json(io::to_json(hlc), 1.0);
  CHECK(hb.bath_index == hlc.bath_index);
  CHECK(hb.beta == 0.5);

  KrausChannel plain({CMatrix::Identity(2, 2)});
  CHECK(thrown_code([&] { io::heat_channel_from_json(io::to_json(plain), 1.0); }) == "ParseError");
  json wrong_dim = io::to_json(plain);
  wrong_dim["dim"] = 3;
  CHECK(thrown_code([&] { io::channel_from_json(wrong_dim); }) == "ParseError");
}

TEST_CASE("stochastic matrices and distributions") {
  json cols = json::parse("[[0.9, 0.2], [0.1, 0.8]]");
  auto m = io::stochastic_from_json(cols);
  CHECK(m.m()(1, 0) == 0.1);
  json rows = json::parse("[[0.9, 0.1], [0.2, 0.8]]");
  CHECK((io::stochastic_from_json(rows, true).m() - m.m()).norm() == 0.0);
  CHECK(thrown_code([&] { io::stochastic_from_json(rows); }) == "NotStochastic");
  CHECK(io::to_json(m) == cols);

  auto p = io::prob_from_json(json::parse("[0.25, 0.75]"));
  CHECK(p[1] == 0.75);
  CHECK(io::to_json(p) == json::parse("[0.25, 0.75]"));
}

TEST_CASE("protocol round trip") {
  Rng rng(62);
  ThermostatedProtocolSpec spec;
  spec.h_sys = {fixtures::random_hermitian(2, rng), fixtures::random_hermitian(2, rng)};
  spec.h_bath = diag({0.0, 0.8});
  spec.h_int = fixtures::random_hermitian(4, rng);
  spec.epsilon = 0.05;
  auto p = build_protocol(spec);

  auto back = io::protocol_from_json(json::parse(io::to_json(p).dump()));
  REQUIRE(back.length() == 2);
  CHECK(back.beta == p.beta);
  CHECK(back.epsilon == p.epsilon);
  for (std::size_t t = 0; t < 2; ++t) {
    CHECK(bit_equal(back.h_sys[t], p.h_sys[t]));
    CHECK(back.steps[t].bath_index == p.steps[t].bath_index);
    for (std::size_t k = 0; k < 4; ++k) CHECK(bit_equal(back.steps[t].base.kraus[k], p.steps[t].base.kraus[k]));
  }
  CHECK(bit_equal(back.init_basis, p.init_basis));

  // A builder-only document is expanded on load and round-trips its recipe.
  json recipe = io::to_json(spec);
  auto built = io::protocol_from_json(recipe);
  CHECK(super_distance(super_matrix(built.steps[1].base), super_matrix(p.steps[1].base)) == 0.0);
  auto again = io::protocol_spec_from_json(recipe);
  REQUIRE(again);
  CHECK(again->epsilon == 0.05);
  CHECK(bit_equal(again->h_int, spec.h_int));
  CHECK_FALSE(io::protocol_spec_from_json(io::to_json(p)));
}

TEST_CASE("files") {
  auto path = (std::filesystem::temp_directory_path() / "qrev_io_test.json").string();
  json j = io::to_json(CMatrix(CMatrix::Identity(2, 2)));
  io::write_file(path, j);
  CHECK(io::read_file(path) == j);
  std::filesystem::remove(path);
}
