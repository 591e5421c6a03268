#ifndef QREV_IO_HPP
#define QREV_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "qrev/driven.hpp"

namespace qrev::io {

using json = nlohmann::json;

// Matrices: {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order.
json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

// Channels: {"dim": d, "kraus": [matrix...], "heat": [q...]?, "bath_index": [[i, j]...]?, "beta": b?}
json to_json(const KrausChannel& ch);
json to_json(const HeatLabeledChannel& ch);
KrausChannel channel_from_json(const json& j);
/// Requires heat labels; bath_index defaults to empty, beta to `default_beta`.
HeatLabeledChannel heat_channel_from_json(const json& j, double default_beta);

DensityMatrix density_from_json(const json& j, double tol = 1e-10);

json to_json(const StochasticMatrix& m);
/// Rows j, columns i. With row_stochastic the input is read as m[i][j] and transposed.
StochasticMatrix stochastic_from_json(const json& j, bool row_stochastic = false);
json to_json(const ProbVector& p);
ProbVector prob_from_json(const json& j);

// Protocols: {"beta": b, "steps": [channel...], "hsys": [matrix...], "epsilon": e?,
//             "init_basis": matrix?, "final_basis": matrix?,
//             "builder": {"hbath": matrix, "hint": matrix, "time": t, "epsilon": e}?}
json to_json(const Protocol& p);
json to_json(const ThermostatedProtocolSpec& spec);
Protocol protocol_from_json(const json& j);
/// Present when the document carries a "builder" block (needed for epsilon sweeps).
std::optional<ThermostatedProtocolSpec> protocol_spec_from_json(const json& j);

json to_json(const Trajectory& tr);

json read_file(const std::string& path);
std::string read_text(const std::string& path);
void write_file(const std::string& path, const json& j);

}  // namespace qrev::io

#endif  // QREV_IO_HPP
