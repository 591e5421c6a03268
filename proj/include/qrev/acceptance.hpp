#ifndef QREV_ACCEPTANCE_HPP
#define QREV_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qrev::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
};

struct Config {
  std::uint64_t seed = 20070601;
  std::size_t samples = 100000;
  unsigned workers = 8;
};

/// Runs every criterion in order; later criteria reuse constants measured by
/// earlier ones (the Eq.-17 residual prefactor).
std::vector<CriterionResult> run_all(const Config& cfg = {});

/// One line per criterion: "[PASS] 3 name: detail".
std::string format_line(const CriterionResult& r);

}  // namespace qrev::acceptance

#endif  // QREV_ACCEPTANCE_HPP
