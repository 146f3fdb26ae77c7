#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace holoball {

/// One acceptance criterion outcome. The CSV payload is deterministic for a
/// fixed (seed, level): fixed row order, 17-digit formatting, no timestamps.
struct CheckResult {
    int criterion = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    std::string csv_header;
    std::vector<std::string> csv_rows;
    // Optional companion report in a different row format (e.g. the
    // per-norm rows emitted alongside the equivalence brackets).
    std::string aux_csv_name;
    std::string aux_csv_header;
    std::vector<std::string> aux_csv_rows;
};

struct CheckContext {
    std::uint64_t seed = 12345;
    int level = 1; // scales the base quadrature levels
    std::optional<int> n_override;
    std::optional<double> s_override;
};

/// Runs acceptance criterion id (1..14) under the context. Criterion 15
/// (byte-identical reruns) is exercised by the acceptance binary against the
/// command-line tool.
CheckResult run_criterion(int id, const CheckContext& ctx);

/// Suite layer: named groups of criteria matching the command-line tool.
const std::vector<std::string>& suite_names();
std::vector<int> suite_criteria(const std::string& suite);

/// Validates (n, s) overrides against the suite's theorem hypotheses;
/// returns the violated hypothesis, or nullopt when admissible.
std::optional<std::string> suite_validate(const std::string& suite,
                                          std::optional<int> n,
                                          std::optional<double> s);

std::vector<CheckResult> run_suite(const std::string& suite, const CheckContext& ctx);

} // namespace holoball
