#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dlstrata/report.hpp"
#include "dlstrata/strata.hpp"

namespace dls {

inline constexpr const char* kBudgetEnv = "DLSTRATA_BUDGET";

// Exit code for malformed arguments or violated preconditions.
inline constexpr int kUsageError = 2;

// q = p^e with p prime; nullopt otherwise.
std::optional<std::pair<unsigned, unsigned>> split_prime_power(std::uint64_t q);

// Budget precedence: explicit flag, then the environment variable, then fallback.
std::uint64_t resolve_budget(std::optional<std::uint64_t> flag, std::uint64_t fallback);

// Keys: case, n, h, t, t1, t2, q (or p and e), k, form.
StrataConfig strata_config_from_json(const json& j);

// Runs one command line (argv[0] is the program name), writing the report to out and
// diagnostics to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dls
