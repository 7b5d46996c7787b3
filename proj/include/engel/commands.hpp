#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "engel/report.hpp"

namespace engel {

inline constexpr const char* kSubcommands[] = {"bracket", "prolong", "normal-form", "fixtures", "growth",
                                               "cauchy",  "check",   "pfaffian",    "moser-verify", "pipeline"};

/// Unset options fall back to the document's "params", then to defaults.
struct CommandOptions {
    ReportFormat format = ReportFormat::text;
    std::string points;  // "a,b;c,d"
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> steps;
    std::optional<double> h;
    std::optional<double> tolerance;
    std::optional<int> n, l, r;
    std::optional<std::string> export_fixture;  // fixtures --export a|b|c
    std::optional<std::string> family;          // built-in family instead of a document
    bool parallel = false;
};

struct CommandResult {
    int exit_code = 0;  // 0 success or true verdict, 1 input error, 2 hypothesis violation or false verdict
    std::string output;
    std::string error;
};

/// Never throws: every failure is folded into the exit code and error text.
/// `document` is the raw JSON text, empty for subcommands that need none.
CommandResult run_subcommand(const std::string& name, const std::string& document, const CommandOptions& options);

/// Names accepted by CommandOptions::family.
inline constexpr const char* kBuiltinFamilies[] = {"translation", "quadratic", "pipeline", "moving-characteristic"};

}  // namespace engel
