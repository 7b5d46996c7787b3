#pragma once

#include <string>

#include "json.hpp"

#include "engel/constructions.hpp"
#include "engel/flow.hpp"
#include "engel/moser.hpp"
#include "engel/verify.hpp"

namespace engel {

using Json = nlohmann::ordered_json;

enum class ReportFormat { text, json };

/// Per condition: {"pass": bool, "witnesses": [failing points, at most max_witnesses]}.
Json to_json(const FlagReport& r, const Chart& chart, std::size_t max_witnesses = 5);
Json to_json(const PfaffianReport& r, std::size_t max_witnesses = 5);
/// Fixture report with the expected failures compared against the computed ones.
Json fixture_json(const Fixture& f, const FlagReport& r);
Json to_json(const MoserSolveResult& r, const Chart& chart);
Json to_json(const KernelDistributions& k, const Chart& chart);
/// Grid rows are subsampled to about `rows` entries; the maxima cover every step.
Json to_json(const FlowVerification& v, std::size_t rows = 11);
Json to_json(const GrowthVector& g);
Json to_json(const CauchyResult& c, const Chart& chart);

/// Vectors printed as constant fields ("d_x - 2*d_y") in the given chart.
Json fields_json(std::span<const RationalVector> basis, const Chart& chart);
Json point_json(const RationalPoint& p);

/// JSON: two-space indent plus newline. Text: indented "key: value" lines,
/// scalar arrays inline, object arrays as "-" items.
std::string render(const Json& report, ReportFormat format);

}  // namespace engel
