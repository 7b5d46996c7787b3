#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "engel/distribution.hpp"
#include "engel/expression.hpp"
#include "engel/family.hpp"

namespace engel {

/// The CLI input format: one JSON object whose numbers are all strings.
///
///   {"chart": ["x", "y", "z", "w"], "parameter": "t",
///    "objects": [{"name": "X", "kind": "vector_field", "expr": "d_w"}, ...],
///    "distribution": ["X", "Y"], "pfaffian": {"theta": "th", "omegas": ["om"]},
///    "points": [["0", "1/2", "0", "-3"]], "start": ["0.2", "-0.1", "0.3", "0.5"],
///    "L": ["X"], "bracket": ["X", "Y"], "params": {"n": "2"}}
///
/// kind is vector_field, one_form, or family (a 1-form whose coefficients may
/// involve the parameter). Point coordinates accept integers, p/q and finite
/// decimals, all read exactly.
struct NamedObject {
    std::string name;
    std::string kind;
    std::string expr;
};

struct InputDocument {
    std::vector<std::string> chart;
    std::optional<std::string> parameter;
    std::vector<NamedObject> objects;
    std::vector<std::string> distribution;
    std::optional<std::string> theta;
    std::vector<std::string> omegas;
    std::vector<std::vector<std::string>> points;
    std::vector<std::string> start;
    std::vector<std::string> L;
    std::vector<std::string> bracket;
    std::map<std::string, std::string> params;
};

/// Throws Error with an "input:" prefix on malformed documents.
InputDocument parse_document(const std::string& json_text);
/// Canonical JSON text (fixed key order, two-space indent).
std::string to_json(const InputDocument& doc);

/// A document with every expression parsed.
struct ResolvedDocument {
    Chart chart;
    std::string parameter;
    std::map<std::string, Value> objects;      // on chart
    std::map<std::string, ExtForm> families;   // on the extended chart
    std::vector<RationalPoint> points;
    const InputDocument* source = nullptr;

    Distribution distribution() const;
    /// Pfaffian pair from spatial one_form objects.
    std::pair<ExtForm, std::vector<ExtForm>> pfaffian() const;
    /// Family from family objects; spatial one_forms are lifted as constants.
    OneParamFamily family() const;
    std::optional<std::vector<double>> start() const;
    const VectorField& field(const std::string& name) const;
};

ResolvedDocument resolve(const InputDocument& doc);

/// Document naming the generators `<stem>1..` and listing them as the distribution.
InputDocument distribution_document(const Distribution& d, const std::string& stem = "V");
/// Document naming the forms Theta, Omega1.. and listing them as the Pfaffian pair.
InputDocument pfaffian_document(const ExtForm& theta, const std::vector<ExtForm>& omegas);

/// "a,b;c,d" -> points; every coordinate an exact rational.
std::vector<RationalPoint> parse_points(const std::string& text, const Chart& chart);

}  // namespace engel
