#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "engel/exterior.hpp"

namespace engel {

class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_, column_;
};

using Value = std::variant<PolyScalar, VectorField, ExtForm>;

enum class ExpectedKind { any, scalar, vector_field, form };

struct ParseContext {
    Chart chart;  // for families: the extended chart, parameter last
    std::optional<std::string> parameter;
    std::map<std::string, Value> named;
};

/// Grammar: sums and products over rationals and coordinates, `^` as integer
/// power on scalars or wedge on forms, `/` by nonzero constants, `d_<c>` for
/// coordinate fields and `d<c>` for differentials. Identifiers resolve to a
/// named object, then a coordinate, then `d_<c>`, then `d<c>`.
/// A literal 0 becomes the zero object of the hinted kind.
Value parse_value(std::string_view source, const ParseContext& context, ExpectedKind hint = ExpectedKind::any,
                  int form_degree = 1);

VectorField parse_vector_field(std::string_view source, const ParseContext& context);
/// A form of the given degree; scalars are accepted as 0-forms when degree is 0.
ExtForm parse_form(std::string_view source, const ParseContext& context, int degree = 1);
PolyScalar parse_scalar(std::string_view source, const ParseContext& context);

std::string print(const PolyScalar& p);
/// "(x + 1)*d_y - d_z": multi-term coefficients are parenthesized.
std::string print(const VectorField& v);
/// "x*dx^dy": basis elements in index order.
std::string print(const ExtForm& a);
std::string print(const Value& v);

const char* kind_name(const Value& v);

}  // namespace engel
