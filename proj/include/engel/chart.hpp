#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engel/rational.hpp"

namespace engel {

/// An ordered list of coordinate names. Copies share the name table, so
/// comparing charts built from the same table is a pointer check.
class Chart {
public:
    explicit Chart(std::vector<std::string> names);

    std::size_t dim() const noexcept { return names_->size(); }
    const std::vector<std::string>& names() const noexcept { return *names_; }
    const std::string& name(std::size_t i) const { return names_->at(i); }
    std::optional<std::size_t> index_of(std::string_view name) const;

    /// Same chart with `name` appended as the last coordinate.
    Chart extended(const std::string& name) const;
    /// Same chart with coordinate `index` removed.
    Chart without(std::size_t index) const;

    bool operator==(const Chart& other) const noexcept {
        return names_ == other.names_ || *names_ == *other.names_;
    }
    bool operator!=(const Chart& other) const noexcept { return !(*this == other); }

private:
    std::shared_ptr<const std::vector<std::string>> names_;
};

inline void require_same_chart(const Chart& a, const Chart& b) {
    if (a != b) throw ChartMismatch();
}

/// Exact rational coordinates of a point of a chart.
struct RationalPoint {
    Chart chart;
    RationalVector coords;

    RationalPoint(Chart c, RationalVector x);
    static RationalPoint origin(const Chart& c) {
        return RationalPoint(c, RationalVector(c.dim(), Rational(0)));
    }
    std::vector<double> to_doubles() const;
    std::string to_string() const;
};

}  // namespace engel
