#include "engel/chart.hpp"

namespace engel {

Chart::Chart(std::vector<std::string> names)
    : names_(std::make_shared<const std::vector<std::string>>(std::move(names))) {
    if (names_->empty()) throw Error("a chart needs at least one coordinate");
    for (std::size_t i = 0; i < names_->size(); ++i) {
        if ((*names_)[i].empty()) throw Error("empty coordinate name");
        for (std::size_t j = 0; j < i; ++j)
            if ((*names_)[i] == (*names_)[j])
                throw Error("duplicate coordinate name '" + (*names_)[i] + "'");
    }
}

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_->size(); ++i)
        if ((*names_)[i] == name) return i;
    return std::nullopt;
}

Chart Chart::extended(const std::string& name) const {
    auto names = *names_;
    names.push_back(name);
    return Chart(std::move(names));
}

Chart Chart::without(std::size_t index) const {
    auto names = *names_;
    names.erase(names.begin() + static_cast<std::ptrdiff_t>(index));
    return Chart(std::move(names));
}

RationalPoint::RationalPoint(Chart c, RationalVector x) : chart(std::move(c)), coords(std::move(x)) {
    if (coords.size() != chart.dim()) throw Error("point has wrong number of coordinates");
}

std::vector<double> RationalPoint::to_doubles() const {
    std::vector<double> out;
    out.reserve(coords.size());
    for (const auto& q : coords) out.push_back(q.get_d());
    return out;
}

std::string RationalPoint::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ", ";
        out += engel::to_string(coords[i]);
    }
    return out + ")";
}

}  // namespace engel
