#include "engel/family.hpp"

namespace engel {

namespace {

void require_no_dt(const ExtForm& f, std::size_t t_index, const std::string& t_name) {
    for (const auto& [index, c] : f.terms())
        if (index.contains(t_index))
            throw Error("family forms must not contain d" + t_name + " terms");
}

}  // namespace

OneParamFamily::OneParamFamily(Chart spatial, ExtForm theta_t, std::vector<ExtForm> omegas_t, std::string t_name)
    : spatial_(std::move(spatial)),
      extended_(spatial_.extended(t_name)),
      t_name_(std::move(t_name)),
      theta_(std::move(theta_t)),
      omegas_(std::move(omegas_t)) {
    require_same_chart(extended_, theta_.chart());
    if (theta_.degree() != 1) throw Error("theta_t must be a 1-form");
    require_no_dt(theta_, t_index(), t_name_);
    for (const auto& w : omegas_) {
        require_same_chart(extended_, w.chart());
        if (w.degree() != 1) throw Error("omega_t must be 1-forms");
        require_no_dt(w, t_index(), t_name_);
    }
    // Share the name table so chart checks against the members are pointer checks.
    theta_ = embed(theta_, extended_);
    for (auto& w : omegas_) w = embed(w, extended_);
}

OneParamFamily OneParamFamily::constant(const ExtForm& theta, const std::vector<ExtForm>& omegas,
                                        const std::string& t_name) {
    Chart spatial = theta.chart();
    Chart extended = spatial.extended(t_name);
    std::vector<ExtForm> lifted;
    for (const auto& w : omegas) lifted.push_back(embed(w, extended));
    return OneParamFamily(spatial, embed(theta, extended), std::move(lifted), t_name);
}

bool OneParamFamily::theta_is_constant() const {
    for (const auto& [index, c] : theta_.terms())
        if (c.degree_in(t_index()) > 0) return false;
    return true;
}

ExtForm OneParamFamily::at(const ExtForm& form_t, const Rational& t) const {
    const std::size_t ti = t_index();
    return form_t.map_coefficients(spatial_, [&](const PolyScalar& c) { return c.substitute(ti, t, spatial_); });
}

ExtForm OneParamFamily::time_derivative(const ExtForm& form_t) const {
    const std::size_t ti = t_index();
    return form_t.map_coefficients(extended_, [&](const PolyScalar& c) { return c.derivative(ti); });
}

ExtForm OneParamFamily::theta_at(const Rational& t) const { return at(theta_, t); }

std::vector<ExtForm> OneParamFamily::omegas_at(const Rational& t) const {
    std::vector<ExtForm> out;
    for (const auto& w : omegas_) out.push_back(at(w, t));
    return out;
}

ExtForm OneParamFamily::theta_dot_at(const Rational& t) const { return at(time_derivative(theta_), t); }

std::vector<ExtForm> OneParamFamily::omegas_dot_at(const Rational& t) const {
    std::vector<ExtForm> out;
    for (const auto& w : omegas_) out.push_back(at(time_derivative(w), t));
    return out;
}

void OneParamFamily::set_fixed_L(std::vector<VectorField> generators) {
    for (const auto& g : generators) require_same_chart(spatial_, g.chart());
    fixed_L_ = std::move(generators);
}

namespace {

struct EngelChart {
    Chart spatial{std::vector<std::string>{"x", "y", "z", "w"}};
    Chart ext = spatial.extended("t");
    PolyScalar v(const std::string& n) const { return PolyScalar::variable(ext, *ext.index_of(n)); }
    ExtForm d(const std::string& n) const { return ExtForm::differential(ext, *ext.index_of(n)); }
};

}  // namespace

OneParamFamily engel_translation_family() {
    EngelChart c;
    OneParamFamily fam(c.spatial, c.d("z") - c.v("y") * c.d("x"), {c.d("y") - (c.v("w") + c.v("t")) * c.d("x")});
    fam.set_fixed_L({VectorField::coordinate(c.spatial, 3)});
    return fam;
}

OneParamFamily engel_quadratic_family() {
    EngelChart c;
    PolyScalar coeff = c.v("w") + c.v("t") * c.v("w") * c.v("w");
    OneParamFamily fam(c.spatial, c.d("z") - c.v("y") * c.d("x"), {c.d("y") - coeff * c.d("x")});
    fam.set_fixed_L({VectorField::coordinate(c.spatial, 3)});
    return fam;
}

OneParamFamily pipeline_family() {
    EngelChart c;
    OneParamFamily fam(c.spatial, c.d("z") - (c.v("y") + c.v("t")) * c.d("x"),
                       {c.d("y") - (c.v("w") + c.v("t")) * c.d("x")});
    fam.set_fixed_L({VectorField::coordinate(c.spatial, 3)});
    return fam;
}

OneParamFamily moving_characteristic_family() {
    EngelChart c;
    return OneParamFamily(c.spatial, c.d("z") - c.v("y") * c.d("x") - c.v("t") * c.d("w"),
                          {c.d("y") - c.v("w") * c.d("x")});
}

}  // namespace engel
