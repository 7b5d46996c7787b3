#pragma once

#include <optional>
#include <string>
#include <vector>

#include "engel/exterior.hpp"

namespace engel {

/// A t-parametrized Pfaffian system. Forms live on the extended chart
/// (spatial coordinates, then the parameter) and carry no dt terms.
class OneParamFamily {
public:
    /// theta_t and omegas_t must live on spatial.extended(t_name).
    OneParamFamily(Chart spatial, ExtForm theta_t, std::vector<ExtForm> omegas_t, std::string t_name = "t");
    /// A family constant in t built from spatial forms.
    static OneParamFamily constant(const ExtForm& theta, const std::vector<ExtForm>& omegas,
                                   const std::string& t_name = "t");

    const Chart& chart() const noexcept { return spatial_; }
    const Chart& extended_chart() const noexcept { return extended_; }
    const std::string& t_name() const noexcept { return t_name_; }
    std::size_t t_index() const noexcept { return spatial_.dim(); }
    std::size_t k() const noexcept { return omegas_.size(); }

    const ExtForm& theta_t() const noexcept { return theta_; }
    const std::vector<ExtForm>& omegas_t() const noexcept { return omegas_; }
    /// True when no coefficient of theta involves t.
    bool theta_is_constant() const;

    ExtForm theta_at(const Rational& t) const;
    std::vector<ExtForm> omegas_at(const Rational& t) const;
    /// d/dt of the forms, then evaluated at t.
    ExtForm theta_dot_at(const Rational& t) const;
    std::vector<ExtForm> omegas_dot_at(const Rational& t) const;

    /// d/dt of a family member as a form on the extended chart.
    ExtForm time_derivative(const ExtForm& form_t) const;
    /// Specializes a form on the extended chart at t.
    ExtForm at(const ExtForm& form_t, const Rational& t) const;

    const std::optional<std::vector<VectorField>>& fixed_L() const noexcept { return fixed_L_; }
    void set_fixed_L(std::vector<VectorField> generators);

private:
    Chart spatial_;
    Chart extended_;
    std::string t_name_;
    ExtForm theta_;
    std::vector<ExtForm> omegas_;
    std::optional<std::vector<VectorField>> fixed_L_;
};

/// theta = dz - y dx, omega = dy - (w+t) dx on (x, y, z, w); solved by X = -d_w.
OneParamFamily engel_translation_family();
/// theta = dz - y dx, omega = dy - (w + t w^2) dx; solved by X = -w^2/(1+2tw) d_w,
/// which keeps w + t w^2 constant along the flow.
OneParamFamily engel_quadratic_family();
/// theta_t = dz - (y+t) dx, omega_t = dy - (w+t) dx; composed field -d_y - d_w.
OneParamFamily pipeline_family();
/// theta_t = dz - y dx - t dw, omega = dy - w dx; its Cauchy characteristic moves with t.
OneParamFamily moving_characteristic_family();

}  // namespace engel
