#include "nv2d/initial_data.hpp"

#include <stdexcept>

namespace nv2d {

AnalyticScalarField gaussian_field(double amplitude, double width, Vec2 center) {
    AnalyticScalarField f;
    const double iw2 = 1.0 / (width * width);
    f.value = [=](Vec2 x) { return amplitude * std::exp(-norm2(x - center) * iw2); };
    f.grad = [=](Vec2 x) {
        const Vec2 z = x - center;
        return (-2.0 * iw2 * amplitude * std::exp(-norm2(z) * iw2)) * z;
    };
    f.hess = [=](Vec2 x) {
        const Vec2 z = x - center;
        const double v = amplitude * std::exp(-norm2(z) * iw2);
        Hess2 h;
        h.xx = v * (4.0 * z.x * z.x * iw2 * iw2 - 2.0 * iw2);
        h.yy = v * (4.0 * z.y * z.y * iw2 * iw2 - 2.0 * iw2);
        h.xy = v * 4.0 * z.x * z.y * iw2 * iw2;
        return h;
    };
    return f;
}

InitialData make_preset(const std::string& name, double amplitude, double width,
                        double p_radius, double offset) {
    InitialData d;
    d.name = name;
    if (name == "zero") return d;

    if (name == "gaussian-bump") {
        const double iw2 = 1.0 / (width * width);
        const double ir2 = 1.0 / (p_radius * p_radius);
        d.f_in = [=](Vec2 x, Vec2 p) {
            return amplitude * bump5(norm2(x) * iw2) * bump5(norm2(p) * ir2);
        };
        d.p_radius_at = [=](Vec2 x) { return norm2(x) * iw2 < 1.0 ? p_radius : 0.0; };
        d.p_support_radius = p_radius;
        d.x_support_radius = width;
        d.data_radius = width;
        return d;
    }

    if (name == "two-bump") {
        const double drift = 0.5;
        const double iw2 = 1.0 / (width * width);
        const double ir2 = 1.0 / (p_radius * p_radius);
        const Vec2 c{offset, 0.0};
        const Vec2 q{drift, 0.0};
        d.f_in = [=](Vec2 x, Vec2 p) {
            return amplitude * (bump5(norm2(x - c) * iw2) * bump5(norm2(p + q) * ir2) +
                                bump5(norm2(x + c) * iw2) * bump5(norm2(p - q) * ir2));
        };
        d.p_radius_at = [=](Vec2 x) {
            const bool in1 = norm2(x - c) * iw2 < 1.0;
            const bool in2 = norm2(x + c) * iw2 < 1.0;
            return (in1 || in2) ? drift + p_radius : 0.0;
        };
        d.p_support_radius = drift + p_radius;
        d.x_support_radius = offset + width;
        d.data_radius = offset + width;
        return d;
    }

    if (name == "vacuum-wave") {
        d.phi0 = gaussian_field(amplitude, width);
        // Gaussian tails are below round-off beyond 6 widths; treat that as
        // the data radius for the causality check.
        d.data_radius = 6.0 * width;
        return d;
    }

    throw std::invalid_argument("unknown preset: " + name);
}

} // namespace nv2d
