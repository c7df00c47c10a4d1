#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "nv2d/vec2.hpp"

namespace nv2d {

struct Hess2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

// Closed-form scalar field with enough derivatives for the differentiated
// Poisson formula (value + gradient + hessian).
struct AnalyticScalarField {
    std::function<double(Vec2)> value = [](Vec2) { return 0.0; };
    std::function<Vec2(Vec2)> grad = [](Vec2) { return Vec2{0.0, 0.0}; };
    std::function<Hess2(Vec2)> hess = [](Vec2) { return Hess2{}; };
};

// C^4 compactly supported profile: (1 - u)^5 on u < 1, zero beyond.
inline double bump5(double u) {
    if (u >= 1.0) return 0.0;
    const double v = 1.0 - u;
    const double v2 = v * v;
    return v2 * v2 * v;
}

// Initial data bundle: particle density sampler plus field data, with the
// support metadata the run bookkeeping relies on.
struct InitialData {
    std::string name;
    std::function<double(Vec2, Vec2)> f_in = [](Vec2, Vec2) { return 0.0; };
    AnalyticScalarField phi0;
    AnalyticScalarField phi1;
    // Local momentum support radius: f_in(x, .) vanishes for |p| > this.
    std::function<double(Vec2)> p_radius_at = [](Vec2) { return 0.0; };
    double p_support_radius = 0.0; // global sup over x of p_radius_at
    double x_support_radius = 0.0; // f_in vanishes for |x| > this
    double data_radius = 0.0;      // spatial radius covering all nonzero data
};

AnalyticScalarField gaussian_field(double amplitude, double width, Vec2 center = {0.0, 0.0});

// Named analytic presets.
//   gaussian-bump : compact phase-space bump at the origin, zero field data
//   two-bump      : two spatial bumps at +-(offset, 0) drifting toward each
//                   other with momentum offset -+(0.5, 0)
//   vacuum-wave   : f_in = 0, standing Gaussian field pulse (phi1 = 0)
//   zero          : everything zero
InitialData make_preset(const std::string& name, double amplitude, double width,
                        double p_radius, double offset);

} // namespace nv2d
