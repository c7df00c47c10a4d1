#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "nv2d/errors.hpp"
#include "nv2d/phase_geometry.hpp"
#include "nv2d/vec2.hpp"

namespace nv2d {

// One field evaluation: phi, d_t phi and grad_x phi at a spacetime point.
struct FieldSample {
    double phi = 0.0;
    double phi_t = 0.0;
    Vec2 grad;
};

// Read-only sampling surface between the field and the transport side.
// Implementations must be safe for concurrent sampling.
class FieldSampler {
  public:
    virtual ~FieldSampler() = default;
    virtual FieldSample sample(double s, Vec2 x) const = 0;
};

class ZeroField final : public FieldSampler {
  public:
    FieldSample sample(double, Vec2) const override { return {}; }
};

// Closed-form field given by a callable (s, x) -> FieldSample.
class AnalyticField final : public FieldSampler {
  public:
    explicit AnalyticField(std::function<FieldSample(double, Vec2)> fn) : fn_(std::move(fn)) {}
    FieldSample sample(double s, Vec2 x) const override { return fn_(s, x); }

  private:
    std::function<FieldSample(double, Vec2)> fn_;
};

// Uniform-in-space field phi(s) = alpha * s.
class UniformRampField final : public FieldSampler {
  public:
    explicit UniformRampField(double alpha) : alpha_(alpha) {}
    FieldSample sample(double s, Vec2) const override { return {alpha_ * s, alpha_, {0.0, 0.0}}; }

  private:
    double alpha_;
};

// S(phi) = d_t phi + vhat . grad phi, evaluated from a sample.
inline double s_phi(const FieldSample& f, const Momentum2& m) {
    return f.phi_t + dot(m.vhat, f.grad);
}

// Momentum-space drift of the transport equation,
//   F(t, x, p) = S(phi) p + grad_x phi / sqrt(1+|p|^2).
inline Vec2 vlasov_force(const FieldSample& f, const Momentum2& m) {
    return s_phi(f, m) * m.p + f.grad / m.gamma;
}

} // namespace nv2d
