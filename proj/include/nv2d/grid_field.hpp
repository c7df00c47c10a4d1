#pragma once

#include <vector>

#include "nv2d/errors.hpp"
#include "nv2d/field_sampler.hpp"
#include "nv2d/field_solver.hpp"

namespace nv2d {

// Field sampler backed by stored grid levels: bilinear in space, linear in
// time between levels. Levels must be added in increasing time order.
class GridFieldSampler final : public FieldSampler {
  public:
    struct Level {
        double time = 0.0;
        const FieldState* field = nullptr;
        const GradientFields* grads = nullptr;
    };

    void add_level(const FieldState& field, const GradientFields& grads) {
        levels_.push_back({field.time, &field, &grads});
    }

    FieldSample sample(double s, Vec2 x) const override {
        if (levels_.empty()) throw OutOfDomainError("GridFieldSampler: no levels");
        if (levels_.size() == 1 || s <= levels_.front().time) return sample_level(0, x);
        if (s >= levels_.back().time) return sample_level(levels_.size() - 1, x);
        std::size_t hi = 1;
        while (levels_[hi].time < s) ++hi;
        const Level& a = levels_[hi - 1];
        const Level& b = levels_[hi];
        const double w = (s - a.time) / (b.time - a.time);
        const FieldSample fa = sample_level(hi - 1, x);
        const FieldSample fb = sample_level(hi, x);
        FieldSample out;
        out.phi = (1.0 - w) * fa.phi + w * fb.phi;
        out.phi_t = (1.0 - w) * fa.phi_t + w * fb.phi_t;
        out.grad = (1.0 - w) * fa.grad + w * fb.grad;
        return out;
    }

  private:
    FieldSample sample_level(std::size_t k, Vec2 x) const {
        const Level& l = levels_[k];
        FieldSample f;
        f.phi = l.field->phi.interp(x);
        f.phi_t = l.grads->phi_t.interp(x);
        f.grad = {l.grads->dx1.interp(x), l.grads->dx2.interp(x)};
        return f;
    }

    std::vector<Level> levels_;
};

} // namespace nv2d
