#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nv2d/field_sampler.hpp"
#include "nv2d/grid.hpp"
#include "nv2d/initial_data.hpp"

namespace nv2d {

// f(t, x, p) on the phase-space tensor grid. f >= 0 everywhere and the two
// outermost momentum shells are kept identically zero (compact support).
struct DistributionGrid {
    Grid4D f;
    double time = 0.0;
};

// Samples f_in at the nodes. Throws SupportOverflowError if the support does
// not fit strictly inside the momentum guard shells.
DistributionGrid sample_initial(const InitialData& data, const GridSpec2D& xspec,
                                const GridSpec2D& pspec);

struct SlStepStats {
    double clipped_mass = 0.0; // mass removed by clipping negative undershoots
};

// One backward semi-Lagrangian step over [t, t+dt]: trace each node backward
// through the field (one classical 4th-order step), read the upstream value
// by 4D cubic interpolation and apply the conformal transport weight
// exp(3 (phi(t+dt, x) - phi(t, X_foot))). Negative undershoots are clipped to
// zero with the removed mass recorded. Aborts with SupportOverflowError when
// the support reaches 90% of the momentum-grid radius (the run depends on
// the momentum support staying controlled; overrunning the grid silently
// would hide exactly that).
DistributionGrid sl_step(const DistributionGrid& f, const FieldSampler& field, double dt,
                         SlStepStats* stats = nullptr);

// Support and sup-norm bookkeeping. The "+3" offsets below follow the
// definition of the momentum-support functions
//   P(t)    = sup{ |p| : f(s,x,p) != 0, s <= t } + 3,
//   barP(t) = sup{ e^{phi(s,x)} |p| : f(s,x,p) != 0, s <= t } + 3.
// running_* carry the sup over earlier times (without the +3); threshold
// separates genuine support from interpolation dust.
struct SupportReport {
    double P_t = 3.0;
    double barP_t = 3.0;
    double sup_f = 0.0;
    double mass = 0.0;
};
SupportReport support(const DistributionGrid& f, const Grid2D& phi, double running_p,
                      double running_barp, double threshold);

// sigma_BC(t, x, xi) = int f / (sqrt(1+|p|^2)(1 + xi.vhat)) dp by trapezoid
// over the momentum grid. Requires |xi| <= 1.
double sigma_bc(const GridSpec2D& pspec, const std::function<double(Vec2)>& f_of_p, Vec2 xi);
double sigma_bc(const Grid4D& f, int ix, int jx, Vec2 xi);

// Least-squares fit of log sup f against t: sup-norm growth monitor
// (the bound sup f <= C e^{ct} has unknown constants, so this reports rather
// than asserts). Requires >= 10 samples.
struct GrowthFit {
    double rate = 0.0;     // fitted c
    double residual = 0.0; // rms residual of the log fit
};
GrowthFit sup_norm_growth_check(const std::vector<std::pair<double, double>>& t_supf);

} // namespace nv2d
