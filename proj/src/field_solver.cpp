#include "nv2d/field_solver.hpp"

#include <cmath>
#include <stdexcept>

#include "nv2d/errors.hpp"
#include "nv2d/parallel.hpp"

namespace nv2d {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

// Trapezoid weight for node i of n (1/2 at the ends).
inline double trap_w(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

Grid2D laplacian_plus_source(const Grid2D& phi, const Grid2D& source) {
    const GridSpec2D& s = phi.spec();
    Grid2D out(s);
    const double inv_h2 = 1.0 / (s.h * s.h);
    parallel_for(1, s.nx - 1, [&](int i) {
        for (int j = 1; j < s.ny - 1; ++j) {
            const double lap = (phi.at(i - 1, j) + phi.at(i + 1, j) + phi.at(i, j - 1) +
                                phi.at(i, j + 1) - 4.0 * phi.at(i, j)) *
                               inv_h2;
            out.at(i, j) = lap + source.at(i, j);
        }
    });
    return out;
}

} // namespace

MomentFields moments(const Grid4D& f) {
    const GridSpec2D& xs = f.xspec();
    const GridSpec2D& ps = f.pspec();
    // compact support must not touch the momentum boundary
    for (int ix = 0; ix < xs.nx; ++ix)
        for (int jx = 0; jx < xs.ny; ++jx) {
            const double* slab = f.pslice(ix, jx);
            for (int ip = 0; ip < ps.nx; ++ip)
                for (int jp = 0; jp < ps.ny; ++jp)
                    if ((ip == 0 || ip == ps.nx - 1 || jp == 0 || jp == ps.ny - 1) &&
                        slab[ip * ps.ny + jp] != 0.0)
                        throw SupportOverflowError("moments: f nonzero on momentum boundary");
        }

    MomentFields m;
    m.mu0 = Grid2D(xs);
    m.mu_e = Grid2D(xs);
    m.mu_p = VecGrid2D(xs);
    const double cell = ps.h * ps.h;
    parallel_for(0, xs.nx, [&](int ix) {
        for (int jx = 0; jx < xs.ny; ++jx) {
            const double* slab = f.pslice(ix, jx);
            double s0 = 0.0, se = 0.0, sp1 = 0.0, sp2 = 0.0;
            for (int ip = 0; ip < ps.nx; ++ip) {
                const double wi = trap_w(ip, ps.nx);
                const double p1 = ps.origin.x + ps.h * ip;
                for (int jp = 0; jp < ps.ny; ++jp) {
                    const double v = slab[ip * ps.ny + jp];
                    if (v == 0.0) continue;
                    const double w = wi * trap_w(jp, ps.ny);
                    const double p2 = ps.origin.y + ps.h * jp;
                    const double gamma = std::sqrt(1.0 + p1 * p1 + p2 * p2);
                    s0 += w * v / gamma;
                    se += w * v * gamma;
                    sp1 += w * v * p1;
                    sp2 += w * v * p2;
                }
            }
            m.mu0.at(ix, jx) = s0 * cell;
            m.mu_e.at(ix, jx) = se * cell;
            m.mu_p.c1.at(ix, jx) = sp1 * cell;
            m.mu_p.c2.at(ix, jx) = sp2 * cell;
        }
    });
    return m;
}

FieldState leapfrog_step(const FieldState& state, const Grid2D& source_now,
                         const Grid2D& source_next, double dt) {
    const GridSpec2D& s = state.phi.spec();
    if (!s.conformant(source_now.spec()) || !s.conformant(source_next.spec()) ||
        !s.conformant(state.phi_t.spec()))
        throw std::invalid_argument("leapfrog_step: mismatched grids");
    if (!(dt > 0.0) || dt > 0.45 * s.h + 1e-15)
        throw ConfigError("leapfrog_step: CFL violated, need dt <= 0.45 h");

    const Grid2D accel = laplacian_plus_source(state.phi, source_now);
    FieldState next;
    next.time = state.time + dt;
    next.phi = state.phi;   // edges keep their values
    next.phi_t = state.phi_t;
    parallel_for(1, s.nx - 1, [&](int i) {
        for (int j = 1; j < s.ny - 1; ++j)
            next.phi.at(i, j) =
                state.phi.at(i, j) + dt * state.phi_t.at(i, j) + 0.5 * dt * dt * accel.at(i, j);
    });
    const Grid2D accel_next = laplacian_plus_source(next.phi, source_next);
    parallel_for(1, s.nx - 1, [&](int i) {
        for (int j = 1; j < s.ny - 1; ++j)
            next.phi_t.at(i, j) =
                state.phi_t.at(i, j) + 0.5 * dt * (accel.at(i, j) + accel_next.at(i, j));
    });
    return next;
}

FieldState leapfrog_step(const FieldState& state, const Grid2D& source, double dt) {
    return leapfrog_step(state, source, source, dt);
}

GradientFields gradients(const FieldState& state) {
    const GridSpec2D& s = state.phi.spec();
    if (s.nx < 3 || s.ny < 3) throw std::invalid_argument("gradients: need N >= 3");
    GradientFields g;
    g.phi_t = state.phi_t;
    g.dx1 = Grid2D(s);
    g.dx2 = Grid2D(s);
    const double inv2h = 0.5 / s.h;
    const Grid2D& u = state.phi;
    parallel_for(0, s.nx, [&](int i) {
        for (int j = 0; j < s.ny; ++j) {
            double d1;
            if (i == 0)
                d1 = (-3.0 * u.at(0, j) + 4.0 * u.at(1, j) - u.at(2, j)) * inv2h;
            else if (i == s.nx - 1)
                d1 = (3.0 * u.at(i, j) - 4.0 * u.at(i - 1, j) + u.at(i - 2, j)) * inv2h;
            else
                d1 = (u.at(i + 1, j) - u.at(i - 1, j)) * inv2h;
            double d2;
            if (j == 0)
                d2 = (-3.0 * u.at(i, 0) + 4.0 * u.at(i, 1) - u.at(i, 2)) * inv2h;
            else if (j == s.ny - 1)
                d2 = (3.0 * u.at(i, j) - 4.0 * u.at(i, j - 1) + u.at(i, j - 2)) * inv2h;
            else
                d2 = (u.at(i, j + 1) - u.at(i, j - 1)) * inv2h;
            g.dx1.at(i, j) = d1;
            g.dx2.at(i, j) = d2;
        }
    });
    return g;
}

Grid2D energy_density(const MomentFields& mom, const GradientFields& grads) {
    const GridSpec2D& s = mom.mu_e.spec();
    if (!s.conformant(grads.dx1.spec()))
        throw std::invalid_argument("energy_density: mismatched grids");
    Grid2D e(s);
    for (int i = 0; i < s.nx; ++i)
        for (int j = 0; j < s.ny; ++j) {
            const double pt = grads.phi_t.at(i, j);
            const double g1 = grads.dx1.at(i, j);
            const double g2 = grads.dx2.at(i, j);
            e.at(i, j) = kFourPi * mom.mu_e.at(i, j) + 0.5 * (pt * pt + g1 * g1 + g2 * g2);
        }
    return e;
}

double total_energy(const Grid2D& e) {
    const GridSpec2D& s = e.spec();
    double sum = 0.0;
    for (int i = 0; i < s.nx; ++i) {
        const double wi = trap_w(i, s.nx);
        for (int j = 0; j < s.ny; ++j) sum += wi * trap_w(j, s.ny) * e.at(i, j);
    }
    return sum * s.h * s.h;
}

double energy_identity_residual(const EnergyLevel& prev, const EnergyLevel& mid,
                                const EnergyLevel& next, double dt) {
    const GridSpec2D& s = mid.field->phi.spec();
    if (!s.conformant(prev.field->phi.spec()) || !s.conformant(next.field->phi.spec()))
        throw std::invalid_argument("energy_identity_residual: mismatched grids");
    const GradientFields gp = gradients(*prev.field);
    const GradientFields gm = gradients(*mid.field);
    const GradientFields gn = gradients(*next.field);
    const Grid2D ep = energy_density(*prev.mom, gp);
    const Grid2D en = energy_density(*next.mom, gn);

    // flux at the middle level
    Grid2D f1(s), f2(s);
    for (int i = 0; i < s.nx; ++i)
        for (int j = 0; j < s.ny; ++j) {
            const double pt = gm.phi_t.at(i, j);
            f1.at(i, j) = -pt * gm.dx1.at(i, j) + kFourPi * mid.mom->mu_p.c1.at(i, j);
            f2.at(i, j) = -pt * gm.dx2.at(i, j) + kFourPi * mid.mom->mu_p.c2.at(i, j);
        }

    double worst = 0.0;
    const double inv2dt = 0.5 / dt;
    const double inv2h = 0.5 / s.h;
    for (int i = 1; i < s.nx - 1; ++i)
        for (int j = 1; j < s.ny - 1; ++j) {
            const double de = (en.at(i, j) - ep.at(i, j)) * inv2dt;
            const double divf = (f1.at(i + 1, j) - f1.at(i - 1, j)) * inv2h +
                                (f2.at(i, j + 1) - f2.at(i, j - 1)) * inv2h;
            worst = std::max(worst, std::abs(de + divf));
        }
    return worst;
}

} // namespace nv2d
