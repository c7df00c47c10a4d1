#include "nv2d/vlasov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nv2d/characteristics.hpp"
#include "nv2d/errors.hpp"
#include "nv2d/grid_field.hpp"
#include "nv2d/parallel.hpp"

namespace nv2d {

namespace {

inline double trap_w(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

// Per spatial node, the momentum-index bounding box of nonzero f. The sweep
// traces only nodes inside the box union of the 3-cell spatial neighborhood
// (foot moves < one spatial cell, the cubic stencil reaches two more),
// inflated in p by the stencil plus a displacement budget.
struct PBox {
    int lo1 = 1 << 30, hi1 = -1, lo2 = 1 << 30, hi2 = -1;
    bool empty() const { return hi1 < lo1; }
    void merge(const PBox& o) {
        lo1 = std::min(lo1, o.lo1);
        hi1 = std::max(hi1, o.hi1);
        lo2 = std::min(lo2, o.lo2);
        hi2 = std::max(hi2, o.hi2);
    }
};

std::vector<PBox> momentum_boxes(const Grid4D& f) {
    const GridSpec2D& xs = f.xspec();
    const GridSpec2D& ps = f.pspec();
    const int nx = xs.nx, ny = xs.ny;
    std::vector<PBox> nz(static_cast<std::size_t>(nx) * ny);
    parallel_for(0, nx, [&](int i) {
        for (int j = 0; j < ny; ++j) {
            const double* slab = f.pslice(i, j);
            PBox& b = nz[static_cast<std::size_t>(i) * ny + j];
            for (int ip = 0; ip < ps.nx; ++ip)
                for (int jp = 0; jp < ps.ny; ++jp)
                    if (slab[ip * ps.ny + jp] != 0.0) {
                        b.lo1 = std::min(b.lo1, ip);
                        b.hi1 = std::max(b.hi1, ip);
                        b.lo2 = std::min(b.lo2, jp);
                        b.hi2 = std::max(b.hi2, jp);
                    }
        }
    });
    // spatial dilation by 3 cells, separably
    std::vector<PBox> tmp(nz.size()), out(nz.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            PBox b;
            for (int d = -3; d <= 3; ++d)
                if (i + d >= 0 && i + d < nx)
                    b.merge(nz[static_cast<std::size_t>(i + d) * ny + j]);
            tmp[static_cast<std::size_t>(i) * ny + j] = b;
        }
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            PBox b;
            for (int d = -3; d <= 3; ++d)
                if (j + d >= 0 && j + d < ny)
                    b.merge(tmp[static_cast<std::size_t>(i) * ny + d + j]);
            out[static_cast<std::size_t>(i) * ny + j] = b;
        }
    return out;
}

// One classical 4th-order backward step, inlined against the concrete field
// type so the grid sampler devirtualizes in the hot sweep. Mirrors
// rk4_char_step (same expressions, same rounding).
template <class Field>
inline CharState rk4_trace(const CharState& st, const Field& field, double h) {
    auto rhs = [&field](const CharState& a) {
        const FieldSample fs = field.sample(a.s, a.X);
        const Momentum2 m = relativize(a.P);
        return CharRhs{m.vhat, -s_phi(fs, m) * a.P - fs.grad / m.gamma};
    };
    const CharRhs k1 = rhs(st);
    const CharState s2{st.s + 0.5 * h, st.X + 0.5 * h * k1.dX, st.P + 0.5 * h * k1.dP};
    const CharRhs k2 = rhs(s2);
    const CharState s3{st.s + 0.5 * h, st.X + 0.5 * h * k2.dX, st.P + 0.5 * h * k2.dP};
    const CharRhs k3 = rhs(s3);
    const CharState s4{st.s + h, st.X + h * k3.dX, st.P + h * k3.dP};
    const CharRhs k4 = rhs(s4);
    CharState out;
    out.s = st.s + h;
    out.X = st.X + (h / 6.0) * (k1.dX + 2.0 * k2.dX + 2.0 * k3.dX + k4.dX);
    out.P = st.P + (h / 6.0) * (k1.dP + 2.0 * k2.dP + 2.0 * k3.dP + k4.dP);
    return out;
}

} // namespace

DistributionGrid sample_initial(const InitialData& data, const GridSpec2D& xspec,
                                const GridSpec2D& pspec) {
    DistributionGrid d;
    d.f = Grid4D(xspec, pspec);
    d.time = 0.0;
    for (int ix = 0; ix < xspec.nx; ++ix)
        for (int jx = 0; jx < xspec.ny; ++jx) {
            const Vec2 x = xspec.node(ix, jx);
            double* slab = d.f.pslice(ix, jx);
            for (int ip = 0; ip < pspec.nx; ++ip)
                for (int jp = 0; jp < pspec.ny; ++jp) {
                    const bool guard = ip < 2 || ip >= pspec.nx - 2 || jp < 2 ||
                                       jp >= pspec.ny - 2;
                    const double v = data.f_in(x, pspec.node(ip, jp));
                    if (guard && v != 0.0)
                        throw SupportOverflowError(
                            "sample_initial: f_in overlaps the momentum guard shells");
                    slab[ip * pspec.ny + jp] = guard ? 0.0 : v;
                }
        }
    return d;
}

template <class Field>
DistributionGrid sl_step_impl(const DistributionGrid& f, const Field& field, double dt,
                              SlStepStats* stats) {
    const GridSpec2D& xs = f.f.xspec();
    const GridSpec2D& ps = f.f.pspec();
    if (!(dt > 0.0) || dt > xs.h * (1.0 + 1e-12))
        throw ConfigError("sl_step: need 0 < dt <= h_x (foot must stay in the stencil halo)");

    // Overflow guard: abort once meaningful amplitude reaches 90% of the
    // momentum-grid radius or the ring next to the zeroed guard shells (one
    // step later the stencil would read clipped values and silently lose
    // mass). The trigger threshold is 1e-4 of the sup: cubic interpolation
    // spreads a dust halo of relative size <~1e-6 a few cells past the true
    // support, and a dust-level trigger would kill every healthy run.
    const double p_grid_radius = std::min(-ps.origin.x, -ps.origin.y);
    const double guard_radius = 0.9 * p_grid_radius;
    double sup_f = 0.0;
    for (std::size_t k = 0; k < f.f.size(); ++k) sup_f = std::max(sup_f, f.f.data()[k]);
    const double dust = 1e-4 * sup_f;
    for (int ip = 0; ip < ps.nx; ++ip)
        for (int jp = 0; jp < ps.ny; ++jp) {
            const bool edge_ring =
                ip <= 2 || ip >= ps.nx - 3 || jp <= 2 || jp >= ps.ny - 3;
            if (!edge_ring && norm(ps.node(ip, jp)) < guard_radius) continue;
            for (int ix = 0; ix < xs.nx; ++ix)
                for (int jx = 0; jx < xs.ny; ++jx)
                    if (f.f.at(ix, jx, ip, jp) > dust) {
                        char buf[160];
                        std::snprintf(buf, sizeof(buf),
                                      "sl_step: support reached |p|=%.6g (guard %.6g, grid "
                                      "radius %.6g) at t=%.6g",
                                      norm(ps.node(ip, jp)), guard_radius, p_grid_radius,
                                      f.time);
                        throw SupportOverflowError(buf);
                    }
        }

    const double t_new = f.time + dt;
    DistributionGrid out;
    out.f = Grid4D(xs, ps);
    out.time = t_new;

    // displacement budget backing the momentum-box margin
    const int kMargin = 4; // 2 stencil cells + 2 cells of momentum drift
    const double drift_budget = (kMargin - 2) * ps.h;

    const std::vector<PBox> boxes = momentum_boxes(f.f);
    std::vector<double> clipped_rows(xs.nx, 0.0);
    std::vector<double> drift_rows(xs.nx, 0.0);

    parallel_for(0, xs.nx, [&](int ix) {
        double clipped = 0.0;
        double max_drift = 0.0;
        for (int jx = 0; jx < xs.ny; ++jx) {
            const PBox& box = boxes[static_cast<std::size_t>(ix) * xs.ny + jx];
            if (box.empty()) continue;
            const int lo1 = std::max(2, box.lo1 - kMargin);
            const int hi1 = std::min(ps.nx - 3, box.hi1 + kMargin);
            const int lo2 = std::max(2, box.lo2 - kMargin);
            const int hi2 = std::min(ps.ny - 3, box.hi2 + kMargin);
            const Vec2 x = xs.node(ix, jx);
            const double phi_new = field.sample(t_new, x).phi;
            double* slab = out.f.pslice(ix, jx);
            for (int ip = lo1; ip <= hi1; ++ip)
                for (int jp = lo2; jp <= hi2; ++jp) {
                    const Vec2 p = ps.node(ip, jp);
                    CharState st{t_new, x, p};
                    const CharState foot = rk4_trace(st, field, -dt);
                    max_drift = std::max(max_drift, norm(foot.P - p));
                    const double fv = interp4_cubic(f.f, foot.X, foot.P);
                    if (fv == 0.0) continue;
                    const double phi_foot = field.sample(f.time, foot.X).phi;
                    double v = fv * std::exp(3.0 * (phi_new - phi_foot));
                    if (v < 0.0) {
                        clipped -= v;
                        v = 0.0;
                    }
                    slab[ip * ps.ny + jp] = v;
                }
        }
        clipped_rows[ix] = clipped;
        drift_rows[ix] = max_drift;
    });

    double max_drift = 0.0;
    for (double d : drift_rows) max_drift = std::max(max_drift, d);
    if (max_drift > drift_budget) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "sl_step: momentum drift %.6g exceeded the sweep budget %.6g "
                      "(force too strong for this dt / momentum grid)",
                      max_drift, drift_budget);
        throw ConfigError(buf);
    }

    if (stats != nullptr) {
        double total = 0.0;
        for (double c : clipped_rows) total += c;
        stats->clipped_mass = total * xs.h * xs.h * ps.h * ps.h;
    }
    return out;
}

DistributionGrid sl_step(const DistributionGrid& f, const FieldSampler& field, double dt,
                         SlStepStats* stats) {
    // the grid-backed sampler is final: dispatching on the concrete type lets
    // the whole sweep inline its bilinear reads
    if (const auto* g = dynamic_cast<const GridFieldSampler*>(&field))
        return sl_step_impl(f, *g, dt, stats);
    return sl_step_impl(f, field, dt, stats);
}

SupportReport support(const DistributionGrid& f, const Grid2D& phi, double running_p,
                      double running_barp, double threshold) {
    const GridSpec2D& xs = f.f.xspec();
    const GridSpec2D& ps = f.f.pspec();
    SupportReport r;
    double max_p = running_p;
    double max_barp = running_barp;
    double sup_f = 0.0;
    double mass = 0.0;
    for (int ix = 0; ix < xs.nx; ++ix)
        for (int jx = 0; jx < xs.ny; ++jx) {
            const double* slab = f.f.pslice(ix, jx);
            const double w_x = trap_w(ix, xs.nx) * trap_w(jx, xs.ny);
            const double ephi = std::exp(phi.interp(xs.node(ix, jx)));
            for (int ip = 0; ip < ps.nx; ++ip)
                for (int jp = 0; jp < ps.ny; ++jp) {
                    const double v = slab[ip * ps.ny + jp];
                    if (v == 0.0) continue;
                    sup_f = std::max(sup_f, v);
                    mass += w_x * trap_w(ip, ps.nx) * trap_w(jp, ps.ny) * v;
                    if (v > threshold) {
                        const double pn = norm(ps.node(ip, jp));
                        max_p = std::max(max_p, pn);
                        max_barp = std::max(max_barp, ephi * pn);
                    }
                }
        }
    r.P_t = max_p + 3.0;
    r.barP_t = max_barp + 3.0;
    r.sup_f = sup_f;
    r.mass = mass * xs.h * xs.h * ps.h * ps.h;
    return r;
}

double sigma_bc(const GridSpec2D& pspec, const std::function<double(Vec2)>& f_of_p, Vec2 xi) {
    if (norm(xi) > 1.0 + 1e-14) throw std::domain_error("sigma_bc: |xi| > 1");
    double sum = 0.0;
    for (int ip = 0; ip < pspec.nx; ++ip)
        for (int jp = 0; jp < pspec.ny; ++jp) {
            const Vec2 p = pspec.node(ip, jp);
            const double v = f_of_p(p);
            if (v == 0.0) continue;
            const Momentum2 m = relativize(p);
            const ConeCoordinate c = ConeCoordinate::from_xi_omega(xi, Vec2{1.0, 0.0});
            sum += trap_w(ip, pspec.nx) * trap_w(jp, pspec.ny) * v /
                   (m.gamma * one_plus_xi_dot_vhat(c, m));
        }
    return sum * pspec.h * pspec.h;
}

double sigma_bc(const Grid4D& f, int ix, int jx, Vec2 xi) {
    const GridSpec2D& ps = f.pspec();
    const double* slab = f.pslice(ix, jx);
    return sigma_bc(ps,
                    [&](Vec2 p) {
                        const int ip = static_cast<int>(std::lround((p.x - ps.origin.x) / ps.h));
                        const int jp = static_cast<int>(std::lround((p.y - ps.origin.y) / ps.h));
                        return slab[ip * ps.ny + jp];
                    },
                    xi);
}

GrowthFit sup_norm_growth_check(const std::vector<std::pair<double, double>>& t_supf) {
    if (t_supf.size() < 10)
        throw std::invalid_argument("sup_norm_growth_check: need >= 10 samples");
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = static_cast<double>(t_supf.size());
    for (const auto& [t, s] : t_supf) {
        const double y = std::log(std::max(s, 1e-300));
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    GrowthFit fit;
    const double denom = n * stt - st * st;
    fit.rate = denom != 0.0 ? (n * sty - st * sy) / denom : 0.0;
    const double b = (sy - fit.rate * st) / n;
    double rss = 0.0;
    for (const auto& [t, s] : t_supf) {
        const double y = std::log(std::max(s, 1e-300));
        const double e = y - (fit.rate * t + b);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

} // namespace nv2d
