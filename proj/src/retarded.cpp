#include "nv2d/retarded.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nv2d/errors.hpp"
#include "nv2d/field_sampler.hpp"

namespace nv2d {

namespace {

// Composite Simpson nodes/weights on [0, pi/2]; panel count rounded up to even.
void simpson_theta(int n_panels, std::vector<double>& nodes, std::vector<double>& weights) {
    int n = n_panels < 2 ? 2 : n_panels;
    if (n % 2 != 0) ++n;
    const double h = M_PI_2 / n;
    nodes.resize(n + 1);
    weights.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        nodes[j] = h * j;
        double w;
        if (j == 0 || j == n)
            w = 1.0;
        else if (j % 2 == 1)
            w = 4.0;
        else
            w = 2.0;
        weights[j] = w * h / 3.0;
    }
}

std::vector<Vec2> circle_directions(int n_alpha) {
    std::vector<Vec2> omega(n_alpha);
    for (int k = 0; k < n_alpha; ++k) {
        const double a = 2.0 * M_PI * k / n_alpha;
        omega[k] = {std::cos(a), std::sin(a)};
    }
    return omega;
}

} // namespace

double cone_quadrature(const std::function<double(double, Vec2)>& g, double t, Vec2 x,
                       int n_theta, int n_tau) {
    if (t < 0.0) throw std::invalid_argument("cone_quadrature: t < 0");
    if (t == 0.0) return 0.0;
    std::vector<double> th, wth;
    simpson_theta(n_theta, th, wth);
    const int n_alpha = 2 * static_cast<int>(th.size() - 1);
    const std::vector<Vec2> omega = circle_directions(n_alpha);
    const double w_alpha = 2.0 * M_PI / n_alpha;
    const double dtau = t / n_tau;

    double total = 0.0;
    for (int it = 0; it < n_tau; ++it) {
        const double tau = (it + 0.5) * dtau;
        const double R = t - tau;
        double inner = 0.0;
        for (std::size_t j = 0; j < th.size(); ++j) {
            const double s = std::sin(th[j]);
            double ring = 0.0;
            for (const Vec2& om : omega) ring += g(tau, x + (R * s) * om);
            inner += wth[j] * s * ring;
        }
        total += dtau * R * inner * w_alpha;
    }
    return total;
}

double poisson_kernel_angular_integral(double a, int n) {
    const double h = M_PI / n;
    double sum = 0.5 * (1.0 / (1.0 - a) + 1.0 / (1.0 + a));
    for (int j = 1; j < n; ++j) sum += 1.0 / (1.0 - a * std::cos(h * j));
    return sum * h;
}

HomogeneousWave::HomogeneousWave(AnalyticScalarField phi0, AnalyticScalarField phi1,
                                 int n_theta)
    : phi0_(std::move(phi0)), phi1_(std::move(phi1)) {
    simpson_theta(n_theta, sin_theta_, w_theta_);
    for (double& v : sin_theta_) v = std::sin(v);
    omega_ = circle_directions(2 * static_cast<int>(w_theta_.size() - 1));
    w_alpha_ = 2.0 * M_PI / omega_.size();
}

// Disc averages behind the Poisson formula, all over the rim family
// y = x + t sin(theta) omega:
//   M[psi]  = int int sin(theta) psi                    (value)
//   Mg[psi] = int int sin^2(theta) omega . grad psi     (first t-derivative)
//   Mh[psi] = int int sin^3(theta) omega^T Hess psi omega
double HomogeneousWave::value(double t, Vec2 x) const {
    double m1 = 0.0, m0 = 0.0, mg0 = 0.0;
    for (std::size_t j = 0; j < sin_theta_.size(); ++j) {
        const double s = sin_theta_[j];
        double r1 = 0.0, r0 = 0.0, rg = 0.0;
        for (const Vec2& om : omega_) {
            const Vec2 y = x + (t * s) * om;
            r1 += phi1_.value(y);
            r0 += phi0_.value(y);
            rg += dot(om, phi0_.grad(y));
        }
        m1 += w_theta_[j] * s * r1;
        m0 += w_theta_[j] * s * r0;
        mg0 += w_theta_[j] * s * s * rg;
    }
    return (t * m1 + m0 + t * mg0) * w_alpha_ / (2.0 * M_PI);
}

double HomogeneousWave::deriv_t(double t, Vec2 x) const {
    double m1 = 0.0, mg1 = 0.0, mg0 = 0.0, mh0 = 0.0;
    for (std::size_t j = 0; j < sin_theta_.size(); ++j) {
        const double s = sin_theta_[j];
        double r1 = 0.0, rg1 = 0.0, rg0 = 0.0, rh0 = 0.0;
        for (const Vec2& om : omega_) {
            const Vec2 y = x + (t * s) * om;
            r1 += phi1_.value(y);
            rg1 += dot(om, phi1_.grad(y));
            rg0 += dot(om, phi0_.grad(y));
            const Hess2 h = phi0_.hess(y);
            rh0 += h.xx * om.x * om.x + 2.0 * h.xy * om.x * om.y + h.yy * om.y * om.y;
        }
        m1 += w_theta_[j] * s * r1;
        mg1 += w_theta_[j] * s * s * rg1;
        mg0 += w_theta_[j] * s * s * rg0;
        mh0 += w_theta_[j] * s * s * s * rh0;
    }
    return (m1 + t * mg1 + 2.0 * mg0 + t * mh0) * w_alpha_ / (2.0 * M_PI);
}

Vec2 HomogeneousWave::deriv_x(double t, Vec2 x) const {
    Vec2 m1{0.0, 0.0}, m0{0.0, 0.0}, mg0{0.0, 0.0};
    for (std::size_t j = 0; j < sin_theta_.size(); ++j) {
        const double s = sin_theta_[j];
        Vec2 r1{0.0, 0.0}, r0{0.0, 0.0}, rg{0.0, 0.0};
        for (const Vec2& om : omega_) {
            const Vec2 y = x + (t * s) * om;
            r1 += phi1_.grad(y);
            r0 += phi0_.grad(y);
            const Hess2 h = phi0_.hess(y);
            rg += Vec2{h.xx * om.x + h.xy * om.y, h.xy * om.x + h.yy * om.y};
        }
        m1 += (w_theta_[j] * s) * r1;
        m0 += (w_theta_[j] * s) * r0;
        mg0 += (w_theta_[j] * s * s) * rg;
    }
    return (t * m1 + m0 + t * mg0) * (w_alpha_ / (2.0 * M_PI));
}

void ConeHistory::add_level(ConeLevel level) {
    if (!levels_.empty() && level.time <= levels_.back().time)
        throw std::invalid_argument("ConeHistory: time stamps must be strictly increasing");
    levels_.push_back(std::move(level));
}

ConeHistory::Bracket ConeHistory::bracket(double tau) const {
    if (levels_.empty()) throw InsufficientHistoryError("ConeHistory: empty history");
    const double t0 = levels_.front().time;
    const double t1 = levels_.back().time;
    const double tol = 1e-9 * (1.0 + std::abs(t1));
    if (tau < t0 - tol || tau > t1 + tol) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "ConeHistory: tau=%.9g outside the stored span [%.9g, %.9g]", tau, t0,
                      t1);
        throw InsufficientHistoryError(buf);
    }
    Bracket b;
    if (levels_.size() == 1 || tau <= t0) {
        b.lo = b.hi = &levels_.front();
        return b;
    }
    if (tau >= t1) {
        b.lo = b.hi = &levels_.back();
        return b;
    }
    std::size_t hi = 1;
    while (levels_[hi].time < tau) ++hi;
    b.lo = &levels_[hi - 1];
    b.hi = &levels_[hi];
    b.w = (tau - b.lo->time) / (b.hi->time - b.lo->time);
    return b;
}

double ConeHistory::mu0_at(double tau, Vec2 y) const {
    const Bracket b = bracket(tau);
    if (b.lo == b.hi) return b.lo->mu0.interp(y);
    return (1.0 - b.w) * b.lo->mu0.interp(y) + b.w * b.hi->mu0.interp(y);
}

double phi_retarded(const ConeHistory& hist, const HomogeneousWave& hom, double t, Vec2 x,
                    const ConeQuadratureSpec& q) {
    if (t < 0.0) throw std::invalid_argument("phi_retarded: t < 0");
    // fail early if the cone is not covered
    (void)hist.bracket(0.0);
    (void)hist.bracket(t);
    const double cone = cone_quadrature([&](double tau, Vec2 y) { return hist.mu0_at(tau, y); },
                                        t, x, q.n_theta, q.n_tau);
    return hom.value(t, x) - 2.0 * cone;
}

namespace {

// Bilinear corner stencil within one grid.
struct CornerStencil {
    int i = 0, j = 0;
    double w00 = 0, w01 = 0, w10 = 0, w11 = 0;
    bool inside = false;
};

CornerStencil corner_stencil(const GridSpec2D& s, Vec2 y) {
    CornerStencil st;
    const double fx = (y.x - s.origin.x) / s.h;
    const double fy = (y.y - s.origin.y) / s.h;
    if (fx < 0.0 || fy < 0.0 || fx > s.nx - 1 || fy > s.ny - 1) return st;
    int i = static_cast<int>(fx);
    int j = static_cast<int>(fy);
    if (i >= s.nx - 1) i = s.nx - 2;
    if (j >= s.ny - 1) j = s.ny - 2;
    const double ax = fx - i, ay = fy - j;
    st.i = i;
    st.j = j;
    st.w00 = (1.0 - ax) * (1.0 - ay);
    st.w01 = (1.0 - ax) * ay;
    st.w10 = ax * (1.0 - ay);
    st.w11 = ax * ay;
    st.inside = true;
    return st;
}

// f(tau, y, .) gathered onto the momentum grid: bilinear in y, linear in tau.
void gather_f_slab(const ConeHistory::Bracket& b, Vec2 y, std::vector<double>& slab) {
    const Grid4D& flo = *b.lo->f;
    const GridSpec2D& xs = flo.xspec();
    const std::size_t np = flo.pspec().count();
    slab.assign(np, 0.0);
    const CornerStencil st = corner_stencil(xs, y);
    if (!st.inside) return;
    const double wl = (b.lo == b.hi) ? 1.0 : 1.0 - b.w;
    auto accumulate = [&](const Grid4D& f, double wt) {
        if (wt == 0.0) return;
        const double* s00 = f.pslice(st.i, st.j);
        const double* s01 = f.pslice(st.i, st.j + 1);
        const double* s10 = f.pslice(st.i + 1, st.j);
        const double* s11 = f.pslice(st.i + 1, st.j + 1);
        for (std::size_t k = 0; k < np; ++k)
            slab[k] += wt * (st.w00 * s00[k] + st.w01 * s01[k] + st.w10 * s10[k] +
                             st.w11 * s11[k]);
    };
    accumulate(flo, wl);
    if (b.lo != b.hi) accumulate(*b.hi->f, b.w);
}

FieldSample field_at(const ConeHistory::Bracket& b, Vec2 y) {
    auto level_sample = [&](const ConeLevel& l) {
        FieldSample f;
        f.phi = l.field.phi.interp(y);
        f.phi_t = l.grads.phi_t.interp(y);
        f.grad = {l.grads.dx1.interp(y), l.grads.dx2.interp(y)};
        return f;
    };
    const FieldSample lo = level_sample(*b.lo);
    if (b.lo == b.hi) return lo;
    const FieldSample hi = level_sample(*b.hi);
    FieldSample out;
    out.phi = (1.0 - b.w) * lo.phi + b.w * hi.phi;
    out.phi_t = (1.0 - b.w) * lo.phi_t + b.w * hi.phi_t;
    out.grad = (1.0 - b.w) * lo.grad + b.w * hi.grad;
    return out;
}

inline double trap_w(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

} // namespace

DphiRepresentation dphi_representation_all(const ConeHistory& hist, const HomogeneousWave& hom,
                                           double t, Vec2 x, const ConeQuadratureSpec& q) {
    if (t < 0.0) throw std::invalid_argument("dphi_representation: t < 0");
    (void)hist.bracket(0.0);
    (void)hist.bracket(t);
    const ConeLevel& level0 = hist.levels().front();
    if (!level0.f)
        throw InsufficientHistoryError(
            "dphi_representation: history lacks f slices (enable history_keep_f)");
    const GridSpec2D& ps = level0.f->pspec();
    const double pcell = ps.h * ps.h;

    std::vector<double> th, wth;
    simpson_theta(q.n_theta, th, wth);
    std::vector<double> sn(th.size());
    for (std::size_t j = 0; j < th.size(); ++j) sn[j] = std::sin(th[j]);
    const int n_alpha = 2 * static_cast<int>(th.size() - 1);
    const std::vector<Vec2> omega = circle_directions(n_alpha);
    const double w_alpha = 2.0 * M_PI / n_alpha;

    // momentum nodes, shared across quadrature points
    std::vector<Momentum2> pm;
    std::vector<double> pw;
    pm.reserve(ps.count());
    pw.reserve(ps.count());
    for (int ip = 0; ip < ps.nx; ++ip)
        for (int jp = 0; jp < ps.ny; ++jp) {
            pm.push_back(relativize(ps.node(ip, jp)));
            pw.push_back(trap_w(ip, ps.nx) * trap_w(jp, ps.ny) * pcell);
        }

    std::vector<double> slab;

    // initial-slice term: t * sum sin(theta) * sigma_BC(0, y, xi) (xi_i inside
    // for the x rows)
    double data_t = 0.0;
    Vec2 data_x{0.0, 0.0};
    if (t > 0.0) {
        const ConeHistory::Bracket b0{&level0, &level0, 0.0};
        for (std::size_t j = 0; j < th.size(); ++j) {
            const double s = sn[j];
            for (const Vec2& om : omega) {
                const Vec2 xi = s * om;
                const Vec2 y = x + t * xi;
                gather_f_slab(b0, y, slab);
                const ConeCoordinate cone = ConeCoordinate::from_xi_omega(xi, om);
                double sig = 0.0;
                for (std::size_t k = 0; k < pm.size(); ++k) {
                    const double fv = slab[k];
                    if (fv == 0.0) continue;
                    sig += pw[k] * fv / (pm[k].gamma * one_plus_xi_dot_vhat(cone, pm[k]));
                }
                const double w = wth[j] * s * w_alpha * sig;
                data_t += w;
                data_x += w * xi;
            }
        }
        data_t *= t;
        data_x = t * data_x;
    }

    // cone terms
    double A_t = 0.0, A_x1 = 0.0, A_x2 = 0.0;
    double B_t = 0.0, B_x1 = 0.0, B_x2 = 0.0;
    double C_t = 0.0, C_x1 = 0.0, C_x2 = 0.0;
    const double dtau = t / q.n_tau;
    for (int it = 0; it < q.n_tau; ++it) {
        const double tau = (it + 0.5) * dtau;
        const double R = t - tau;
        const ConeHistory::Bracket b = hist.bracket(tau);
        for (std::size_t j = 0; j < th.size(); ++j) {
            const double s = sn[j];
            for (const Vec2& om : omega) {
                const Vec2 xi = s * om;
                const Vec2 y = x + (R * s) * om;
                gather_f_slab(b, y, slab);
                const FieldSample fs = field_at(b, y);
                const ConeCoordinate cone = ConeCoordinate::from_xi_omega(xi, om);
                double sa_t = 0.0, sa_x1 = 0.0, sa_x2 = 0.0, sb_t = 0.0, sc_t = 0.0;
                for (std::size_t k = 0; k < pm.size(); ++k) {
                    const double fv = slab[k];
                    if (fv == 0.0) continue;
                    const FieldKernelSet kk = eval_field_kernels(cone, pm[k]);
                    const double w = pw[k] * fv;
                    sa_t += w * kk.a_t;
                    sa_x1 += w * kk.a_x.x;
                    sa_x2 += w * kk.a_x.y;
                    const double sphi = fs.phi_t + dot(pm[k].vhat, fs.grad);
                    sb_t += w * kk.b_t * sphi;
                    sc_t += w * dot(kk.c_t, fs.grad);
                }
                const double base = wth[j] * s * w_alpha * dtau;
                A_t += base * sa_t; // the 1/(t-tau) weight cancels the cone Jacobian
                A_x1 += base * sa_x1;
                A_x2 += base * sa_x2;
                const double br = base * R;
                B_t += br * sb_t;
                B_x1 += br * xi.x * sb_t; // b_x = xi_i b_t
                B_x2 += br * xi.y * sb_t;
                C_t += br * sc_t;
                C_x1 += br * xi.x * sc_t; // c_x = xi_i c_t
                C_x2 += br * xi.y * sc_t;
            }
        }
    }

    DphiRepresentation r;
    r.dt = hom.deriv_t(t, x) - 2.0 * data_t + 2.0 * A_t - 2.0 * B_t - 2.0 * C_t;
    const Vec2 hx = hom.deriv_x(t, x);
    r.dx1 = hx.x - 2.0 * data_x.x - 2.0 * A_x1 - 2.0 * B_x1 - 2.0 * C_x1;
    r.dx2 = hx.y - 2.0 * data_x.y - 2.0 * A_x2 - 2.0 * B_x2 - 2.0 * C_x2;
    return r;
}

double dphi_representation(const ConeHistory& hist, const HomogeneousWave& hom, double t,
                           Vec2 x, Deriv which, const ConeQuadratureSpec& q) {
    const DphiRepresentation r = dphi_representation_all(hist, hom, t, x, q);
    switch (which) {
    case Deriv::t:
        return r.dt;
    case Deriv::x1:
        return r.dx1;
    default:
        return r.dx2;
    }
}

} // namespace nv2d
