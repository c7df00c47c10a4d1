#include "nv2d/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nv2d/characteristics.hpp"
#include "nv2d/field_sampler.hpp"
#include "nv2d/grid.hpp"
#include "nv2d/initial_data.hpp"
#include "nv2d/phase_geometry.hpp"
#include "nv2d/retarded.hpp"
#include "nv2d/vlasov.hpp"

namespace nv2d {

namespace {

// Calibrated envelope constant for the |a|-kernel bound
//   |a_t| + |a_x1| + |a_x2| <= C (1+|p|) (1-|vhat|^2) (1+xi.vhat)^{-3/2};
// measured sup of the ratio is ~2.9 over 4e5 stratified samples and stable
// under doubling, so 4.0 leaves calibration margin.
constexpr double kEnvelopeBound = 4.0;

PropertyResult make_result(std::string name, double measured, double tol, bool pass,
                           std::string note = {}) {
    return PropertyResult{std::move(name), measured, tol, pass, std::move(note)};
}

PropertyResult bounded(std::string name, double measured, double tol, std::string note = {}) {
    return make_result(std::move(name), measured, tol, measured <= tol, std::move(note));
}

PropertyResult in_window(std::string name, double measured, double lo, double hi,
                         std::string note = {}) {
    PropertyResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.tolerance = hi;
    r.pass = measured >= lo && measured <= hi;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "window [%g, %g]", lo, hi);
    r.note = note.empty() ? buf : note + "; " + buf;
    return r;
}

// ---------------------------------------------------------------------------
// kernel suite
// ---------------------------------------------------------------------------

PropertyResult kernel_exact_identities(std::uint64_t seed, int n) {
    StratifiedSampler smp(seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 xi = smp.sample_xi();
        const Momentum2 m = relativize(smp.sample_p());
        const ConeCoordinate c = ConeCoordinate::from_xi_omega(xi, smp.direction());
        const VMKernelSet vm = eval_vm_kernels(c, m);
        const FieldKernelSet k = eval_field_kernels(c, m);
        worst = std::max(worst, std::abs(k.a_t - dot(m.p, vm.et)));
        worst = std::max(worst, std::abs(k.a_x.x - m.gamma * (vm.et.x - m.vhat.y * vm.bt)));
        worst = std::max(worst, std::abs(k.a_x.y - m.gamma * (vm.et.y + m.vhat.x * vm.bt)));
        worst = std::max(worst, std::abs(k.b_x.x - xi.x * k.b_t));
        worst = std::max(worst, std::abs(k.b_x.y - xi.y * k.b_t));
        worst = std::max(worst, std::abs(k.c_x[0].x - xi.x * k.c_t.x));
        worst = std::max(worst, std::abs(k.c_x[0].y - xi.x * k.c_t.y));
        worst = std::max(worst, std::abs(k.c_x[1].x - xi.y * k.c_t.x));
        worst = std::max(worst, std::abs(k.c_x[1].y - xi.y * k.c_t.y));
    }
    return bounded("field-kernel cross identities (a_t = p.et, a_x, b_x, c_x)", worst, 1e-12,
                   std::to_string(n) + " stratified samples");
}

// The closed forms of the derivative kernels against the identity route, on
// strata where both evaluations are well conditioned.
PropertyResult kernel_direct_forms(std::uint64_t seed, int n) {
    StratifiedSampler smp(seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec2 xi = smp.sample_xi();
        const double r = norm(xi);
        if (r > 1.0 - 1e-4) xi = xi * ((1.0 - 1e-4) / r);
        const Momentum2 m = relativize(smp.sample_p(1e2));
        const ConeCoordinate c = ConeCoordinate::from_xi_omega(xi, smp.direction());
        const FieldKernelSet k = eval_field_kernels(c, m);
        const double d = one_plus_xi_dot_vhat(c, m);
        const Vec2 u = xi + m.vhat;
        const double w = wedge(xi, m.vhat);
        const double g = m.gamma;
        const double a_t = dot(m.vhat, u) / (g * d * d);
        const double a_x1 = (u.x - m.vhat.y * w) / (g * d * d);
        const double a_x2 = (u.y + m.vhat.x * w) / (g * d * d);
        const Vec2 c_t = u / (g * g * g * d * d);
        auto rel = [](double a, double b) {
            return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
        };
        worst = std::max({worst, rel(a_t, k.a_t), rel(a_x1, k.a_x.x), rel(a_x2, k.a_x.y),
                          rel(c_t.x, k.c_t.x), rel(c_t.y, k.c_t.y)});
    }
    return bounded("derivative kernels match their closed forms", worst, 1e-10,
                   std::to_string(n) + " samples, |p|<=1e2, |xi|<=1-1e-4");
}

PropertyResult vm_scaling_identity(std::uint64_t seed, int n) {
    StratifiedSampler smp(seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 xi = smp.sample_xi();
        const Momentum2 m = relativize(smp.sample_p());
        const ConeCoordinate c = ConeCoordinate::from_xi_omega(xi, smp.direction());
        const VMKernelSet vm = eval_vm_kernels(c, m);
        const double d = one_plus_xi_dot_vhat(c, m);
        const double lhs = vm.bt * (m.gamma * m.gamma) * d;
        worst = std::max(worst, std::abs(lhs - vm.bs) / std::max(1.0, std::abs(vm.bs)));
    }
    return bounded("bt (1+|p|^2)(1+xi.vhat) = bs", worst, 1e-12);
}

struct LemmaOutcome {
    long violations_41 = 0;
    long violations_42 = 0;
    double margin_41 = 1e300;
    double margin_42 = 1e300;
    double identity_residual = 0.0;
};

LemmaOutcome lemma_inequalities(std::uint64_t seed, long n) {
    StratifiedSampler smp(seed);
    LemmaOutcome out;
    for (long i = 0; i < n; ++i) {
        const Vec2 dir = smp.direction();
        const Vec2 xi = norm(smp.sample_xi()) * dir; // stratified magnitude, shared direction
        const Momentum2 m = relativize(smp.sample_p());
        const ConeCoordinate c = ConeCoordinate::from_xi_omega(xi, dir);
        const double d = one_plus_xi_dot_vhat(c, m);
        // (1+|p|^2)^{-1} <= 2(1+xi.vhat)
        const double lhs41 = 1.0 / (m.gamma * m.gamma);
        if (lhs41 > 2.0 * d) ++out.violations_41;
        out.margin_41 = std::min(out.margin_41, 2.0 * d - lhs41);
        // (vhat ^ omega)^2 <= 2(1+xi.vhat)
        const double pw = wedge(m.vhat, dir);
        if (pw * pw > 2.0 * d) ++out.violations_42;
        out.margin_42 = std::min(out.margin_42, 2.0 * d - pw * pw);
        // sqrt(1+|p|^2)(1+xi.vhat) = sqrt(1+|p|^2) + xi.p
        const double res = std::abs(m.gamma * d - (m.gamma + dot(xi, m.p)));
        out.identity_residual =
            std::max(out.identity_residual, res / (1.0 + norm(m.p)));
    }
    return out;
}

PropertyResult basis_identities(std::uint64_t seed, int n) {
    StratifiedSampler smp(seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 om = smp.direction();
        const Vec2 omp = perp(om);
        const Vec2 z = 10.0 * (smp.uniform() - 0.5) * smp.direction();
        worst = std::max(worst, std::abs(dot(z, omp) - wedge(om, z)));
        worst = std::max(worst, std::abs(wedge(z, omp) - dot(om, z)));
        const Vec2 recon = dot(om, z) * om + wedge(om, z) * omp;
        worst = std::max(worst, norm(recon - z));
    }
    return bounded("orthogonal-basis identities (z.perp = om^z, z = (om.z)om + (om^z)perp)",
                   worst, 1e-12);
}

PropertyResult f_reconstruction(std::uint64_t seed, int n) {
    StratifiedSampler smp(seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec2 xi = smp.sample_xi();
        if (norm(xi) < 1e-12) xi = {0.5, 0.0};
        const Momentum2 m = relativize(smp.sample_p());
        const ConeCoordinate c = ConeCoordinate::from_xi(xi);
        const int idx = smp.uniform() < 0.5 ? 0 : 1;
        const FDecomposition A = decompose_F(idx, c, m);
        const double g = 4.0 * (smp.uniform() - 0.5);
        const Vec2 h = 4.0 * (smp.uniform() - 0.5) * smp.direction();
        const double direct = eval_F_form(idx, c, m, g, h);
        const double recon = A.A1 * dot(c.omega_perp, h) + A.A2 * (g + dot(c.omega, h)) +
                             A.A3 * (-g + dot(c.omega, h));
        worst = std::max(worst, std::abs(direct - recon));
    }
    return bounded("bilinear-form basis reconstruction", worst, 1e-12);
}

PropertyResult f_vs_bc_kernels(std::uint64_t seed, int n) {
    StratifiedSampler smp(seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec2 xi = smp.sample_xi();
        if (norm(xi) < 1e-12) xi = {0.5, 0.0};
        const Momentum2 m = relativize(smp.sample_p());
        const ConeCoordinate c = ConeCoordinate::from_xi(xi);
        const FieldKernelSet k = eval_field_kernels(c, m);
        const double d = one_plus_xi_dot_vhat(c, m);
        const double g = 4.0 * (smp.uniform() - 0.5); // plays d_t phi
        const Vec2 h = 4.0 * (smp.uniform() - 0.5) * smp.direction(); // plays grad phi
        const double sphi = g + dot(m.vhat, h);
        for (int idx = 0; idx < 2; ++idx) {
            const double lhs = (idx == 0 ? k.b_x.x : k.b_x.y) * sphi + dot(k.c_x[idx], h);
            const double rhs = eval_F_form(idx, c, m, g, h) / (m.gamma * d * d);
            worst = std::max(worst,
                             std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
        }
    }
    return bounded("b,c kernels equal the bilinear form / (gamma (1+xi.vhat)^2)", worst, 1e-12);
}

double envelope_sup(std::uint64_t seed, long n) {
    StratifiedSampler smp(seed);
    double sup = 0.0;
    for (long i = 0; i < n; ++i) {
        const Vec2 xi = smp.sample_xi();
        const Momentum2 m = relativize(smp.sample_p());
        const ConeCoordinate c = ConeCoordinate::from_xi_omega(xi, smp.direction());
        const FieldKernelSet k = eval_field_kernels(c, m);
        const double d = one_plus_xi_dot_vhat(c, m);
        const double ratio = (std::abs(k.a_t) + std::abs(k.a_x.x) + std::abs(k.a_x.y)) *
                             std::pow(d, 1.5) * (m.gamma * m.gamma) / (1.0 + norm(m.p));
        sup = std::max(sup, ratio);
    }
    return sup;
}

PropertyResult spot_values() {
    // xi = (1/2, 0), p = 0: et1 = es1 = 1/2, bt = bs = 0; a_t = 0, b_t = 1, c_t = xi
    const ConeCoordinate c = ConeCoordinate::from_xi({0.5, 0.0});
    const Momentum2 m = relativize({0.0, 0.0});
    const VMKernelSet vm = eval_vm_kernels(c, m);
    const FieldKernelSet k = eval_field_kernels(c, m);
    double worst = std::abs(vm.et.x - 0.5);
    worst = std::max(worst, std::abs(vm.es.x - 0.5));
    worst = std::max(worst, std::abs(vm.bt));
    worst = std::max(worst, std::abs(vm.bs));
    worst = std::max(worst, std::abs(k.a_t));
    worst = std::max(worst, std::abs(k.b_t - 1.0));
    worst = std::max(worst, norm(k.c_t - Vec2{0.5, 0.0}));
    return bounded("kernel spot values at p = 0", worst, 1e-15);
}

// ---------------------------------------------------------------------------
// quadrature suite
// ---------------------------------------------------------------------------

PropertyResult angular_integral_check() {
    double worst = 0.0;
    for (double a : {0.0, 0.5, 0.9, 0.99}) {
        const double got = poisson_kernel_angular_integral(a, 4096);
        const double exact = M_PI / std::sqrt(1.0 - a * a);
        worst = std::max(worst, std::abs(got - exact) / exact);
    }
    return bounded("angular integral = pi / sqrt(1-a^2), a in {0, .5, .9, .99}", worst, 1e-8);
}

PropertyResult cone_constant_case() {
    const double got = cone_quadrature([](double, Vec2) { return 1.0; }, 1.0, {0.2, -0.1},
                                       256, 256);
    const double exact = M_PI;
    return bounded("cone integral of 1 = pi t^2", std::abs(got - exact) / exact, 1e-6,
                   "256x256 panels, t = 1");
}

PropertyResult cone_smooth_order() {
    auto g = [](double tau, Vec2 y) {
        return std::cos(1.1 * tau) * (1.0 + 0.5 * std::sin(0.9 * y.x + 0.3)) *
               (1.0 + 0.25 * std::cos(0.7 * y.y));
    };
    const Vec2 x{0.15, -0.25};
    const double ref = cone_quadrature(g, 1.0, x, 64, 2048);
    double prev = 0.0;
    double order_min = 1e9;
    int n = 16;
    for (int k = 0; k < 3; ++k, n *= 2) {
        const double err = std::abs(cone_quadrature(g, 1.0, x, 64, n) - ref);
        if (k > 0) order_min = std::min(order_min, measured_order(prev, err));
        prev = err;
    }
    PropertyResult r;
    r.name = "cone quadrature order in n_tau (smooth integrand)";
    r.measured = order_min;
    r.tolerance = 1.7;
    r.pass = order_min >= 1.7;
    r.note = "floor 1.7 (second-order panels)";
    return r;
}

PropertyResult phi_hom_cases() {
    AnalyticScalarField zero;
    AnalyticScalarField one;
    one.value = [](Vec2) { return 1.0; };

    double worst = 0.0;
    {
        HomogeneousWave hom(zero, one, 64); // phi1 = 1 -> phi = t
        worst = std::max(worst, std::abs(hom.value(1.0, {0.3, 0.1}) - 1.0));
    }
    {
        AnalyticScalarField c7;
        c7.value = [](Vec2) { return 0.7; };
        HomogeneousWave hom(c7, zero, 64); // phi0 = c -> phi = c
        worst = std::max(worst, std::abs(hom.value(0.8, {0.0, 0.0}) - 0.7) / 0.7);
    }
    {
        AnalyticScalarField s;
        s.value = [](Vec2 x) { return std::sin(x.x); };
        s.grad = [](Vec2 x) { return Vec2{std::cos(x.x), 0.0}; };
        s.hess = [](Vec2 x) { return Hess2{-std::sin(x.x), 0.0, 0.0}; };
        HomogeneousWave hom(s, zero, 64); // -> sin(x1) cos(t)
        for (const Vec2 x : {Vec2{0.4, -0.3}, Vec2{-1.1, 0.6}}) {
            const double exact = std::sin(x.x) * std::cos(1.0);
            worst = std::max(worst, std::abs(hom.value(1.0, x) - exact));
        }
    }
    return bounded("homogeneous-wave oracles (c t, c, sin x1 cos t)", worst, 1e-6);
}

// ---------------------------------------------------------------------------
// dynamics suite
// ---------------------------------------------------------------------------

// Analytic field with nontrivial gradients for the order studies.
FieldSample wavefield(double s, Vec2 x) {
    const double th = 0.7 * s + 0.9 * x.x - 0.4 * x.y;
    FieldSample f;
    f.phi = 0.2 * std::sin(th);
    f.phi_t = 0.2 * 0.7 * std::cos(th);
    f.grad = {0.2 * 0.9 * std::cos(th), -0.2 * 0.4 * std::cos(th)};
    return f;
}

PropertyResult operator_decomposition_order(std::uint64_t seed) {
    auto g = [](double tau, Vec2 y) { return std::sin(tau + 2.0 * y.x - y.y); };
    auto dg = [](double tau, Vec2 y, Deriv which) {
        const double c = std::cos(tau + 2.0 * y.x - y.y);
        switch (which) {
        case Deriv::t:
            return c;
        case Deriv::x1:
            return 2.0 * c;
        default:
            return -c;
        }
    };
    // one fixed sample set, refined in h on the same configurations
    struct Config {
        Vec2 xi;
        Momentum2 m;
        Vec2 om;
        double tau;
        Vec2 y;
    };
    std::vector<Config> configs;
    {
        StratifiedSampler smp(seed);
        for (int i = 0; i < 40; ++i)
            configs.push_back({0.9 * smp.uniform() * smp.direction(),
                               relativize(smp.sample_p(5.0)), smp.direction(), smp.uniform(),
                               Vec2{smp.uniform(), smp.uniform()}});
    }
    double order_worst_lo = 1e9, order_worst_hi = 0.0;
    for (Deriv which : {Deriv::t, Deriv::x1, Deriv::x2}) {
        double prev_err = 0.0;
        double h = 0.2;
        for (int lvl = 0; lvl < 4; ++lvl, h *= 0.5) {
            double err = 0.0;
            for (const Config& cf : configs) {
                const Vec2 xi = cf.xi;
                const Momentum2& m = cf.m;
                const ConeCoordinate c = ConeCoordinate::from_xi_omega(xi, cf.om);
                const DerivativeDecomposition dec = operator_coefficients(which, c, m);
                const double tau = cf.tau;
                const Vec2 y = cf.y;
                const double root = std::sqrt(1.0 - norm2(xi));
                // centered differences along the operator directions
                const double S = (g(tau + h, y + h * m.vhat) - g(tau - h, y - h * m.vhat)) /
                                 (2.0 * h);
                const double T1 = (g(tau - h * xi.x, y + h * Vec2{1.0, 0.0}) -
                                   g(tau + h * xi.x, y - h * Vec2{1.0, 0.0})) /
                                  (2.0 * h * root);
                const double T2 = (g(tau - h * xi.y, y + h * Vec2{0.0, 1.0}) -
                                   g(tau + h * xi.y, y - h * Vec2{0.0, 1.0})) /
                                  (2.0 * h * root);
                const double recon =
                    dec.coef_S * S + root * (dec.coef_T.x * T1 + dec.coef_T.y * T2);
                err = std::max(err, std::abs(recon - dg(tau, y, which)));
            }
            if (lvl > 0) {
                const double order = measured_order(prev_err, err);
                order_worst_lo = std::min(order_worst_lo, order);
                order_worst_hi = std::max(order_worst_hi, order);
            }
            prev_err = err;
        }
    }
    return in_window("operator decomposition reconstruction order (t, x1, x2)", order_worst_lo,
                     1.7, 2.3, "worst order over rows " + std::to_string(order_worst_hi));
}

PropertyResult div_p_force_order(std::uint64_t seed) {
    const FieldSample fs = wavefield(0.4, {0.3, -0.2});
    std::vector<Vec2> ps;
    {
        StratifiedSampler smp(seed);
        for (int i = 0; i < 50; ++i) ps.push_back(smp.sample_p(5.0));
    }
    double prev = 0.0;
    double order_lo = 1e9;
    double h = 0.2;
    for (int lvl = 0; lvl < 4; ++lvl, h *= 0.5) {
        double err = 0.0;
        for (const Vec2& p : ps) {
            auto F = [&](Vec2 q) { return vlasov_force(fs, relativize(q)); };
            const double div = (F(p + Vec2{h, 0.0}).x - F(p - Vec2{h, 0.0}).x +
                                F(p + Vec2{0.0, h}).y - F(p - Vec2{0.0, h}).y) /
                               (2.0 * h);
            const double exact = 2.0 * s_phi(fs, relativize(p));
            err = std::max(err, std::abs(div - exact));
        }
        if (lvl > 0) order_lo = std::min(order_lo, measured_order(prev, err));
        prev = err;
    }
    return in_window("momentum divergence of the force = 2 S(phi), FD order", order_lo, 1.7,
                     2.3);
}

PropertyResult characteristics_free_and_ramp() {
    double worst = 0.0;
    {
        ZeroField field;
        const CharState init{0.0, {0.4, -0.3}, {1.2, 0.7}};
        const Trajectory traj = integrate(0.0, 2.0, init, field, 0.01);
        const Momentum2 m = relativize(init.P);
        const Vec2 exact = init.X + 2.0 * m.vhat;
        worst = std::max(worst, norm(traj.back().X - exact));
        worst = std::max(worst, norm(traj.back().P - init.P));
    }
    {
        const double alpha = 0.8;
        UniformRampField field(alpha);
        const CharState init{0.0, {0.0, 0.0}, {0.9, -0.4}};
        const Trajectory traj = integrate(0.0, 1.0, init, field, 1e-3);
        const double exact = norm(init.P) * std::exp(-alpha);
        worst = std::max(worst, std::abs(norm(traj.back().P) - exact) / exact);
    }
    return bounded("characteristics: free transport exact, |P| = |p0| e^{-alpha t} in ramp",
                   worst, 1e-9);
}

PropertyResult characteristics_roundtrip_order() {
    AnalyticField field(wavefield);
    const CharState init{0.0, {0.2, 0.1}, {0.8, -0.5}};
    double prev = 0.0;
    double order_lo = 1e9;
    double dt = 0.1;
    for (int lvl = 0; lvl < 4; ++lvl, dt *= 0.5) {
        const Trajectory fwd = integrate(0.0, 1.0, init, field, dt);
        const Trajectory bwd = integrate(1.0, 0.0, fwd.back(), field, dt);
        const double err = norm(bwd.back().X - init.X) + norm(bwd.back().P - init.P);
        if (lvl > 0) order_lo = std::min(order_lo, measured_order(prev, err));
        prev = err;
    }
    PropertyResult r;
    r.name = "characteristics: forward-backward round trip order";
    r.measured = order_lo;
    r.tolerance = 3.5;
    r.pass = order_lo >= 3.5;
    return r;
}

PropertyResult subluminality(std::uint64_t seed) {
    StratifiedSampler smp(seed);
    AnalyticField field(wavefield);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const CharState init{0.0, 2.0 * (smp.uniform() - 0.5) * smp.direction(),
                             smp.sample_p(20.0)};
        const Trajectory traj = integrate(0.0, 1.0, init, field, 0.02);
        for (std::size_t k = 1; k < traj.size(); ++k) {
            const double ds = traj[k].s - traj[k - 1].s;
            worst = std::max(worst, norm(traj[k].X - traj[k - 1].X) - ds);
        }
    }
    return bounded("sub-luminal steps: |dX| <= ds", worst, 1e-12);
}

// Augmented system (X, P, W) with dW/ds = 3 S(phi) W; the closed-form
// transport law says exp(-3 phi) W stays at its initial value.
PropertyResult transport_law_order() {
    AnalyticField field(wavefield);
    struct Aug {
        CharState st;
        double w;
    };
    auto rhs = [&](const Aug& a) {
        const CharRhs r = char_rhs(a.st, field);
        const FieldSample fs = field.sample(a.st.s, a.st.X);
        const Momentum2 m = relativize(a.st.P);
        return Aug{CharState{1.0, r.dX, r.dP}, 3.0 * s_phi(fs, m) * a.w};
    };
    auto step = [&](Aug a, double h) {
        auto add = [](const Aug& x, const Aug& d, double c) {
            return Aug{CharState{x.st.s + c * d.st.s, x.st.X + c * d.st.X, x.st.P + c * d.st.P},
                       x.w + c * d.w};
        };
        const Aug k1 = rhs(a);
        const Aug k2 = rhs(add(a, k1, 0.5 * h));
        const Aug k3 = rhs(add(a, k2, 0.5 * h));
        const Aug k4 = rhs(add(a, k3, h));
        Aug out = a;
        out.st.s += h;
        out.st.X += (h / 6.0) * (k1.st.X + 2.0 * k2.st.X + 2.0 * k3.st.X + k4.st.X);
        out.st.P += (h / 6.0) * (k1.st.P + 2.0 * k2.st.P + 2.0 * k3.st.P + k4.st.P);
        out.w += (h / 6.0) * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
        return out;
    };

    double prev = 0.0;
    double order_lo = 1e9;
    double dt = 0.1;
    for (int lvl = 0; lvl < 4; ++lvl, dt *= 0.5) {
        Aug a{CharState{0.0, {0.1, -0.2}, {0.7, 0.4}}, 1.0};
        const double c0 = std::exp(-3.0 * field.sample(0.0, a.st.X).phi) * a.w;
        double dev = 0.0;
        const int nsteps = static_cast<int>(std::lround(1.0 / dt));
        for (int k = 0; k < nsteps; ++k) {
            a = step(a, dt);
            const double c = std::exp(-3.0 * field.sample(a.st.s, a.st.X).phi) * a.w;
            dev = std::max(dev, std::abs(c - c0) / std::abs(c0));
        }
        if (lvl > 0) order_lo = std::min(order_lo, measured_order(prev, dev));
        prev = dev;
    }
    PropertyResult r;
    r.name = "transport law: exp(-3 phi) f constant along characteristics, order";
    r.measured = order_lo;
    r.tolerance = 3.5;
    r.pass = order_lo >= 3.5;
    return r;
}

PropertyResult conformal_residual_order() {
    AnalyticField field(wavefield);
    const CharState init{0.0, {0.3, 0.2}, {0.6, -0.8}};
    double prev = 0.0;
    double order_lo = 1e9;
    double dt = 0.05;
    for (int lvl = 0; lvl < 3; ++lvl, dt *= 0.5) {
        const Trajectory traj = integrate(0.0, 1.0, init, field, dt);
        const double res = conformal_momentum_residual(traj, field);
        if (lvl > 0) order_lo = std::min(order_lo, measured_order(prev, res));
        prev = res;
    }
    PropertyResult r;
    r.name = "conformal momentum residual order (centered differences)";
    r.measured = order_lo;
    r.tolerance = 1.7;
    r.pass = order_lo >= 1.7;
    return r;
}

PropertyResult free_transport_quick() {
    // small semi-Lagrangian run against the exact free solution
    const InitialData data = make_preset("gaussian-bump", 1.0, 1.0, 1.0, 0.0);
    ZeroField field;
    double prev = 0.0;
    double order_lo = 1e9;
    for (int lvl = 0; lvl < 3; ++lvl) {
        const int nx = 24 + 12 * lvl + (lvl == 2 ? 12 : 0); // 24, 36, 48
        const GridSpec2D xs = GridSpec2D::centered_box(2.0, nx);
        const GridSpec2D ps = GridSpec2D::centered_box(1.5, nx);
        DistributionGrid f = sample_initial(data, xs, ps);
        const double t_end = 0.2;
        const double dt = 0.8 * xs.h;
        while (f.time < t_end - 1e-12) {
            const double step = std::min(dt, t_end - f.time);
            f = sl_step(f, field, step);
        }
        double err = 0.0;
        for (int i = 0; i < xs.nx; ++i)
            for (int j = 0; j < xs.ny; ++j)
                for (int k = 0; k < ps.nx; ++k)
                    for (int l = 0; l < ps.ny; ++l) {
                        const Vec2 p = ps.node(k, l);
                        const Momentum2 m = relativize(p);
                        const Vec2 x = xs.node(i, j);
                        const double exact = data.f_in(x - t_end * m.vhat, p);
                        err = std::max(err, std::abs(f.f.at(i, j, k, l) - exact));
                    }
        if (lvl > 0) {
            const double ratio = prev / std::max(err, 1e-300);
            order_lo = std::min(order_lo, std::log(ratio) / std::log(1.5));
        }
        prev = err;
    }
    PropertyResult r;
    r.name = "free transport L-inf convergence order (quick)";
    r.measured = order_lo;
    r.tolerance = 2.5;
    r.pass = order_lo >= 2.5;
    return r;
}

} // namespace

PropertyResult check_kernel_identities(std::uint64_t seed, long n) {
    return kernel_exact_identities(seed, static_cast<int>(n));
}

PropertyResult check_lemma_inequalities(std::uint64_t seed, long n) {
    const LemmaOutcome lem = lemma_inequalities(seed, n);
    char note[128];
    std::snprintf(note, sizeof(note), "margins %.3g / %.3g, proof-identity residual %.3g",
                  lem.margin_41, lem.margin_42, lem.identity_residual);
    const long viol = lem.violations_41 + lem.violations_42;
    return make_result("momentum-cone inequalities: violations over " + std::to_string(n) +
                           " samples",
                       static_cast<double>(viol), 0.0,
                       viol == 0 && lem.identity_residual <= 1e-12, note);
}

PropertyResult check_angular_integral() { return angular_integral_check(); }
PropertyResult check_operator_order(std::uint64_t seed) {
    return operator_decomposition_order(seed);
}
PropertyResult check_divp_force_order(std::uint64_t seed) { return div_p_force_order(seed); }
PropertyResult check_transport_order() { return transport_law_order(); }

PropertyResult check_phi_hom_unit_ramp() {
    AnalyticScalarField zero, one;
    one.value = [](Vec2) { return 1.0; };
    HomogeneousWave hom(zero, one, 64);
    const double err = std::abs(hom.value(1.0, {0.3, 0.1}) - 1.0);
    return bounded("phi_hom with phi1 = 1 reproduces phi = t", err, 1e-6, "t = 1, relative");
}

PropertyResult check_cone_constant() { return cone_constant_case(); }

std::vector<PropertyResult> verify_kernel_suite(std::uint64_t seed) {
    std::vector<PropertyResult> out;
    out.push_back(spot_values());
    out.push_back(kernel_exact_identities(seed, 100000));
    out.push_back(kernel_direct_forms(seed + 1, 50000));
    out.push_back(vm_scaling_identity(seed + 2, 50000));

    const LemmaOutcome lem = lemma_inequalities(seed + 3, 1000000);
    out.push_back(make_result("inequality (1+|p|^2)^{-1} <= 2(1+xi.vhat): violations",
                              static_cast<double>(lem.violations_41), 0.0,
                              lem.violations_41 == 0,
                              "min margin " + std::to_string(lem.margin_41)));
    out.push_back(make_result("inequality (vhat^omega)^2 <= 2(1+xi.vhat): violations",
                              static_cast<double>(lem.violations_42), 0.0,
                              lem.violations_42 == 0,
                              "min margin " + std::to_string(lem.margin_42)));
    out.push_back(bounded("identity gamma(1+xi.vhat) = gamma + xi.p (scaled residual)",
                          lem.identity_residual, 1e-12));

    out.push_back(basis_identities(seed + 4, 100000));
    out.push_back(f_reconstruction(seed + 5, 100000));
    out.push_back(f_vs_bc_kernels(seed + 6, 100000));

    const double supN = envelope_sup(seed + 7, 200000);
    const double sup2N = envelope_sup(seed + 8, 400000);
    char note[96];
    std::snprintf(note, sizeof(note), "sup %g -> %g under doubling", supN, sup2N);
    out.push_back(make_result("kernel envelope ratio bounded (calibrated)", sup2N,
                              kEnvelopeBound, sup2N <= kEnvelopeBound && supN <= kEnvelopeBound,
                              note));
    return out;
}

std::vector<PropertyResult> verify_quadrature_suite() {
    std::vector<PropertyResult> out;
    out.push_back(angular_integral_check());
    out.push_back(cone_constant_case());
    out.push_back(cone_smooth_order());
    out.push_back(phi_hom_cases());
    return out;
}

std::vector<PropertyResult> verify_dynamics_suite(std::uint64_t seed) {
    std::vector<PropertyResult> out;
    out.push_back(operator_decomposition_order(seed));
    out.push_back(div_p_force_order(seed + 11));
    out.push_back(characteristics_free_and_ramp());
    out.push_back(characteristics_roundtrip_order());
    out.push_back(subluminality(seed + 12));
    out.push_back(transport_law_order());
    out.push_back(conformal_residual_order());
    return out;
}

std::vector<PropertyResult> run_verify_suite(std::uint64_t seed, bool heavy) {
    std::vector<PropertyResult> out = verify_kernel_suite(seed);
    for (auto& r : verify_quadrature_suite()) out.push_back(std::move(r));
    for (auto& r : verify_dynamics_suite(seed + 1000)) out.push_back(std::move(r));
    if (heavy) out.push_back(free_transport_quick());
    return out;
}

void print_property_results(std::FILE* out, const std::vector<PropertyResult>& results) {
    for (const PropertyResult& r : results) {
        std::fprintf(out, "%s  %-68s measured=%-12.4g tol=%-10.4g%s\n",
                     r.pass ? "[PASS]" : "[FAIL]", r.name.c_str(), r.measured, r.tolerance,
                     r.note.empty() ? "" : ("  (" + r.note + ")").c_str());
    }
    int passed = 0;
    for (const PropertyResult& r : results) passed += r.pass ? 1 : 0;
    std::fprintf(out, "%d/%zu properties passed\n", passed, results.size());
}

bool all_pass(const std::vector<PropertyResult>& results) {
    for (const PropertyResult& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace nv2d
