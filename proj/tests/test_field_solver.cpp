#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nv2d/errors.hpp"
#include "nv2d/field_solver.hpp"
#include "nv2d/initial_data.hpp"
#include "nv2d/phase_geometry.hpp"
#include "nv2d/verify.hpp"

using namespace nv2d;

namespace {

constexpr double kFourPi = 4.0 * M_PI;

Grid4D bump_distribution(const GridSpec2D& xs, const GridSpec2D& ps, double p_rad,
                         Vec2 p_center = {0.0, 0.0}) {
    Grid4D f(xs, ps);
    for (int i = 0; i < xs.nx; ++i)
        for (int j = 0; j < xs.ny; ++j) {
            const Vec2 x = xs.node(i, j);
            const double gx = bump5(norm2(x) / 1.0);
            if (gx == 0.0) continue;
            for (int k = 2; k < ps.nx - 2; ++k)
                for (int l = 2; l < ps.ny - 2; ++l) {
                    const Vec2 p = ps.node(k, l);
                    f.at(i, j, k, l) = gx * bump5(norm2(p - p_center) / (p_rad * p_rad));
                }
        }
    return f;
}

// evolve the state to time T with steps of at most dt_max, landing exactly
FieldState evolve(FieldState st, const Grid2D& source, double T, double dt_max) {
    while (st.time < T - 1e-12) {
        const double dt = std::min(dt_max, T - st.time);
        st = leapfrog_step(st, source, dt);
    }
    return st;
}

} // namespace

TEST_CASE("moments: vacuum, symmetry, narrow bump, overflow") {
    const GridSpec2D xs = GridSpec2D::centered_box(2.0, 17);
    const GridSpec2D ps = GridSpec2D::centered_box(1.5, 33);
    {
        const Grid4D f(xs, ps);
        const MomentFields m = moments(f);
        for (int i = 0; i < xs.nx; ++i)
            for (int j = 0; j < xs.ny; ++j) {
                CHECK(m.mu0.at(i, j) == 0.0);
                CHECK(m.mu_e.at(i, j) == 0.0);
            }
    }
    {
        // even in p: mu_p = 0 to round-off; mu_e >= mu0 pointwise
        const Grid4D f = bump_distribution(xs, ps, 0.9);
        const MomentFields m = moments(f);
        for (int i = 0; i < xs.nx; ++i)
            for (int j = 0; j < xs.ny; ++j) {
                CHECK(std::abs(m.mu_p.c1.at(i, j)) <= 1e-15);
                CHECK(std::abs(m.mu_p.c2.at(i, j)) <= 1e-15);
                CHECK(m.mu_e.at(i, j) >= m.mu0.at(i, j));
            }
    }
    {
        // narrow bump at p = 0: mu0 ~ mu_e ~ integral of f, mu_p ~ 0
        const GridSpec2D fine = GridSpec2D::centered_box(0.5, 65);
        Grid4D f(GridSpec2D::centered_box(1.0, 3), fine);
        const double rho = 0.3;
        double exact = 0.0;
        for (int k = 2; k < fine.nx - 2; ++k)
            for (int l = 2; l < fine.ny - 2; ++l)
                f.at(1, 1, k, l) = bump5(norm2(fine.node(k, l)) / (rho * rho));
        exact = M_PI * rho * rho / 6.0; // integral of the bump profile
        const MomentFields m = moments(f);
        CHECK(m.mu0.at(1, 1) == doctest::Approx(exact).epsilon(0.02));
        CHECK(m.mu_e.at(1, 1) == doctest::Approx(exact).epsilon(0.05));
        CHECK(m.mu_e.at(1, 1) / m.mu0.at(1, 1) - 1.0 <= rho * rho);
    }
    {
        Grid4D f(xs, ps);
        f.at(3, 3, 0, 5) = 1.0; // on the momentum boundary
        CHECK_THROWS_AS(moments(f), SupportOverflowError);
    }
}

TEST_CASE("leapfrog: zero data, CFL guard, uniform source") {
    const GridSpec2D xs = GridSpec2D::centered_box(1.0, 33);
    FieldState st{Grid2D(xs), Grid2D(xs), 0.0};
    const Grid2D zero_src(xs);
    {
        const FieldState next = evolve(st, zero_src, 0.3, 0.45 * xs.h);
        for (std::size_t k = 0; k < next.phi.size(); ++k) CHECK(next.phi.data()[k] == 0.0);
    }
    CHECK_THROWS_AS(leapfrog_step(st, zero_src, xs.h), ConfigError);
    {
        // constant source g: phi = g t^2 / 2 in the interior
        Grid2D src(xs, 0.7);
        const FieldState next = evolve(st, src, 0.2, 0.45 * xs.h);
        const int c = xs.nx / 2;
        CHECK(next.phi.at(c, c) == doctest::Approx(0.7 * 0.2 * 0.2 / 2.0).epsilon(1e-10));
        CHECK(next.phi_t.at(c, c) == doctest::Approx(0.7 * 0.2).epsilon(1e-10));
    }
}

TEST_CASE("leapfrog: separable standing wave converges at second order") {
    // phi = sin(x1) sin(x2) cos(sqrt(2) t) on [0, pi]^2 vanishes on the
    // boundary for all time, so the frozen Dirichlet edges are exact.
    auto run = [](int n) {
        GridSpec2D xs;
        xs.origin = {0.0, 0.0};
        xs.h = M_PI / (n - 1);
        xs.nx = xs.ny = n;
        FieldState st{Grid2D(xs), Grid2D(xs), 0.0};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                st.phi.at(i, j) = std::sin(xs.h * i) * std::sin(xs.h * j);
        const Grid2D src(xs);
        const double T = 0.5;
        const FieldState fin = evolve(st, src, T, 0.45 * xs.h);
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double exact = std::sin(xs.h * i) * std::sin(xs.h * j) *
                                     std::cos(std::sqrt(2.0) * T);
                err = std::max(err, std::abs(fin.phi.at(i, j) - exact));
            }
        return err;
    };
    const double e1 = run(33);
    const double e2 = run(65);
    const double order = measured_order(e1, e2);
    CHECK(order >= 1.6);
    CHECK(order <= 2.4);
}

TEST_CASE("gradients: constants, linears, trig convergence") {
    const GridSpec2D xs = GridSpec2D::centered_box(1.0, 33);
    {
        FieldState st{Grid2D(xs, 3.0), Grid2D(xs), 0.0};
        const GradientFields g = gradients(st);
        for (std::size_t k = 0; k < g.dx1.size(); ++k) {
            CHECK(g.dx1.data()[k] == 0.0);
            CHECK(g.dx2.data()[k] == 0.0);
        }
    }
    {
        FieldState st{Grid2D(xs), Grid2D(xs), 0.0};
        for (int i = 0; i < xs.nx; ++i)
            for (int j = 0; j < xs.ny; ++j) st.phi.at(i, j) = xs.node(i, j).x;
        const GradientFields g = gradients(st);
        for (std::size_t k = 0; k < g.dx1.size(); ++k) {
            CHECK(g.dx1.data()[k] == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(std::abs(g.dx2.data()[k]) <= 1e-13);
        }
    }
    {
        auto err_at = [](int n) {
            const GridSpec2D s = GridSpec2D::centered_box(1.0, n);
            FieldState st{Grid2D(s), Grid2D(s), 0.0};
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const Vec2 x = s.node(i, j);
                    st.phi.at(i, j) = std::sin(x.x + 2.0 * x.y);
                }
            const GradientFields g = gradients(st);
            double err = 0.0;
            for (int i = 1; i < n - 1; ++i)
                for (int j = 1; j < n - 1; ++j) {
                    const Vec2 x = s.node(i, j);
                    err = std::max(err, std::abs(g.dx1.at(i, j) - std::cos(x.x + 2.0 * x.y)));
                    err = std::max(err,
                                   std::abs(g.dx2.at(i, j) - 2.0 * std::cos(x.x + 2.0 * x.y)));
                }
            return err;
        };
        const double order = measured_order(err_at(33), err_at(65));
        CHECK(order >= 1.7);
        CHECK(order <= 2.3);
    }
}

TEST_CASE("energy density: vacuum zero, nonnegativity, kinetic part") {
    const GridSpec2D xs = GridSpec2D::centered_box(2.0, 17);
    const GridSpec2D ps = GridSpec2D::centered_box(1.5, 33);
    {
        const Grid4D f(xs, ps);
        const MomentFields m = moments(f);
        FieldState st{Grid2D(xs), Grid2D(xs), 0.0};
        const Grid2D e = energy_density(m, gradients(st));
        for (std::size_t k = 0; k < e.size(); ++k) CHECK(e.data()[k] == 0.0);
    }
    {
        // phi = 0 with f >= 0: e = 4 pi mu_e >= 0
        const Grid4D f = bump_distribution(xs, ps, 0.9);
        const MomentFields m = moments(f);
        FieldState st{Grid2D(xs), Grid2D(xs), 0.0};
        const Grid2D e = energy_density(m, gradients(st));
        for (int i = 0; i < xs.nx; ++i)
            for (int j = 0; j < xs.ny; ++j) {
                CHECK(e.at(i, j) >= 0.0);
                CHECK(e.at(i, j) ==
                      doctest::Approx(kFourPi * m.mu_e.at(i, j)).epsilon(1e-14));
            }
    }
}

TEST_CASE("boundary flux combination: two independent evaluations agree") {
    // e + omega.(-phi_t grad phi + 4 pi mu_p) =
    //   (omega ^ grad phi)^2 / 2 + (phi_t - grad phi.omega)^2 / 2
    //   + 4 pi int sqrt(1+|p|^2)(1 + vhat.omega) f dp
    const GridSpec2D xs = GridSpec2D::centered_box(2.0, 9);
    const GridSpec2D ps = GridSpec2D::centered_box(1.5, 41);
    const Grid4D f = bump_distribution(xs, ps, 0.9, {0.25, -0.15});
    const MomentFields mom = moments(f);

    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int i = 1 + static_cast<int>((uni(rng) + 1.0) / 2.0 * (xs.nx - 2));
        const int j = 1 + static_cast<int>((uni(rng) + 1.0) / 2.0 * (xs.ny - 2));
        const double ang = M_PI * uni(rng);
        const Vec2 om{std::cos(ang), std::sin(ang)};
        const double phi_t = uni(rng);
        const Vec2 grad{uni(rng), uni(rng)};

        const double e = kFourPi * mom.mu_e.at(i, j) + 0.5 * phi_t * phi_t + 0.5 * norm2(grad);
        const Vec2 flux = -phi_t * grad + kFourPi * mom.mu_p.at(i, j);
        const double lhs = e + dot(om, flux);

        // right side integrates its own kernel over the momentum grid
        double kinetic = 0.0;
        for (int k = 0; k < ps.nx; ++k)
            for (int l = 0; l < ps.ny; ++l) {
                const double v = f.at(i, j, k, l);
                if (v == 0.0) continue;
                const double wk = (k == 0 || k == ps.nx - 1) ? 0.5 : 1.0;
                const double wl = (l == 0 || l == ps.ny - 1) ? 0.5 : 1.0;
                const Momentum2 m = relativize(ps.node(k, l));
                kinetic += wk * wl * m.gamma * (1.0 + dot(m.vhat, om)) * v;
            }
        kinetic *= ps.h * ps.h;
        const double w = wedge(om, grad);
        const double rad = phi_t - dot(grad, om);
        const double rhs = 0.5 * w * w + 0.5 * rad * rad + kFourPi * kinetic;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        CHECK(rhs >= -1e-12);
    }
}

TEST_CASE("energy identity residual: exact standing wave refines at second order") {
    auto residual_at = [](int n) {
        GridSpec2D xs;
        xs.origin = {0.0, 0.0};
        xs.h = M_PI / (n - 1);
        xs.nx = xs.ny = n;
        const GridSpec2D ps = GridSpec2D::centered_box(1.0, 9);
        const Grid4D fzero(xs, ps);
        const MomentFields mom = moments(fzero);
        const double w = std::sqrt(2.0);
        const double dt = 0.45 * xs.h;
        auto level = [&](double t) {
            FieldState st{Grid2D(xs), Grid2D(xs), t};
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double sxy = std::sin(xs.h * i) * std::sin(xs.h * j);
                    st.phi.at(i, j) = sxy * std::cos(w * t);
                    st.phi_t.at(i, j) = -w * sxy * std::sin(w * t);
                }
            return st;
        };
        const FieldState a = level(0.3 - dt), b = level(0.3), c = level(0.3 + dt);
        EnergyLevel la{&mom, &a}, lb{&mom, &b}, lc{&mom, &c};
        return energy_identity_residual(la, lb, lc, dt);
    };
    const double order = measured_order(residual_at(33), residual_at(65));
    CHECK(order >= 1.6);
    CHECK(order <= 2.5);

    // identically zero solution: residual 0
    const GridSpec2D xs = GridSpec2D::centered_box(1.0, 17);
    const GridSpec2D ps = GridSpec2D::centered_box(1.0, 9);
    const Grid4D fzero(xs, ps);
    const MomentFields mom = moments(fzero);
    FieldState z{Grid2D(xs), Grid2D(xs), 0.0};
    EnergyLevel l{&mom, &z};
    CHECK(energy_identity_residual(l, l, l, 0.01) == 0.0);
}

TEST_CASE("vacuum pulse: discrete total energy drift stays small") {
    // compactly supported pulse; edges stay causally disconnected
    const GridSpec2D xs = GridSpec2D::centered_box(6.0, 97);
    const GridSpec2D ps = GridSpec2D::centered_box(1.0, 9);
    const Grid4D fzero(xs, ps);
    const MomentFields mom = moments(fzero);
    const AnalyticScalarField pulse = gaussian_field(1.0, 0.8);
    FieldState st{Grid2D(xs), Grid2D(xs), 0.0};
    for (int i = 0; i < xs.nx; ++i)
        for (int j = 0; j < xs.ny; ++j) st.phi.at(i, j) = pulse.value(xs.node(i, j));
    const Grid2D src(xs);
    const double dt = 0.45 * xs.h;
    // The continuous energy functional carries a fixed O(h^2) offset plus a
    // small oscillation on the discrete solution; the conservation claim is
    // about the secular rate over a long window.
    double e_ref = 0.0, t_ref = 0.0, e_end = 0.0;
    for (int k = 0; k < 40; ++k) {
        st = leapfrog_step(st, src, dt);
        e_end = total_energy(energy_density(mom, gradients(st)));
        if (k == 4) {
            e_ref = e_end;
            t_ref = st.time;
        }
    }
    const double rate = std::abs(e_end - e_ref) / (e_ref * (st.time - t_ref));
    CHECK(rate <= 1e-3); // relative drift per unit time
}
