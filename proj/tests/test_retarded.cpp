#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "nv2d/errors.hpp"
#include "nv2d/field_solver.hpp"
#include "nv2d/initial_data.hpp"
#include "nv2d/retarded.hpp"

using namespace nv2d;

namespace {

// history level with constant mu0 and zero field
ConeLevel flat_level(double t, const GridSpec2D& xs, double mu0_value,
                     std::shared_ptr<const Grid4D> f = nullptr) {
    ConeLevel l;
    l.time = t;
    l.field = FieldState{Grid2D(xs), Grid2D(xs), t};
    l.grads = GradientFields{Grid2D(xs), Grid2D(xs), Grid2D(xs)};
    l.mu0 = Grid2D(xs, mu0_value);
    l.f = std::move(f);
    return l;
}

} // namespace

TEST_CASE("cone quadrature analytic cases") {
    CHECK(cone_quadrature([](double, Vec2) { return 0.0; }, 1.0, {0.0, 0.0}, 32, 32) == 0.0);
    const double got = cone_quadrature([](double, Vec2) { return 1.0; }, 1.0, {0.3, -0.4}, 64, 64);
    CHECK(got == doctest::Approx(M_PI).epsilon(1e-8));
    CHECK(cone_quadrature([](double, Vec2) { return 1.0; }, 0.0, {0.0, 0.0}, 16, 16) == 0.0);
    CHECK_THROWS_AS(cone_quadrature([](double, Vec2) { return 1.0; }, -0.1, {0.0, 0.0}, 8, 8),
                    std::invalid_argument);
}

TEST_CASE("angular integral matches the closed form") {
    for (double a : {0.0, 0.5, 0.9, 0.99}) {
        const double exact = M_PI / std::sqrt(1.0 - a * a);
        CHECK(poisson_kernel_angular_integral(a, 4096) ==
              doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("homogeneous wave derivatives: sin data and FD cross-check") {
    AnalyticScalarField zero;
    AnalyticScalarField s;
    s.value = [](Vec2 x) { return std::sin(x.x); };
    s.grad = [](Vec2 x) { return Vec2{std::cos(x.x), 0.0}; };
    s.hess = [](Vec2 x) { return Hess2{-std::sin(x.x), 0.0, 0.0}; };
    HomogeneousWave hom(s, zero, 64);
    const Vec2 x{0.4, -0.2};
    const double t = 0.9;
    CHECK(hom.value(t, x) == doctest::Approx(std::sin(x.x) * std::cos(t)).epsilon(1e-8));
    CHECK(hom.deriv_t(t, x) == doctest::Approx(-std::sin(x.x) * std::sin(t)).epsilon(1e-8));
    const Vec2 dx = hom.deriv_x(t, x);
    CHECK(dx.x == doctest::Approx(std::cos(x.x) * std::cos(t)).epsilon(1e-8));
    CHECK(std::abs(dx.y) <= 1e-10);

    // analytic derivatives agree with centered differences of value()
    const double d = 1e-4;
    const double fd_t = (hom.value(t + d, x) - hom.value(t - d, x)) / (2.0 * d);
    CHECK(hom.deriv_t(t, x) == doctest::Approx(fd_t).epsilon(1e-6));
    const double fd_x1 =
        (hom.value(t, x + Vec2{d, 0.0}) - hom.value(t, x - Vec2{d, 0.0})) / (2.0 * d);
    CHECK(dx.x == doctest::Approx(fd_x1).epsilon(1e-6));
}

TEST_CASE("cone history bracketing and gaps") {
    const GridSpec2D xs = GridSpec2D::centered_box(3.0, 17);
    ConeHistory hist;
    CHECK_THROWS_AS(hist.bracket(0.0), InsufficientHistoryError);
    hist.add_level(flat_level(0.0, xs, 1.0));
    hist.add_level(flat_level(0.5, xs, 1.0));
    hist.add_level(flat_level(1.0, xs, 1.0));
    CHECK_THROWS_AS(hist.add_level(flat_level(0.75, xs, 1.0)), std::invalid_argument);
    CHECK(hist.bracket(0.25).w == doctest::Approx(0.5));
    CHECK_THROWS_AS(hist.bracket(1.2), InsufficientHistoryError);
    ConeHistory late;
    late.add_level(flat_level(0.5, xs, 1.0));
    CHECK_THROWS_AS(late.bracket(0.0), InsufficientHistoryError);
}

TEST_CASE("phi_retarded: manufactured constant source gives -2 pi t^2 + vacuum case") {
    const GridSpec2D xs = GridSpec2D::centered_box(3.0, 41);
    AnalyticScalarField zero;
    HomogeneousWave hom(zero, zero, 32);
    {
        ConeHistory hist;
        for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) hist.add_level(flat_level(t, xs, 1.0));
        const double got = phi_retarded(hist, hom, 1.0, {0.0, 0.0}, {64, 64});
        CHECK(got == doctest::Approx(-2.0 * M_PI).epsilon(1e-6));
    }
    {
        // f = 0: phi_retarded equals the homogeneous part exactly
        AnalyticScalarField pulse = gaussian_field(0.7, 0.9);
        HomogeneousWave hom_pulse(pulse, zero, 32);
        ConeHistory hist;
        for (double t : {0.0, 0.5, 1.0}) hist.add_level(flat_level(t, xs, 0.0));
        const Vec2 x{0.2, 0.3};
        CHECK(phi_retarded(hist, hom_pulse, 1.0, x, {32, 32}) ==
              doctest::Approx(hom_pulse.value(1.0, x)).epsilon(1e-12));
    }
}

TEST_CASE("dphi_representation: vacuum reduction and missing-f error") {
    const GridSpec2D xs = GridSpec2D::centered_box(3.0, 25);
    const GridSpec2D ps = GridSpec2D::centered_box(1.0, 9);
    AnalyticScalarField zero;
    AnalyticScalarField pulse = gaussian_field(0.5, 0.8);
    HomogeneousWave hom(pulse, zero, 48);

    ConeHistory no_f;
    no_f.add_level(flat_level(0.0, xs, 0.0));
    no_f.add_level(flat_level(0.8, xs, 0.0));
    CHECK_THROWS_AS(dphi_representation_all(no_f, hom, 0.8, {0.1, 0.0}, {16, 16}),
                    InsufficientHistoryError);

    auto fzero = std::make_shared<const Grid4D>(xs, ps);
    ConeHistory hist;
    hist.add_level(flat_level(0.0, xs, 0.0, fzero));
    hist.add_level(flat_level(0.8, xs, 0.0, fzero));
    const Vec2 x{0.1, -0.3};
    const DphiRepresentation rep = dphi_representation_all(hist, hom, 0.8, x, {16, 16});
    CHECK(rep.dt == doctest::Approx(hom.deriv_t(0.8, x)).epsilon(1e-12));
    CHECK(rep.dx1 == doctest::Approx(hom.deriv_x(0.8, x).x).epsilon(1e-12));
    CHECK(rep.dx2 == doctest::Approx(hom.deriv_x(0.8, x).y).epsilon(1e-12));
    CHECK(dphi_representation(hist, hom, 0.8, x, Deriv::x1, {16, 16}) ==
          doctest::Approx(rep.dx1));
}

TEST_CASE("dphi_representation: swap symmetry of the x rows") {
    // static f symmetric under (x1,x2,p1,p2) -> (x2,x1,p2,p1); zero field.
    const GridSpec2D xs = GridSpec2D::centered_box(3.0, 33);
    const GridSpec2D ps = GridSpec2D::centered_box(1.2, 17);
    auto f = std::make_shared<Grid4D>(xs, ps);
    for (int i = 0; i < xs.nx; ++i)
        for (int j = 0; j < xs.ny; ++j) {
            const Vec2 x = xs.node(i, j);
            const double gx = bump5(norm2(x - Vec2{0.4, 0.4}) / 1.0);
            if (gx == 0.0) continue;
            for (int k = 2; k < ps.nx - 2; ++k)
                for (int l = 2; l < ps.ny - 2; ++l) {
                    const Vec2 p = ps.node(k, l);
                    f->at(i, j, k, l) = gx * bump5(norm2(p - Vec2{0.2, 0.2}) / 0.25);
                }
        }
    Grid2D mu0(xs);
    for (int i = 0; i < xs.nx; ++i)
        for (int j = 0; j < xs.ny; ++j) {
            double s = 0.0;
            for (int k = 0; k < ps.nx; ++k)
                for (int l = 0; l < ps.ny; ++l)
                    s += f->at(i, j, k, l) / relativize(ps.node(k, l)).gamma;
            mu0.at(i, j) = s * ps.h * ps.h;
        }

    AnalyticScalarField zero;
    HomogeneousWave hom(zero, zero, 32);
    ConeHistory hist;
    for (double t : {0.0, 0.4, 0.8}) {
        ConeLevel l = flat_level(t, xs, 0.0, f);
        l.mu0 = mu0;
        hist.add_level(std::move(l));
    }
    const DphiRepresentation a = dphi_representation_all(hist, hom, 0.8, {0.5, -0.1}, {16, 16});
    const DphiRepresentation b = dphi_representation_all(hist, hom, 0.8, {-0.1, 0.5}, {16, 16});
    CHECK(a.dx1 == doctest::Approx(b.dx2).epsilon(1e-12));
    CHECK(a.dx2 == doctest::Approx(b.dx1).epsilon(1e-12));
    CHECK(a.dt == doctest::Approx(b.dt).epsilon(1e-12));

    // on the diagonal the two spatial rows coincide
    const DphiRepresentation d = dphi_representation_all(hist, hom, 0.8, {0.3, 0.3}, {16, 16});
    CHECK(d.dx1 == doctest::Approx(d.dx2).epsilon(1e-12));
}

TEST_CASE("cone quadrature converges on an interpolated history source") {
    // phi_retarded against a manufactured smooth mu0(tau, y)
    const GridSpec2D xs = GridSpec2D::centered_box(3.0, 129);
    AnalyticScalarField zero;
    HomogeneousWave hom(zero, zero, 16);
    auto mu0_exact = [](double tau, Vec2 y) {
        return (1.0 + 0.5 * std::sin(1.3 * tau)) * std::exp(-norm2(y));
    };
    ConeHistory hist;
    const int nlevels = 65;
    for (int k = 0; k < nlevels; ++k) {
        const double t = k / double(nlevels - 1);
        ConeLevel l = flat_level(t, xs, 0.0);
        for (int i = 0; i < xs.nx; ++i)
            for (int j = 0; j < xs.ny; ++j) l.mu0.at(i, j) = mu0_exact(t, xs.node(i, j));
        hist.add_level(std::move(l));
    }
    const Vec2 x{0.2, 0.1};
    const double direct = -2.0 * cone_quadrature(mu0_exact, 1.0, x, 128, 512);
    const double coarse = phi_retarded(hist, hom, 1.0, x, {8, 8});
    const double fine = phi_retarded(hist, hom, 1.0, x, {48, 48});
    CHECK(std::abs(fine - direct) < std::abs(coarse - direct));
    CHECK(fine == doctest::Approx(direct).epsilon(3e-3));
}
