#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "nv2d/characteristics.hpp"
#include "nv2d/errors.hpp"
#include "nv2d/field_sampler.hpp"
#include "nv2d/verify.hpp"

using namespace nv2d;

namespace {

FieldSample wavefield(double s, Vec2 x) {
    const double th = 0.7 * s + 0.9 * x.x - 0.4 * x.y;
    return {0.2 * std::sin(th), 0.14 * std::cos(th), {0.18 * std::cos(th), -0.08 * std::cos(th)}};
}

} // namespace

TEST_CASE("char_rhs cases") {
    const CharState st{0.0, {0.1, 0.2}, {0.5, -0.4}};
    {
        ZeroField f;
        const CharRhs r = char_rhs(st, f);
        const Momentum2 m = relativize(st.P);
        CHECK(norm(r.dX - m.vhat) == 0.0);
        CHECK(norm(r.dP) == 0.0);
    }
    {
        UniformRampField f(0.6);
        const CharRhs r = char_rhs(st, f);
        CHECK(norm(r.dP + 0.6 * st.P) <= 1e-15);
    }
    {
        // P = 0: dP = -grad phi (gamma = 1, vhat = 0)
        AnalyticField f(wavefield);
        const CharState rest{0.3, {0.1, 0.2}, {0.0, 0.0}};
        const CharRhs r = char_rhs(rest, f);
        const FieldSample fs = wavefield(0.3, rest.X);
        CHECK(norm(r.dP + fs.grad) <= 1e-15);
    }
    {
        AnalyticField bad([](double, Vec2) {
            return FieldSample{std::nan(""), 0.0, {0.0, 0.0}};
        });
        CHECK_THROWS_AS(char_rhs(st, bad), OutOfDomainError);
    }
}

TEST_CASE("integrate: free transport exact, partial final step lands on `to`") {
    ZeroField field;
    const CharState init{0.0, {0.4, -0.3}, {1.2, 0.7}};
    const Trajectory traj = integrate(0.0, 1.0, init, field, 0.3); // 3 full + partial
    CHECK(traj.back().s == 1.0);
    const Momentum2 m = relativize(init.P);
    CHECK(norm(traj.back().X - (init.X + 1.0 * m.vhat)) <= 1e-14);
    CHECK_THROWS_AS(integrate(0.0, 1.0, init, field, -0.1), std::invalid_argument);
}

TEST_CASE("integrate backward and round trip") {
    AnalyticField field(wavefield);
    const CharState init{0.7, {0.2, 0.1}, {0.8, -0.5}};
    const Trajectory back = integrate(0.7, 0.0, init, field, 0.01);
    CHECK(back.back().s == 0.0);
    const Trajectory fwd = integrate(0.0, 0.7, back.back(), field, 0.01);
    CHECK(norm(fwd.back().X - init.X) <= 1e-9);
    CHECK(norm(fwd.back().P - init.P) <= 1e-9);
}

TEST_CASE("transported_density") {
    auto f_in = [](Vec2 x, Vec2 p) { return std::exp(-norm2(x) - norm2(p)); };
    auto phi0 = [](Vec2) { return 0.0; };
    {
        // phi = 0: the foot value unchanged
        ZeroField field;
        const CharState init{0.8, {0.3, -0.1}, {0.5, 0.2}};
        const Trajectory traj = integrate(0.8, 0.0, init, field, 0.05);
        const double got = transported_density(traj, f_in, phi0, 0.0);
        const Momentum2 m = relativize(init.P);
        CHECK(got == doctest::Approx(f_in(init.X - 0.8 * m.vhat, init.P)).epsilon(1e-12));
    }
    {
        // vacuum stays vacuum
        ZeroField field;
        const Trajectory traj = integrate(0.5, 0.0, {0.5, {0.0, 0.0}, {0.1, 0.0}}, field, 0.05);
        const double got =
            transported_density(traj, [](Vec2, Vec2) { return 0.0; }, phi0, 0.3);
        CHECK(got == 0.0);
    }
    {
        // not anchored at s = 0
        ZeroField field;
        const Trajectory traj = integrate(0.8, 0.2, {0.8, {0.0, 0.0}, {0.1, 0.0}}, field, 0.1);
        CHECK_THROWS_AS(transported_density(traj, f_in, phi0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("transported_density matches the integrated density ODE at 4th order") {
    // The closed form is checked against an independent integration of
    // d/ds W = 3 S(phi) W along the curve; deviation = O(dt^4).
    AnalyticField field(wavefield);
    auto f_in = [](Vec2 x, Vec2 p) { return 1.0 + 0.5 * std::sin(x.x + p.y); };
    auto phi0 = [&](Vec2 x) { return wavefield(0.0, x).phi; };

    struct Aug {
        CharState st;
        double w;
    };
    auto rhs = [&](const Aug& a) {
        const CharRhs r = char_rhs(a.st, field);
        const double sp = s_phi(field.sample(a.st.s, a.st.X), relativize(a.st.P));
        return Aug{CharState{1.0, r.dX, r.dP}, 3.0 * sp * a.w};
    };
    auto rk4 = [&](Aug a, double h) {
        auto mad = [](const Aug& x, const Aug& d, double c) {
            return Aug{CharState{x.st.s + c * d.st.s, x.st.X + c * d.st.X, x.st.P + c * d.st.P},
                       x.w + c * d.w};
        };
        const Aug k1 = rhs(a);
        const Aug k2 = rhs(mad(a, k1, 0.5 * h));
        const Aug k3 = rhs(mad(a, k2, 0.5 * h));
        const Aug k4 = rhs(mad(a, k3, h));
        a.st.s += h;
        a.st.X += (h / 6.0) * (k1.st.X + 2.0 * k2.st.X + 2.0 * k3.st.X + k4.st.X);
        a.st.P += (h / 6.0) * (k1.st.P + 2.0 * k2.st.P + 2.0 * k3.st.P + k4.st.P);
        a.w += (h / 6.0) * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
        return a;
    };

    double prev = 0.0;
    double order = 1e9;
    double dt = 0.1;
    const CharState start{0.0, {0.25, -0.15}, {0.6, 0.3}};
    for (int lvl = 0; lvl < 3; ++lvl, dt *= 0.5) {
        Aug a{start, f_in(start.X, start.P)};
        const int n = static_cast<int>(std::lround(1.0 / dt));
        for (int k = 0; k < n; ++k) a = rk4(a, dt);

        // closed form along a backward trace anchored at s = 0
        const Trajectory back = integrate(1.0, 0.0, a.st, field, dt);
        const double closed =
            transported_density(back, f_in, phi0, field.sample(1.0, a.st.X).phi);
        const double err = std::abs(a.w - closed) / std::abs(closed);
        if (lvl > 0) order = std::min(order, measured_order(prev, err));
        prev = err;
    }
    CHECK(order >= 3.5);
}

TEST_CASE("conformal momentum residual") {
    {
        ZeroField field;
        const Trajectory traj = integrate(0.0, 1.0, {0.0, {0.0, 0.0}, {0.7, -0.2}}, field, 0.05);
        CHECK(conformal_momentum_residual(traj, field) <= 1e-13);
    }
    {
        UniformRampField field(0.4);
        const Trajectory traj =
            integrate(0.0, 1.0, {0.0, {0.0, 0.0}, {0.7, -0.2}}, field, 0.01);
        CHECK(conformal_momentum_residual(traj, field) <= 1e-4);
    }
    ZeroField field;
    const Trajectory two = integrate(0.0, 0.1, {0.0, {0.0, 0.0}, {0.1, 0.0}}, field, 0.1);
    CHECK_THROWS_AS(conformal_momentum_residual(two, field), std::invalid_argument);
}

TEST_CASE("trajectory csv dump") {
    AnalyticField field(wavefield);
    const Trajectory traj = integrate(0.0, 0.5, {0.0, {0.1, 0.0}, {0.4, 0.2}}, field, 0.05);
    const std::string path = "traj_test.csv";
    write_trajectory_csv(path, traj, field);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "s,X1,X2,P1,P2,phi,conserved_check");
    int rows = 0;
    std::string line;
    double first_check = 0.0, last_check = 0.0;
    while (std::getline(in, line)) {
        const auto pos = line.rfind(',');
        const double check = std::stod(line.substr(pos + 1));
        if (rows == 0) first_check = check;
        last_check = check;
        ++rows;
    }
    CHECK(rows == static_cast<int>(traj.size()));
    // conserved column drifts only by integration error
    CHECK(std::abs(last_check - first_check) <= 1e-4 * (1.0 + std::abs(first_check)));
    std::remove(path.c_str());
}
