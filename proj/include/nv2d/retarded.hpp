#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "nv2d/field_solver.hpp"
#include "nv2d/grid.hpp"
#include "nv2d/initial_data.hpp"
#include "nv2d/phase_geometry.hpp"

namespace nv2d {

// Panel counts for backward-cone integrals. The radial substitution
// r = (t-tau) sin(theta) removes the square-root kernel exactly, leaving a
// smooth integrand over (tau, theta, alpha):
//   tau    - composite midpoint (no node at the cone apex tau = t),
//   theta  - composite Simpson on [0, pi/2],
//   alpha  - 2*n_theta-point rectangle rule around the circle (periodic).
struct ConeQuadratureSpec {
    int n_theta = 32;
    int n_tau = 32;
};

// int_0^t int_{|y-x|<t-tau} g(tau, y) / sqrt((t-tau)^2 - |y-x|^2) dy dtau.
double cone_quadrature(const std::function<double(double, Vec2)>& g, double t, Vec2 x,
                       int n_theta, int n_tau);

// int_0^pi dtheta / (1 - a cos theta), trapezoid with n panels; the closed
// form is pi / sqrt(1 - a^2).
double poisson_kernel_angular_integral(double a, int n);

// Solution of the homogeneous 2D wave equation with data (phi0, phi1),
// evaluated through the sin(theta)-substituted Poisson formula. Time and
// space derivatives are taken analytically under the integral sign (the
// substitution moves the t-dependence into the smooth sample point), which
// needs grad/hess of phi0 and grad of phi1.
class HomogeneousWave {
  public:
    HomogeneousWave(AnalyticScalarField phi0, AnalyticScalarField phi1, int n_theta = 64);

    double value(double t, Vec2 x) const;
    double deriv_t(double t, Vec2 x) const;
    Vec2 deriv_x(double t, Vec2 x) const;

  private:
    AnalyticScalarField phi0_;
    AnalyticScalarField phi1_;
    std::vector<double> sin_theta_;
    std::vector<double> w_theta_;
    std::vector<Vec2> omega_;
    double w_alpha_ = 0.0;
};

// One stored time level of the coupled run, as consumed by cone integrals.
// The f slice is optional: phi itself needs only mu0, while the derivative
// representations integrate kernels against f.
struct ConeLevel {
    double time = 0.0;
    FieldState field;
    GradientFields grads;
    Grid2D mu0;
    std::shared_ptr<const Grid4D> f;
};

// Ring of time levels covering [0, t]; read-only during evaluation and
// shareable across concurrent queries.
class ConeHistory {
  public:
    void add_level(ConeLevel level);
    const std::vector<ConeLevel>& levels() const { return levels_; }
    bool empty() const { return levels_.empty(); }

    // Linear-in-time bracket for tau; throws InsufficientHistoryError naming
    // the gap when tau falls outside the covered interval.
    struct Bracket {
        const ConeLevel* lo = nullptr;
        const ConeLevel* hi = nullptr;
        double w = 0.0; // interpolation weight of hi
    };
    Bracket bracket(double tau) const;

    double mu0_at(double tau, Vec2 y) const;

  private:
    std::vector<ConeLevel> levels_;
};

// phi(t, x) = phi_hom(t, x) - 2 * cone integral of mu0.
double phi_retarded(const ConeHistory& hist, const HomogeneousWave& hom, double t, Vec2 x,
                    const ConeQuadratureSpec& q = {});

// All three first derivatives of phi from their cone representations:
// homogeneous part, initial-slice term, the 1/(t-tau)-weighted a-kernel term
// and the b/c-kernel terms against S(phi) f and (grad phi) f. The momentum
// integrals run over the history's momentum grid (trapezoid).
struct DphiRepresentation {
    double dt = 0.0;
    double dx1 = 0.0;
    double dx2 = 0.0;
};
DphiRepresentation dphi_representation_all(const ConeHistory& hist, const HomogeneousWave& hom,
                                           double t, Vec2 x,
                                           const ConeQuadratureSpec& q = {});
double dphi_representation(const ConeHistory& hist, const HomogeneousWave& hom, double t,
                           Vec2 x, Deriv which, const ConeQuadratureSpec& q = {});

} // namespace nv2d
