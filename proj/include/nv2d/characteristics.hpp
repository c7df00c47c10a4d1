#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nv2d/field_sampler.hpp"
#include "nv2d/vec2.hpp"

namespace nv2d {

// One point of a characteristic curve: time s, position X, momentum P.
struct CharState {
    double s = 0.0;
    Vec2 X;
    Vec2 P;
};

using Trajectory = std::vector<CharState>;

// Right-hand side of the characteristic system:
//   dX/ds = Phat,
//   dP/ds = -(d_t phi + Phat . grad phi) P - grad phi / sqrt(1+|P|^2).
struct CharRhs {
    Vec2 dX;
    Vec2 dP;
};
CharRhs char_rhs(const CharState& state, const FieldSampler& field);

// One classical 4th-order step of signed size h (allocation-free; the
// semi-Lagrangian sweep calls this per node).
CharState rk4_char_step(const CharState& state, const FieldSampler& field, double h);

// Classical 4th-order fixed-step integration of the characteristic system
// from s = from to s = to (either direction); the final partial step lands on
// `to` exactly. The returned trajectory includes the initial state.
Trajectory integrate(double from, double to, const CharState& init, const FieldSampler& field,
                     double dt);

// Transported density along a trajectory anchored at s = 0:
//   f(t, x, p) = f_in(X(0), P(0)) * exp(3 phi(t, x)) * exp(-3 phi0(X(0))),
// the closed-form solution of the transport law (exp(-3 phi) f is constant
// along characteristics).
double transported_density(const Trajectory& traj,
                           const std::function<double(Vec2, Vec2)>& f_in,
                           const std::function<double(Vec2)>& phi0, double phi_now);

// Max over interior trajectory nodes of
//   | d/ds (exp(2 phi) |P|^2) + 2 exp(2 phi) Phat . grad phi |
// with the s-derivative estimated by (possibly nonuniform) centered
// differences. Zero for the exact flow.
double conformal_momentum_residual(const Trajectory& traj, const FieldSampler& field);

// Writes columns s, X1, X2, P1, P2, phi, conserved_check. The last column is
// exp(2 phi)|P|^2 + 2 int exp(2 phi) Phat.grad phi ds (trapezoid along the
// trajectory), constant up to integration error.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const FieldSampler& field);

} // namespace nv2d
