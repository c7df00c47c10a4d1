#pragma once

#include "nv2d/grid.hpp"

namespace nv2d {

// Scalar field level: phi and its time derivative on one grid at one time.
// phi lives at integer time levels; phi_t carries the centered-difference
// value of the equivalent three-level scheme, which keeps the state
// self-describing for the history buffer.
struct FieldState {
    Grid2D phi;
    Grid2D phi_t;
    double time = 0.0;
};

// Momentum moments of f at one time level:
//   mu0  = int f / sqrt(1+|p|^2) dp   (wave source up to -4 pi)
//   mu_e = int sqrt(1+|p|^2) f dp     (kinetic energy density / 4 pi)
//   mu_p = int p f dp                 (momentum flux density / 4 pi)
struct MomentFields {
    Grid2D mu0;
    Grid2D mu_e;
    VecGrid2D mu_p;
};

// Trapezoid quadrature of the moments over the momentum grid. Throws
// SupportOverflowError if f is nonzero on the outermost momentum shell.
MomentFields moments(const Grid4D& f);

// One explicit step of d_t^2 phi = Lap phi + source with the 5-point
// Laplacian, written in the one-level (phi, phi_t) form that is algebraically
// equivalent to the three-level leapfrog with phi_t the centered difference.
// The equivalence needs the source at both ends of the step; the two-source
// overload takes the new-level source (an extrapolation is fine, the phi_t
// update only needs it to O(dt^2)). The single-source form holds the source
// fixed across the step. Edges are held fixed (Dirichlet; box sizing keeps
// them causally disconnected from the data). Requires dt <= 0.45 h.
FieldState leapfrog_step(const FieldState& state, const Grid2D& source, double dt);
FieldState leapfrog_step(const FieldState& state, const Grid2D& source_now,
                         const Grid2D& source_next, double dt);

// phi_t passed through plus centered spatial differences (one-sided
// second-order at edges).
struct GradientFields {
    Grid2D phi_t;
    Grid2D dx1;
    Grid2D dx2;
};
GradientFields gradients(const FieldState& state);

// e = 4 pi mu_e + (phi_t^2 + |grad phi|^2) / 2, pointwise.
Grid2D energy_density(const MomentFields& mom, const GradientFields& grads);

// Trapezoid integral of the energy density over the box.
double total_energy(const Grid2D& e);

// Max-norm over the interior of the discrete energy identity
//   d_t e + div(-phi_t grad phi + 4 pi mu_p),
// centered in time over three equally spaced levels and centered in space.
struct EnergyLevel {
    const MomentFields* mom = nullptr;
    const FieldState* field = nullptr;
};
double energy_identity_residual(const EnergyLevel& prev, const EnergyLevel& mid,
                                const EnergyLevel& next, double dt);

} // namespace nv2d
