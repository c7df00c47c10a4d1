#include "nv2d/characteristics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nv2d/errors.hpp"

namespace nv2d {

namespace {

std::string describe(const CharState& st) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "s=%.9g X=(%.9g, %.9g) P=(%.9g, %.9g)", st.s, st.X.x,
                  st.X.y, st.P.x, st.P.y);
    return buf;
}

CharRhs rhs_checked(const CharState& st, const FieldSampler& field) {
    const FieldSample f = field.sample(st.s, st.X);
    if (!std::isfinite(f.phi) || !std::isfinite(f.phi_t) || !finite(f.grad))
        throw OutOfDomainError("char_rhs: non-finite field sample at " + describe(st));
    const Momentum2 m = relativize(st.P);
    CharRhs r;
    r.dX = m.vhat;
    r.dP = -s_phi(f, m) * st.P - f.grad / m.gamma;
    return r;
}

} // namespace

CharState rk4_char_step(const CharState& st, const FieldSampler& field, double h) {
    const CharRhs k1 = rhs_checked(st, field);
    const CharState s2{st.s + 0.5 * h, st.X + 0.5 * h * k1.dX, st.P + 0.5 * h * k1.dP};
    const CharRhs k2 = rhs_checked(s2, field);
    const CharState s3{st.s + 0.5 * h, st.X + 0.5 * h * k2.dX, st.P + 0.5 * h * k2.dP};
    const CharRhs k3 = rhs_checked(s3, field);
    const CharState s4{st.s + h, st.X + h * k3.dX, st.P + h * k3.dP};
    const CharRhs k4 = rhs_checked(s4, field);
    CharState out;
    out.s = st.s + h;
    out.X = st.X + (h / 6.0) * (k1.dX + 2.0 * k2.dX + 2.0 * k3.dX + k4.dX);
    out.P = st.P + (h / 6.0) * (k1.dP + 2.0 * k2.dP + 2.0 * k3.dP + k4.dP);
    return out;
}

CharRhs char_rhs(const CharState& state, const FieldSampler& field) {
    return rhs_checked(state, field);
}

Trajectory integrate(double from, double to, const CharState& init, const FieldSampler& field,
                     double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    Trajectory traj;
    CharState cur = init;
    cur.s = from;
    traj.push_back(cur);
    const double span = to - from;
    const double dir = span >= 0.0 ? 1.0 : -1.0;
    const double total = std::abs(span);
    const long nfull = static_cast<long>(total / dt);
    for (long k = 0; k < nfull; ++k) {
        cur = rk4_char_step(cur, field, dir * dt);
        traj.push_back(cur);
    }
    const double rem = total - nfull * dt;
    if (rem > 1e-14 * (total + dt)) {
        cur = rk4_char_step(cur, field, dir * rem);
        traj.push_back(cur);
    }
    traj.back().s = to; // land exactly
    return traj;
}

double transported_density(const Trajectory& traj,
                           const std::function<double(Vec2, Vec2)>& f_in,
                           const std::function<double(Vec2)>& phi0, double phi_now) {
    if (traj.empty()) throw std::invalid_argument("transported_density: empty trajectory");
    const double span = std::abs(traj.front().s) + std::abs(traj.back().s);
    const CharState* anchor = nullptr;
    if (std::abs(traj.front().s) <= 1e-12 * (1.0 + span)) anchor = &traj.front();
    if (std::abs(traj.back().s) <= 1e-12 * (1.0 + span)) anchor = &traj.back();
    if (anchor == nullptr)
        throw std::invalid_argument("transported_density: trajectory not anchored at s = 0");
    return f_in(anchor->X, anchor->P) * std::exp(3.0 * (phi_now - phi0(anchor->X)));
}

double conformal_momentum_residual(const Trajectory& traj, const FieldSampler& field) {
    if (traj.size() < 3)
        throw std::invalid_argument("conformal_momentum_residual: need >= 3 states");
    std::vector<double> q(traj.size());      // exp(2 phi)|P|^2
    std::vector<double> drive(traj.size()); // 2 exp(2 phi) Phat.grad phi
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const FieldSample f = field.sample(traj[i].s, traj[i].X);
        const Momentum2 m = relativize(traj[i].P);
        const double e2 = std::exp(2.0 * f.phi);
        q[i] = e2 * norm2(traj[i].P);
        drive[i] = 2.0 * e2 * dot(m.vhat, f.grad);
    }
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double hl = traj[i].s - traj[i - 1].s;
        const double hr = traj[i + 1].s - traj[i].s;
        // 3-point derivative on a possibly nonuniform stencil
        const double dq = (q[i + 1] * hl * hl - q[i - 1] * hr * hr +
                           q[i] * (hr * hr - hl * hl)) /
                          (hl * hr * (hl + hr));
        worst = std::max(worst, std::abs(dq + drive[i]));
    }
    return worst;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const FieldSampler& field) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (fp == nullptr) throw std::runtime_error("cannot open " + path);
    std::fprintf(fp, "s,X1,X2,P1,P2,phi,conserved_check\n");
    double integral = 0.0;
    double prev_s = 0.0;
    double prev_drive = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const FieldSample f = field.sample(traj[i].s, traj[i].X);
        const Momentum2 m = relativize(traj[i].P);
        const double e2 = std::exp(2.0 * f.phi);
        const double drive = 2.0 * e2 * dot(m.vhat, f.grad);
        if (i > 0) integral += 0.5 * (traj[i].s - prev_s) * (drive + prev_drive);
        const double check = e2 * norm2(traj[i].P) + integral;
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", traj[i].s, traj[i].X.x,
                      traj[i].X.y, traj[i].P.x, traj[i].P.y, f.phi, check);
        prev_s = traj[i].s;
        prev_drive = drive;
    }
    std::fclose(fp);
}

} // namespace nv2d
