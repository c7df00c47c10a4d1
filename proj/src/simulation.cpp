#include "nv2d/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "nv2d/errors.hpp"
#include "nv2d/grid_field.hpp"
#include "nv2d/snapshot.hpp"

namespace nv2d {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

FieldState sample_field_data(const InitialData& data, const GridSpec2D& xs) {
    FieldState st;
    st.phi = Grid2D(xs);
    st.phi_t = Grid2D(xs);
    st.time = 0.0;
    for (int i = 0; i < xs.nx; ++i)
        for (int j = 0; j < xs.ny; ++j) {
            const Vec2 x = xs.node(i, j);
            st.phi.at(i, j) = data.phi0.value(x);
            st.phi_t.at(i, j) = data.phi1.value(x);
        }
    return st;
}

// sup over the grid of exp(-3 phi) f
double conformal_sup(const Grid4D& f, const Grid2D& phi) {
    const GridSpec2D& xs = f.xspec();
    double sup = 0.0;
    for (int i = 0; i < xs.nx; ++i)
        for (int j = 0; j < xs.ny; ++j) {
            const double* slab = f.pslice(i, j);
            double m = 0.0;
            const std::size_t n = f.pspec().count();
            for (std::size_t k = 0; k < n; ++k) m = std::max(m, slab[k]);
            if (m > 0.0) sup = std::max(sup, m * std::exp(-3.0 * phi.at(i, j)));
        }
    return sup;
}

std::string snapshot_name(const std::string& dir, const char* fieldname, int step) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%06d.nv2d", fieldname, step);
    return dir + "/" + buf;
}

void write_snapshot_checked(int step, const FieldState& fs, const Grid4D& f,
                            const std::string& dir) {
    // never write a snapshot with mass on the guard shells
    const GridSpec2D& ps = f.pspec();
    const GridSpec2D& xs = f.xspec();
    for (int ix = 0; ix < xs.nx; ++ix)
        for (int jx = 0; jx < xs.ny; ++jx) {
            const double* slab = f.pslice(ix, jx);
            for (int ip = 0; ip < ps.nx; ++ip)
                for (int jp = 0; jp < ps.ny; ++jp)
                    if ((ip < 2 || ip >= ps.nx - 2 || jp < 2 || jp >= ps.ny - 2) &&
                        slab[ip * ps.ny + jp] != 0.0)
                        throw SupportOverflowError(
                            "snapshot: f nonzero on the momentum guard shells");
        }
    write_snapshot(snapshot_name(dir, "phi", step), fs.phi);
    write_snapshot(snapshot_name(dir, "phit", step), fs.phi_t);
    write_snapshot(snapshot_name(dir, "f", step), f);
}

} // namespace

RunResult run_simulation(const RunConfig& cfg) {
    cfg.validate();
    RunResult out;
    out.config = cfg;
    out.data = cfg.make_initial_data();
    const InitialData& data = out.data;

    const GridSpec2D xs = cfg.xspec();
    const GridSpec2D psp = cfg.pspec(data);

    DistributionGrid f = sample_initial(data, xs, psp);
    FieldState field = sample_field_data(data, xs);
    GradientFields grads = gradients(field);
    MomentFields mom = moments(f.f);

    double sup_f_in = 0.0;
    for (std::size_t k = 0; k < f.f.size(); ++k)
        sup_f_in = std::max(sup_f_in, f.f.data()[k]);
    const double threshold = 1e-12 * sup_f_in;

    // seed the running momenta suprema with the recorded analytic support so
    // P(0) = R0 + 3 exactly (the discrete node sup sits strictly inside)
    double running_p = data.p_support_radius;
    double running_barp = 0.0;
    for (int i = 0; i < xs.nx; ++i)
        for (int j = 0; j < xs.ny; ++j) {
            const Vec2 x = xs.node(i, j);
            const double r = data.p_radius_at(x);
            if (r > 0.0) running_barp = std::max(running_barp, std::exp(data.phi0.value(x)) * r);
        }

    const double conformal_init = conformal_sup(f.f, field.phi);

    const bool has_out = !cfg.out_dir.empty();
    if (has_out) std::filesystem::create_directories(cfg.out_dir);

    auto flush = [&](const std::vector<DiagnosticsRecord>& rows) {
        if (has_out) write_diagnostics_csv(cfg.out_dir + "/diagnostics.csv", rows);
    };

    auto snapshot = [&](int step, const FieldState& fs, const Grid4D& fgrid) {
        if (!has_out || cfg.snapshot_stride <= 0) return;
        if (step % cfg.snapshot_stride != 0) return;
        write_snapshot_checked(step, fs, fgrid, cfg.out_dir);
    };

    auto push_history = [&](int step, int total_steps, const FieldState& fs,
                            const GradientFields& gr, const MomentFields& mm,
                            const Grid4D& fgrid) {
        if (step % cfg.history_stride != 0 && step != total_steps) return;
        ConeLevel level;
        level.time = fs.time;
        level.field = fs;
        level.grads = gr;
        level.mu0 = mm.mu0;
        if (cfg.history_keep_f) level.f = std::make_shared<Grid4D>(fgrid);
        out.history.add_level(std::move(level));
    };

    auto diag_row = [&](const MomentFields& mm, const GradientFields& gr,
                        const FieldState& fs, const DistributionGrid& fg, double residual,
                        double clipped) {
        DiagnosticsRecord r;
        r.t = fs.time;
        r.total_energy = total_energy(energy_density(mm, gr));
        r.energy_residual = residual;
        const SupportReport rep = support(fg, fs.phi, running_p, running_barp, threshold);
        running_p = rep.P_t - 3.0;
        running_barp = rep.barP_t - 3.0;
        r.P_t = rep.P_t;
        r.barP_t = rep.barP_t;
        r.sup_f = rep.sup_f;
        r.mass = rep.mass;
        if (conformal_init > 0.0)
            r.conformal_drift = std::abs(conformal_sup(fg.f, fs.phi) / conformal_init - 1.0);
        r.clipped_mass = clipped;
        return r;
    };

    const int total_steps =
        static_cast<int>(std::ceil(cfg.t_final / cfg.dt - 1e-12));

    out.diagnostics.push_back(diag_row(mom, grads, field, f, 0.0, 0.0));
    push_history(0, total_steps, field, grads, mom, f.f);
    snapshot(0, field, f.f);

    // three-level window for the energy-identity residual
    struct Level {
        MomentFields mom;
        FieldState field;
        double dt_from_prev = 0.0;
    };
    std::deque<Level> window;
    window.push_back({mom, field, 0.0});
    double last_residual = 0.0;

    const Grid2D* mu0_prev = nullptr; // previous-level source for extrapolation
    Grid2D mu0_prev_store;
    try {
        for (int step = 1; step <= total_steps; ++step) {
            const double dt =
                std::min(cfg.dt, cfg.t_final - (step - 1) * cfg.dt); // final partial step
            Grid2D source(xs);
            Grid2D source_next(xs);
            for (int i = 0; i < xs.nx; ++i)
                for (int j = 0; j < xs.ny; ++j) {
                    const double mu = mom.mu0.at(i, j);
                    source.at(i, j) = -kFourPi * mu;
                    // linear extrapolation of the source to the new level;
                    // the phi_t update needs it to O(dt^2) only
                    const double mu_next =
                        mu0_prev != nullptr ? 2.0 * mu - mu0_prev->at(i, j) : mu;
                    source_next.at(i, j) = -kFourPi * mu_next;
                }

            FieldState field_next = leapfrog_step(field, source, source_next, dt);
            GradientFields grads_next = gradients(field_next);

            GridFieldSampler sampler;
            sampler.add_level(field, grads);
            sampler.add_level(field_next, grads_next);

            SlStepStats stats;
            DistributionGrid f_next = sl_step(f, sampler, dt, &stats);
            MomentFields mom_next = moments(f_next.f);

            window.push_back({mom_next, field_next, dt});
            if (window.size() > 3) window.pop_front();
            if (window.size() == 3 &&
                std::abs(window[1].dt_from_prev - window[2].dt_from_prev) < 1e-12 &&
                window[1].dt_from_prev > 0.0) {
                EnergyLevel a{&window[0].mom, &window[0].field};
                EnergyLevel b{&window[1].mom, &window[1].field};
                EnergyLevel c{&window[2].mom, &window[2].field};
                last_residual = energy_identity_residual(a, b, c, window[2].dt_from_prev);
            }

            mu0_prev_store = std::move(mom.mu0);
            mu0_prev = &mu0_prev_store;
            f = std::move(f_next);
            field = std::move(field_next);
            grads = std::move(grads_next);
            mom = std::move(mom_next);

            out.diagnostics.push_back(diag_row(mom, grads, field, f, last_residual,
                                               stats.clipped_mass));
            push_history(step, total_steps, field, grads, mom, f.f);
            snapshot(step, field, f.f);
        }
    } catch (const std::exception& e) {
        flush(out.diagnostics);
        std::ostringstream msg;
        msg << "run aborted at t=" << field.time << " after "
            << (out.diagnostics.size() - 1) << " steps (preset=" << cfg.preset
            << ", nx=" << cfg.nx << ", np=" << cfg.np << ", dt=" << cfg.dt
            << "): " << e.what();
        throw std::runtime_error(msg.str());
    }

    flush(out.diagnostics);
    out.final_field = field;
    out.final_grads = grads;
    out.final_f = std::move(f);
    return out;
}

std::vector<ProbePoint> read_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open points file " + path);
    std::vector<ProbePoint> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        ProbePoint p;
        if (!(ss >> p.t)) continue; // blank line
        if (!(ss >> p.x.x >> p.x.y))
            throw std::runtime_error("points file line " + std::to_string(lineno) +
                                     ": expected t x1 x2");
        pts.push_back(p);
    }
    return pts;
}

namespace {

double history_phi(const ConeHistory& hist, double t, Vec2 x) {
    const ConeHistory::Bracket b = hist.bracket(t);
    if (b.lo == b.hi) return b.lo->field.phi.interp(x);
    return (1.0 - b.w) * b.lo->field.phi.interp(x) + b.w * b.hi->field.phi.interp(x);
}

} // namespace

int probe_to_csv(const RunResult& result, const std::vector<ProbePoint>& points,
                 const std::string& out_path, const ConeQuadratureSpec& quad) {
    std::FILE* fp = std::fopen(out_path.c_str(), "w");
    if (fp == nullptr) throw std::runtime_error("cannot open " + out_path);
    std::fprintf(fp, "%s\n", kProbeHeader);

    const HomogeneousWave hom(result.data.phi0, result.data.phi1);
    const double t_end = result.history.empty() ? 0.0 : result.history.levels().back().time;
    int failures = 0;

    for (const ProbePoint& pt : points) {
        try {
            const double phi_grid = history_phi(result.history, pt.t, pt.x);
            const double phi_ret = phi_retarded(result.history, hom, pt.t, pt.x, quad);
            const DphiRepresentation rep =
                dphi_representation_all(result.history, hom, pt.t, pt.x, quad);

            auto pr = [&](double t, Vec2 x) {
                return phi_retarded(result.history, hom, t, x, quad);
            };
            const double dx = 0.05;
            const double fd_x1 =
                (pr(pt.t, pt.x + Vec2{dx, 0.0}) - pr(pt.t, pt.x - Vec2{dx, 0.0})) / (2.0 * dx);
            const double fd_x2 =
                (pr(pt.t, pt.x + Vec2{0.0, dx}) - pr(pt.t, pt.x - Vec2{0.0, dx})) / (2.0 * dx);
            const double dtm = std::min(0.05, std::max(pt.t, t_end - pt.t));
            double fd_t;
            if (pt.t + dtm <= t_end && pt.t - dtm >= 0.0)
                fd_t = (pr(pt.t + dtm, pt.x) - pr(pt.t - dtm, pt.x)) / (2.0 * dtm);
            else if (pt.t - 2.0 * dtm >= 0.0) // one-sided at the end of the run
                fd_t = (3.0 * phi_ret - 4.0 * pr(pt.t - dtm, pt.x) +
                        pr(pt.t - 2.0 * dtm, pt.x)) /
                       (2.0 * dtm);
            else
                fd_t = (pr(pt.t + dtm, pt.x) - phi_ret) / dtm;

            std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          pt.t, pt.x.x, pt.x.y, phi_grid, phi_ret, rep.dt, rep.dx1, rep.dx2,
                          fd_t, fd_x1, fd_x2);
        } catch (const std::exception& e) {
            ++failures;
            std::fprintf(fp, "%.17g,%.17g,%.17g,ERR,ERR,ERR,ERR,ERR,ERR,ERR,ERR\n", pt.t,
                          pt.x.x, pt.x.y);
            std::fprintf(stderr, "probe (%.6g, %.6g, %.6g): %s\n", pt.t, pt.x.x, pt.x.y,
                         e.what());
        }
    }
    std::fclose(fp);
    return failures;
}

} // namespace nv2d
