#pragma once

#include <cstdint>
#include <string>

#include "nv2d/grid.hpp"
#include "nv2d/initial_data.hpp"

namespace nv2d {

// Flat `key = value` run configuration. Every key is mandatory; a missing or
// unknown key is a configuration error (reproducibility over convenience).
//
//   preset           gaussian-bump | two-bump | vacuum-wave | zero
//   L                box half-width (box is [-L, L]^2)
//   nx               spatial nodes per axis
//   np               momentum nodes per axis
//   dt               time step
//   t_final          end time
//   amplitude        preset amplitude
//   width            preset spatial support radius / width
//   p_radius         preset momentum support radius
//   offset           two-bump spatial half-separation (other presets ignore it)
//   out_dir          output directory
//   snapshot_stride  steps between snapshots, 0 = none
//   history_stride   steps between stored cone-history levels
//   history_keep_f   1 = retain f slices in history (derivative probes)
//   verify_heavy     1 = verify also runs the slow dynamic order studies
//   seed             RNG seed for property sampling
struct RunConfig {
    std::string preset;
    double box_half_width = 0.0;
    int nx = 0;
    int np = 0;
    double dt = 0.0;
    double t_final = 0.0;
    double amplitude = 0.0;
    double width = 0.0;
    double p_radius = 0.0;
    double offset = 0.0;
    std::string out_dir;
    int snapshot_stride = 0;
    int history_stride = 1;
    bool history_keep_f = false;
    bool verify_heavy = false;
    std::uint64_t seed = 0;

    double h_x() const { return 2.0 * box_half_width / (nx - 1); }
    GridSpec2D xspec() const { return GridSpec2D::centered_box(box_half_width, nx); }
    // momentum grid radius: 1.5x the initial support radius
    GridSpec2D pspec(const InitialData& data) const {
        const double r = data.p_support_radius > 0.0 ? data.p_support_radius : p_radius;
        return GridSpec2D::centered_box(1.5 * r, np);
    }

    InitialData make_initial_data() const {
        return make_preset(preset, amplitude, width, p_radius, offset);
    }

    // CFL and causality constraints; throws ConfigError.
    void validate() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Applies one `key=value` override.
void apply_override(RunConfig& cfg, const std::string& assignment);

} // namespace nv2d
